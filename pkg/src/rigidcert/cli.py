"""
rigidcert command line.

Exit codes: 0 success / property holds, 1 property fails, 2 hypothesis
gate, 3 retry budget exhausted, 4 I/O or parse error, 5 inconclusive.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .certify import certify_superstable, core_of, ggr_report
from .construct import (DEFAULT_RETRY_BUDGET, RandomSource, bolker_roth_dim, build_core, build_kmn,
                        hendrickson_gate)
from .errors import (DegenerateFramework, HypothesisViolation, RetryExhausted,
                     StressSearchOutOfScope)
from .framework import dumps, framework_from_dict, framework_to_dict
from .rigidity import is_infinitesimally_rigid, maxwell_audit, stress_basis
from .veronese import HullStatus, hull_relation

log = logging.getLogger("rigidcert")

EXIT_OK, EXIT_FAIL, EXIT_GATE, EXIT_RETRY, EXIT_IO, EXIT_INCONCLUSIVE = 0, 1, 2, 3, 4, 5

HULL_EXIT = {
    HullStatus.RELATIVE_INTERIOR_INTERSECT: EXIT_OK,
    HullStatus.DISJOINT_STRICTLY_SEPARABLE: EXIT_FAIL,
    HullStatus.BOUNDARY_INCONCLUSIVE: EXIT_INCONCLUSIVE,
}


def retry_budget() -> int:
    raw = os.environ.get("RIGIDCERT_RETRY_BUDGET")
    if raw is None:
        return DEFAULT_RETRY_BUDGET
    try:
        budget = int(raw)
    except ValueError:
        raise SystemExit(f"RIGIDCERT_RETRY_BUDGET must be an integer, got {raw!r}")
    if budget < 1:
        raise SystemExit("RIGIDCERT_RETRY_BUDGET must be positive")
    return budget


def _emit(payload: dict, out: str | None, fmt: str, text_lines: list[str]) -> int:
    """Write JSON to ``out`` (or stdout in json mode); text mode prints a summary."""
    text = dumps(payload)
    if out:
        try:
            Path(out).write_text(text, encoding="utf-8")
        except OSError as exc:
            print(f"error: cannot write {out}: {exc}", file=sys.stderr)
            return EXIT_IO
    if fmt == "json":
        if not out:
            sys.stdout.write(text)
    else:
        print("\n".join(text_lines))
    return EXIT_OK


def _gate_message(d, m, n) -> list[str]:
    gate = hendrickson_gate(d, m, n)
    return list(gate.reasons)


def _row(label, computed, expected) -> str:
    mark = "ok" if computed == expected else "MISMATCH"
    return f"  {label:<28} computed {computed!s:>6}   expected {expected!s:>6}   {mark}"


def _audit_lines(audit) -> list[str]:
    return [
        f"K_{{{audit.m},{audit.n}}} in dimension {audit.d}, seed {audit.seed}, retries {audit.retries_used}",
        _row("rigidity rank", audit.rigidity_rank, audit.rigidity_rank_expected),
        _row("stress dimension", audit.stress_dim, audit.stress_dim_expected),
        _row("Gale-rank stress count", audit.bolker_roth_dim, audit.stress_dim_expected),
        _row("core super stable", audit.core_superstable, True),
        _row("general position", audit.general_position, True),
        _row("Veronese full span", audit.veronese_full_span, True),
        f"  audit {'PASSED' if audit.passed else 'FAILED'}",
    ]


def cmd_construct(args) -> int:
    seed = args.seed
    if args.core:
        F = build_core(args.d)
        cert = certify_superstable(F)
        payload = framework_to_dict(F)
        payload["seed"] = seed
        payload["core_certificate"] = cert.to_json()
        lines = [f"core K_{{{args.d + 1},{args.d + 1}}} in dimension {args.d}",
                 _row("stress matrix rank", cert.stress_matrix_rank, cert.expected_rank),
                 _row("PSD", cert.psd.is_psd, True),
                 _row("conic at infinity", cert.conic.conic_exists, False)]
        return _emit(payload, args.output, args.format, lines)
    if args.m is None or args.n is None:
        print("error: construct needs -m and -n (or --core)", file=sys.stderr)
        return EXIT_GATE
    reasons = _gate_message(args.d, args.m, args.n)
    if reasons:
        print("hypothesis gate failed: " + "; ".join(reasons), file=sys.stderr)
        return EXIT_GATE
    try:
        F, audit = build_kmn(args.d, args.m, args.n, RandomSource(seed), retry_budget=retry_budget())
    except RetryExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RETRY
    payload = framework_to_dict(F)
    payload["seed"] = seed
    payload["audit"] = audit.to_json()
    code = _emit(payload, args.output, args.format, _audit_lines(audit))
    if code != EXIT_OK:
        return code
    return EXIT_OK if audit.passed else EXIT_FAIL


def _load(path: str):
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return framework_from_dict(data), data
    except (OSError, ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        print(f"error: cannot read framework from {path}: {exc}", file=sys.stderr)
        return None, None


def cmd_certify(args) -> int:
    F, _ = _load(args.input)
    if F is None:
        return EXIT_IO
    kind = args.kind
    if kind == "superstable":
        try:
            cert = certify_superstable(F)
        except (StressSearchOutOfScope, DegenerateFramework) as exc:
            print(f"not certified: {exc}", file=sys.stderr)
            return EXIT_FAIL
        lines = [f"super stability: {'CERTIFIED' if cert.verdict else 'NOT certified'}",
                 _row("affine span", cert.span_dim, cert.d),
                 _row("stress matrix rank", cert.stress_matrix_rank, cert.expected_rank),
                 _row("PSD", cert.psd.is_psd, True),
                 _row("conic at infinity", cert.conic.conic_exists, False),
                 "  pivots " + ", ".join(f"{i}:{v}" for i, v in
                                         zip(cert.psd.pivot_permutation, cert.psd.pivot_values))]
        code = _emit({"kind": kind, "certificate": cert.to_json()}, args.output, args.format, lines)
        return code or (EXIT_OK if cert.verdict else EXIT_FAIL)
    if kind == "infrigid":
        try:
            rep = is_infinitesimally_rigid(F)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_GATE
        lines = [f"infinitesimally rigid: {rep.rigid}", _row("rank R", rep.rank, rep.expected_rank),
                 _row("full affine span", rep.full_span, True)]
        code = _emit({"kind": kind, **rep.to_json()}, args.output, args.format, lines)
        return code or (EXIT_OK if rep.rigid else EXIT_FAIL)
    if kind == "maxwell":
        try:
            a = maxwell_audit(F)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_GATE
        lines = [f"m={a.m_edges} r={a.r} s={a.s} f={a.f} d={a.d} n={a.n}",
                 _row("m - dn + C(d+1,2)", a.m_edges - a.d * a.n + a.trivial, a.s - (a.f - a.trivial)),
                 f"  identity {'holds' if a.identity_holds else 'FAILS'}"]
        code = _emit({"kind": kind, **a.to_json()}, args.output, args.format, lines)
        return code or (EXIT_OK if a.identity_holds else EXIT_FAIL)
    if kind == "bolker-roth":
        try:
            br = bolker_roth_dim(F)
        except HypothesisViolation as exc:
            print(f"hypothesis failed: {exc}", file=sys.stderr)
            return EXIT_GATE
        s = len(stress_basis(F))
        lines = [_row("stress dimension", s, br)]
        code = _emit({"kind": kind, "bolker_roth_dim": br, "stress_dim": s, "match": br == s},
                     args.output, args.format, lines)
        return code or (EXIT_OK if br == s else EXIT_FAIL)
    if kind == "hulls":
        if F.partition is None:
            print("error: hull test needs a bipartite framework with parts", file=sys.stderr)
            return EXIT_IO
        rep = hull_relation(F.part_points("U"), F.part_points("V"), F.d)
        lines = [f"hulls: {rep.status.value}", f"  t* = {rep.t_star}"]
        if rep.separating_quadric is not None:
            lines.append(f"  separating quadric {rep.separating_quadric.to_json()}")
        code = _emit({"kind": kind, **rep.to_json()}, args.output, args.format, lines)
        return code or HULL_EXIT[rep.status]
    raise AssertionError(kind)


def cmd_report(args) -> int:
    reasons = _gate_message(args.d, args.m, args.n)
    if reasons:
        print("hypothesis gate failed: " + "; ".join(reasons), file=sys.stderr)
        return EXIT_GATE
    try:
        rep = ggr_report(args.d, args.m, args.n, args.seed, retry_budget=retry_budget())
    except RetryExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RETRY
    lines = _audit_lines(rep.audit) + ["claims:"]
    lines += [f"  [{c.basis}] {'true ' if c.holds else 'FALSE'} {c.fact}"
              + (f"  <- {c.source}" if c.source else "") for c in rep.claims]
    code = _emit(rep.to_json(), args.output, args.format, lines)
    return code or (EXIT_OK if rep.computed_ok else EXIT_FAIL)


def cmd_selftest(args) -> int:
    from .selftest import run_selftest
    return EXIT_OK if run_selftest(quick=args.quick) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rigidcert",
                                 description="Exact certification of rigid K_{m,n} realizations.")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("-o", "--output", help="write JSON here")
        p.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("construct", help="build a certified realization of K_{m,n}")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-m", type=int)
    p.add_argument("-n", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--core", action="store_true", help="only the moment-curve core K_{d+1,d+1}")
    common(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("certify", help="check a property of a framework JSON file")
    p.add_argument("--kind", required=True,
                   choices=("superstable", "infrigid", "maxwell", "bolker-roth", "hulls"))
    p.add_argument("input")
    common(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("report", help="construct and report computed vs cited claims")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-m", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("selftest", help="run the invariant suite for d <= 3")
    p.add_argument("--quick", action="store_true")
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
