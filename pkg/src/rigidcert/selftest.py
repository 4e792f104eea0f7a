"""
Invariant suite behind ``rigidcert selftest`` (dimensions 1 to 3).
"""

from __future__ import annotations

import random
import time
from fractions import Fraction
from itertools import combinations

from .certify import certify_superstable
from .construct import RandomSource, bolker_roth_dim, build_core, build_kmn, hendrickson_gate, moment_curve
from .errors import DegenerateFramework
from .framework import (Configuration, Framework, Graph, bipartite_framework, framework_to_json,
                        is_general_position)
from .rigidity import assemble_stress_matrix, maxwell_audit, stress_basis
from .veronese import HullStatus, hull_relation, veronese_affine_span_dim


def random_rational(rng: random.Random, lo=-30, hi=30, maxden=7) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, maxden))


def random_points(rng, d, k):
    return [tuple(random_rational(rng) for _ in range(d)) for _ in range(k)]


def random_framework(rng: random.Random, d: int, n: int) -> Framework:
    """Random graph on n vertices with random rational coordinates (no zero-length edges)."""
    while True:
        pts = random_points(rng, d, n)
        prob = rng.random()
        edges = [(i, j) for i, j in combinations(range(n), 2) if rng.random() < prob]
        if all(pts[i] != pts[j] for i, j in edges):
            return Framework(Graph(n, tuple(edges)), Configuration(d, tuple(pts)))


def random_gp_bipartite(rng: random.Random, d: int, u: int, v: int) -> Framework:
    while True:
        try:
            F = bipartite_framework(random_points(rng, d, u), random_points(rng, d, v), d)
        except DegenerateFramework:
            continue
        if is_general_position(F.config):
            return F


def _check(name, fn):
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # report, keep going
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return name, ok, detail, time.perf_counter() - t0


def run_selftest(quick: bool = False, seed: int = 2024, out=print) -> bool:
    rng = random.Random(seed)
    n_br = 40 if quick else 200
    n_mx = 100 if quick else 500

    def cores():
        ranks = []
        for d in (1, 2, 3):
            c = certify_superstable(build_core(d))
            if not c.verdict:
                return False, f"d={d} core not certified"
            ranks.append(c.stress_matrix_rank)
        return ranks == [2, 3, 4], f"stress matrix ranks {ranks}"

    def counts():
        got = []
        for d, m, n in [(2, 3, 4), (3, 4, 7), (3, 5, 6)]:
            _, a = build_kmn(d, m, n, RandomSource(seed))
            got.append((a.stress_dim, a.rigidity_rank))
        return got == [(1, 11), (1, 27), (3, 27)], f"(stress dim, rank) {got}"

    def bolker_roth():
        for _ in range(n_br):
            d = rng.randint(1, 3)
            F = random_gp_bipartite(rng, d, rng.randint(d + 1, 7), rng.randint(d + 1, 7))
            if bolker_roth_dim(F) != len(stress_basis(F)):
                return False, f"mismatch on {F}"
        return True, f"{n_br} frameworks"

    def maxwell():
        for _ in range(n_mx):
            d = rng.randint(1, 3)
            F = random_framework(rng, d, rng.randint(d, 10))
            if not maxwell_audit(F).identity_holds:
                return False, "identity failed"
        return True, f"{n_mx} frameworks"

    def spans():
        for d in (1, 2, 3):
            F = build_core(d)
            for sub in combinations(F.points, 2 * d + 1):
                if veronese_affine_span_dim(list(sub)) != 2 * d:
                    return False, f"d={d}"
        return True, "all (2d+1)-subsets span 2d"

    def hulls():
        for d in (1, 2, 3):
            F = build_core(d)
            if hull_relation(F.part_points("U"), F.part_points("V"), d).status \
                    is not HullStatus.RELATIVE_INTERIOR_INTERSECT:
                return False, f"d={d} core"
        p = [moment_curve(t, 2) for t in (1, 2, 3)]
        q = [moment_curve(t, 2) for t in (4, 5, 6)]
        rep = hull_relation(p, q, 2)
        return rep.status is HullStatus.DISJOINT_STRICTLY_SEPARABLE, rep.status.value

    def necessity():
        F = random_gp_bipartite(rng, 3, 5, 5)
        basis = stress_basis(F)
        Om = assemble_stress_matrix(F, basis[0])
        zero_diag = all(Om[i, i] == 0 for i in range(F.n))
        gates = [hendrickson_gate(3, 4, 4).ok, hendrickson_gate(2, 2, 9).ok]
        return len(basis) == 1 and zero_diag and gates == [False, False], \
            f"s={len(basis)} zero diagonal={zero_diag}"

    def determinism():
        a = framework_to_json(*build_kmn(2, 3, 4, RandomSource(7))[:1])
        b = framework_to_json(*build_kmn(2, 3, 4, RandomSource(7))[:1])
        return a == b, "byte-identical" if a == b else "differs"

    checks = [("core super stability d=1..3", cores), ("stress dimension counts", counts),
              ("Gale-rank stress formula", bolker_roth), ("Maxwell index identity", maxwell),
              ("core Veronese spans", spans), ("hull relations", hulls),
              ("necessity conditions", necessity), ("determinism", determinism)]
    all_ok = True
    for name, fn in checks:
        name, ok, detail, dt = _check(name, fn)
        all_ok &= ok
        out(f"{'PASS' if ok else 'FAIL'}  {name:<32} {dt:6.2f}s  {detail}")
    return all_ok
