"""
Super-stability certificates and the consolidated K_{m,n} report.

A report keeps two kinds of claims apart: COMPUTED facts, each backed by
an exact check made in the same run, and PAPER_THEOREM facts, which are
consequences of published theorems applied to the computed ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .construct import (ConstructionAudit, RandomSource, DEFAULT_RETRY_BUDGET, audit_framework,
                        build_kmn, hendrickson_gate)
from .errors import DegenerateFramework, HypothesisViolation, NotAStress, StressSearchOutOfScope
from .exactmat import PsdReport, RatMatrix, as_rational, fmt_rational, psd_certify, rank
from .framework import Framework, affine_span_dim, bipartite_framework, framework_to_dict
from .rigidity import assemble_stress_matrix, stress_basis, stress_residual
from .veronese import ConicReport, conic_at_infinity

COMPUTED = "COMPUTED"
PAPER_THEOREM = "PAPER_THEOREM"


@dataclass(frozen=True)
class SuperStabilityCertificate:
    d: int
    n: int
    stress: tuple[Fraction, ...]
    stress_matrix: RatMatrix
    stress_matrix_rank: int
    psd: PsdReport
    conic: ConicReport
    span_dim: int

    @property
    def expected_rank(self) -> int:
        return self.n - self.d - 1

    @property
    def verdict(self) -> bool:
        return (self.span_dim == self.d and self.psd.is_psd
                and self.stress_matrix_rank == self.expected_rank
                and not self.conic.conic_exists)

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "d": self.d,
            "n": self.n,
            "span_dim": self.span_dim,
            "stress": [fmt_rational(w) for w in self.stress],
            "stress_matrix": self.stress_matrix.to_json(),
            "stress_matrix_rank": self.stress_matrix_rank,
            "expected_rank": self.expected_rank,
            "psd": self.psd.to_json(),
            "conic": self.conic.to_json(),
        }


def _certificate(F: Framework, omega, span_dim: int, conic: ConicReport) -> SuperStabilityCertificate:
    Omega = assemble_stress_matrix(F, omega)
    psd = psd_certify(Omega)
    r = psd.rank if psd.is_psd else rank(Omega)
    return SuperStabilityCertificate(F.d, F.n, tuple(omega), Omega, r, psd, conic, span_dim)


def certify_superstable(F: Framework, stress: Optional[Sequence] = None) -> SuperStabilityCertificate:
    """Check super stability exactly.

    Without ``stress`` the stress space must be one-dimensional; both
    signs of its basis vector are tried and the first passing certificate
    (else the one for the positive-normalized sign) is returned.
    """
    span = affine_span_dim(F.points)
    if span != F.d:
        raise DegenerateFramework(f"affine span is {span}-dimensional, need {F.d}")
    conic = conic_at_infinity(F)
    if stress is not None:
        omega = tuple(as_rational(w) for w in stress)
        res = stress_residual(F, omega)
        if any(res):
            raise NotAStress("supplied stress is not in the cokernel of R(p)", residual=res)
        return _certificate(F, omega, span, conic)
    basis = stress_basis(F)
    if len(basis) != 1:
        raise StressSearchOutOfScope(
            f"stress space has dimension {len(basis)}; stress search out of scope, supply a stress")
    first = None
    for sign in (1, -1):
        cert = _certificate(F, tuple(sign * w for w in basis[0]), span, conic)
        if cert.verdict:
            return cert
        first = first or cert
    return first


def core_of(F: Framework) -> Framework:
    """The K_{d+1,d+1} on the first d+1 vertices of each part."""
    k = F.d + 1
    return bipartite_framework(F.part_points("U")[:k], F.part_points("V")[:k], F.d)


@dataclass(frozen=True)
class Claim:
    fact: str
    basis: str
    holds: bool
    source: str = ""

    def to_json(self) -> dict:
        out = {"fact": self.fact, "basis": self.basis, "holds": self.holds}
        if self.source:
            out["source"] = self.source
        return out


@dataclass
class GgrReport:
    d: int
    m: int
    n: int
    seed: int
    framework: Framework
    audit: ConstructionAudit
    core_certificate: SuperStabilityCertificate
    claims: list[Claim] = field(default_factory=list)

    @property
    def computed_ok(self) -> bool:
        return all(c.holds for c in self.claims if c.basis == COMPUTED)

    def to_json(self) -> dict:
        return {
            "d": self.d, "m": self.m, "n": self.n, "seed": self.seed,
            "framework": framework_to_dict(self.framework),
            "audit": self.audit.to_json(),
            "core_certificate": self.core_certificate.to_json(),
            "claims": [c.to_json() for c in self.claims],
        }


def computed_claims(audit: ConstructionAudit, core_cert: SuperStabilityCertificate) -> list[Claim]:
    d = audit.d
    return [
        Claim(f"core K_{{{d + 1},{d + 1}}} is super stable (PSD stress matrix of rank "
              f"{core_cert.stress_matrix_rank} = n-d-1 = {core_cert.expected_rank}, no conic at infinity)",
              COMPUTED, core_cert.verdict),
        Claim(f"infinitesimally rigid: rank R = {audit.rigidity_rank} = d(m+n) - C(d+1,2) = "
              f"{audit.rigidity_rank_expected}", COMPUTED, audit.inf_rigid),
        Claim(f"stress space dimension {audit.stress_dim} = (m-d-1)(n-d-1) + (m+n-D-1) = "
              f"{audit.stress_dim_expected}",
              COMPUTED, audit.stress_dim == audit.stress_dim_expected),
        Claim(f"Gale-rank stress count {audit.bolker_roth_dim} matches the computed stress dimension",
              COMPUTED, audit.bolker_roth_dim == audit.stress_dim),
        Claim("configuration is in affine general position", COMPUTED, audit.general_position),
        Claim("Veronese images affinely span A^D", COMPUTED, audit.veronese_full_span),
    ]


def theorem_claims(d: int, m: int, n: int) -> list[Claim]:
    return [
        Claim(f"core K_{{{d + 1},{d + 1}}} is universally rigid", PAPER_THEOREM, True,
              "super stability implies universal rigidity (Connelly)"),
        Claim(f"(K_{{{m},{n}}}, p, q) is universally, hence globally, rigid", PAPER_THEOREM, True,
              "trilateration onto affinely spanning neighbors preserves universal rigidity"),
        Claim(f"K_{{{m},{n}}} is generically globally rigid in dimension {d}", PAPER_THEOREM, True,
              "one infinitesimally rigid and globally rigid framework implies generic global "
              "rigidity (Gortler-Healy-Thurston)"),
    ]


def ggr_report(d: int, m: int, n: int, seed: int,
               retry_budget: int = DEFAULT_RETRY_BUDGET) -> GgrReport:
    gate = hendrickson_gate(d, m, n)
    if not gate:
        raise HypothesisViolation("; ".join(gate.reasons))
    F, audit = build_kmn(d, m, n, RandomSource(seed), retry_budget=retry_budget)
    cert = certify_superstable(core_of(F))
    claims = computed_claims(audit, cert)
    if all(c.holds for c in claims):
        claims += theorem_claims(d, m, n)
    return GgrReport(d, m, n, seed, F, audit, cert, claims)


def recheck(F: Framework, m: int, n: int, seed: int) -> list[Claim]:
    """Re-derive the COMPUTED claims from a framework alone (e.g. a saved JSON)."""
    cert = certify_superstable(core_of(F))
    audit = audit_framework(F, F.d, m, n, seed, cert.verdict)
    return computed_claims(audit, cert)
