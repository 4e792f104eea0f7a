"""
Explicit realizations of K_{m,n}: the alternating moment-curve core,
trilateration by generic points, and the stress-dimension bookkeeping
that makes the result infinitesimally rigid.
"""

from __future__ import annotations

import logging
import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import comb
from typing import Optional, Sequence

from .errors import HypothesisViolation, RetryExhausted
from .exactmat import as_rational, fmt_rational, rank
from .framework import (Configuration, Framework, affine_span_dim, bipartite_framework,
                        config_matrix, is_general_position)
from .rigidity import is_infinitesimally_rigid, stress_basis
from .veronese import ambient_dim, veronese_affine_span_dim, veronese_gale_rank

DEFAULT_RETRY_BUDGET = 16

log = logging.getLogger(__name__)


def moment_curve(t, d: int) -> tuple[Fraction, ...]:
    t = as_rational(t)
    return tuple(t ** k for k in range(1, d + 1))


@dataclass(frozen=True)
class CoreSpec:
    """Interleaved parameters s1 < t1 < s2 < t2 < ... for the two core parts."""
    d: int
    parameters: tuple[Fraction, ...]

    def __post_init__(self):
        params = tuple(as_rational(x) for x in self.parameters)
        if len(params) != 2 * (self.d + 1):
            raise HypothesisViolation(f"core in dimension {self.d} needs {2 * (self.d + 1)} parameters")
        if any(a >= b for a, b in zip(params, params[1:])):
            raise HypothesisViolation("core parameters must be strictly increasing (alternating)")
        object.__setattr__(self, "parameters", params)

    @classmethod
    def default(cls, d: int) -> "CoreSpec":
        return cls(d, tuple(range(1, 2 * d + 3)))

    @property
    def s(self) -> tuple[Fraction, ...]:
        return self.parameters[0::2]

    @property
    def t(self) -> tuple[Fraction, ...]:
        return self.parameters[1::2]


def build_core(d: int, spec: Optional[CoreSpec] = None) -> Framework:
    """Alternating K_{d+1,d+1} on the moment curve, with its three defining
    properties checked exactly (both parts span E^d, the Veronese images
    have affine span 2d, the framework is super stable)."""
    return _build_core(d, spec)[0]


def _build_core(d, spec=None):
    from .certify import certify_superstable

    if d < 1:
        raise HypothesisViolation("dimension must be at least 1")
    spec = spec or CoreSpec.default(d)
    if spec.d != d:
        raise HypothesisViolation("spec dimension does not match")
    p = [moment_curve(s, d) for s in spec.s]
    q = [moment_curve(t, d) for t in spec.t]
    F = bipartite_framework(p, q, d)
    if affine_span_dim(p) != d or affine_span_dim(q) != d:
        raise AssertionError("core part lacks full affine span")
    if veronese_affine_span_dim(p + q) != 2 * d:
        raise AssertionError("core Veronese images do not have 2d-dimensional affine span")
    cert = certify_superstable(F)
    if not cert.verdict:
        raise AssertionError("core is not super stable")
    return F, cert


def trilaterate(F: Framework, side: str, point: Sequence) -> Framework:
    """Append a vertex to ``side`` joined to the whole opposite part."""
    if side not in ("U", "V"):
        raise ValueError("side must be 'U' or 'V'")
    p = F.part_points("U")
    q = F.part_points("V")
    opposite = q if side == "U" else p
    d = F.d
    if len(opposite) < d + 1 or affine_span_dim(opposite) != d:
        raise HypothesisViolation(f"neighbors of the new vertex do not affinely span E^{d}")
    point = tuple(as_rational(x) for x in point)
    if side == "U":
        p = p + [point]
    else:
        q = q + [point]
    return bipartite_framework(p, q, d)


@dataclass
class RandomSource:
    """Seeded stream of 'generic' rational points; ``counter`` indexes retries."""
    seed: int
    counter: int = 0

    def stream(self) -> random.Random:
        return random.Random(f"rigidcert:{self.seed}:{self.counter}")

    def advance(self) -> None:
        self.counter += 1


def generic_point(rng: random.Random, d: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(rng.randint(-10 ** 6, 10 ** 6), rng.randint(1, 10 ** 3)) for _ in range(d))


def trilateration_sides(d: int, m: int, n: int) -> list[str]:
    # add to the smaller part still below target; ties go to U
    u = v = d + 1
    sides = []
    while u < m or v < n:
        if u < m and (v >= n or u <= v):
            sides.append("U")
            u += 1
        else:
            sides.append("V")
            v += 1
    return sides


@dataclass(frozen=True)
class GateResult:
    ok: bool
    reasons: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def hendrickson_gate(d: int, m: int, n: int) -> GateResult:
    reasons = []
    if m < d + 1:
        reasons.append(f"m < d+1 ({m} < {d + 1})")
    if n < d + 1:
        reasons.append(f"n < d+1 ({n} < {d + 1})")
    need = comb(d + 2, 2) + 1
    if m + n < need:
        reasons.append(f"m + n = {m + n} < {need} = C(d+2,2) + 1")
    return GateResult(not reasons, tuple(reasons))


def expected_stress_dim(d: int, m: int, n: int) -> int:
    """(m-d-1)(n-d-1) + (m+n-D-1); equals (m-d-1)(n-d-1) + 1 when m+n = D+2."""
    return (m - d - 1) * (n - d - 1) + (m + n - ambient_dim(d) - 1)


def bolker_roth_dim(F: Framework) -> int:
    """Stress-space dimension of a complete bipartite framework from Gale ranks:
    rank(Gale p) * rank(Gale q) + rank(Gale V(p, q))."""
    if F.partition is None:
        raise HypothesisViolation("framework has no bipartition")
    U, V = F.partition.U, F.partition.V
    if F.graph.m != len(U) * len(V):
        raise HypothesisViolation("graph is not complete bipartite")
    p = F.part_points("U")
    q = F.part_points("V")
    d = F.d
    if affine_span_dim(p) != d or affine_span_dim(q) != d:
        raise HypothesisViolation("both parts need full affine span")
    gale_p = len(p) - rank(config_matrix(Configuration(d, tuple(p))))
    gale_q = len(q) - rank(config_matrix(Configuration(d, tuple(q))))
    return gale_p * gale_q + veronese_gale_rank(p + q)


@dataclass
class ConstructionAudit:
    d: int
    m: int
    n: int
    seed: int
    core_superstable: bool = False
    general_position: bool = False
    stress_dim: int = -1
    stress_dim_expected: int = -1
    bolker_roth_dim: int = -1
    rigidity_rank: int = -1
    rigidity_rank_expected: int = -1
    inf_rigid: bool = False
    veronese_full_span: bool = False
    retries_used: int = 0
    # inherited from the trilateration lemma, not computed
    universally_rigid_by_trilateration: bool = True
    seeds_tried: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (self.core_superstable and self.general_position and self.inf_rigid
                and self.veronese_full_span
                and self.stress_dim == self.stress_dim_expected == self.bolker_roth_dim
                and self.rigidity_rank == self.rigidity_rank_expected)

    def to_json(self) -> dict:
        out = asdict(self)
        out["passed"] = self.passed
        return out


def audit_framework(F: Framework, d: int, m: int, n: int, seed: int,
                    core_superstable: bool) -> ConstructionAudit:
    a = ConstructionAudit(d, m, n, seed, core_superstable=core_superstable)
    a.general_position = is_general_position(F.config)
    a.veronese_full_span = veronese_affine_span_dim(F.points) == ambient_dim(d)
    a.stress_dim = len(stress_basis(F))
    a.stress_dim_expected = expected_stress_dim(d, m, n)
    a.bolker_roth_dim = bolker_roth_dim(F)
    rep = is_infinitesimally_rigid(F)
    a.inf_rigid = rep.rigid
    a.rigidity_rank = rep.rank
    a.rigidity_rank_expected = rep.expected_rank
    return a


def build_kmn(d: int, m: int, n: int, rng: RandomSource,
              retry_budget: int = DEFAULT_RETRY_BUDGET) -> tuple[Framework, ConstructionAudit]:
    """Core on the moment curve, then trilaterate with generic points until
    the part sizes are (m, n). Re-samples the generic points until every
    audit check passes, up to ``retry_budget`` attempts."""
    gate = hendrickson_gate(d, m, n)
    if not gate:
        raise HypothesisViolation("; ".join(gate.reasons))
    core, cert = _build_core(d)
    core_ok = cert.verdict
    sides = trilateration_sides(d, m, n)
    tried = []
    for attempt in range(retry_budget):
        tried.append(rng.counter)
        stream = rng.stream()
        F = core
        for side in sides:
            F = trilaterate(F, side, generic_point(stream, d))
        audit = audit_framework(F, d, m, n, rng.seed, core_ok)
        audit.retries_used = attempt
        audit.seeds_tried = list(tried)
        if audit.passed:
            return F, audit
        log.info("attempt %d (counter %d) failed the audit, re-sampling", attempt, rng.counter)
        rng.advance()
    raise RetryExhausted(f"no valid placement for K_{{{m},{n}}} in dimension {d} after {retry_budget} attempts "
                         f"(seed {rng.seed}, counters {tried})", seeds_tried=tried)


def points_to_json(points) -> list[list[str]]:
    return [[fmt_rational(x) for x in p] for p in points]
