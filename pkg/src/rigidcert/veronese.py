"""
Degree-2 Veronese map and the quadric-separation machinery built on it.

Symmetric matrices are kept in their natural entries; the trace inner
product <X, Y> = sum_ij X_ij Y_ij is evaluated directly, which is the
same as weighting each off-diagonal coordinate by 2. No sqrt(2) basis
scaling, so everything stays rational.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional, Sequence

from .exactmat import (RatMatrix, as_rational, dot, fmt_rational, kernel_basis, lp_max_min_weight,
                       rank, simplex_max)
from .framework import Framework, edge_directions, homogenize


def veronese(x: Sequence) -> RatMatrix:
    """V(x) = x_hat x_hat^T, a rank-one (d+1)x(d+1) matrix with 1 in the corner."""
    xh = homogenize(tuple(as_rational(c) for c in x))
    k = len(xh)
    return RatMatrix(k, k, (a * b for a in xh for b in xh))


def trace_inner(X: RatMatrix, Y: RatMatrix) -> Fraction:
    if X.shape != Y.shape:
        raise ValueError("shape mismatch")
    return sum((X[i, j] * Y[i, j] for i in range(X.rows) for j in range(X.cols)), Fraction(0))


def sym_index(k: int) -> list[tuple[int, int]]:
    return [(a, b) for a in range(k) for b in range(a, k)]


def sym_coords(X: RatMatrix) -> list[Fraction]:
    return [X[a, b] for a, b in sym_index(X.rows)]


def sym_from_coords(values: Sequence, k: int) -> RatMatrix:
    M = [[Fraction(0)] * k for _ in range(k)]
    for (a, b), v in zip(sym_index(k), values):
        M[a][b] = M[b][a] = as_rational(v)
    return RatMatrix.from_rows(M, k)


def _trace_weights(k: int) -> list[int]:
    return [1 if a == b else 2 for a, b in sym_index(k)]


def ambient_dim(d: int) -> int:
    """D = C(d+2, 2) - 1, the dimension of the affine chart holding V(E^d)."""
    return comb(d + 2, 2) - 1


def veronese_matrix(points: Sequence[Sequence]) -> RatMatrix:
    """Rows are the symmetric coordinates of V(x) for each point (includes the corner 1)."""
    rows = [sym_coords(veronese(x)) for x in points]
    return RatMatrix.from_rows(rows, len(rows[0]))


def veronese_affine_span_dim(points: Sequence[Sequence]) -> int:
    if not points:
        raise ValueError("affine span of an empty set")
    V = [sym_coords(veronese(x)) for x in points]
    if len(V) == 1:
        return 0
    base = V[0]
    diffs = [[a - b for a, b in zip(v, base)] for v in V[1:]]
    return rank(RatMatrix.from_rows(diffs, len(base)))


def veronese_gale_rank(points: Sequence[Sequence]) -> int:
    """Dimension of the linear dependencies among the V(x) in R^{D+1}."""
    return len(points) - rank(veronese_matrix(points))


# -- conic at infinity ---------------------------------------------------------

@dataclass(frozen=True)
class ConicReport:
    conic_exists: bool
    direction_veronese_rank: int
    max_rank: int
    witness_conic: Optional[RatMatrix] = None

    def to_json(self) -> dict:
        return {"conic_exists": self.conic_exists,
                "direction_veronese_rank": self.direction_veronese_rank,
                "max_rank": self.max_rank,
                "witness_conic": None if self.witness_conic is None else self.witness_conic.to_json()}


def conic_at_infinity(F: Framework) -> ConicReport:
    """Is there a nonzero quadratic form vanishing on every edge direction?"""
    if F.graph.m == 0:
        raise ValueError("conic test needs at least one edge")
    d = F.d
    w = _trace_weights(d)
    rows = []
    for e in edge_directions(F):
        rows.append([wt * e[a] * e[b] for wt, (a, b) in zip(w, sym_index(d))])
    M = RatMatrix.from_rows(rows, comb(d + 1, 2))
    r = rank(M)
    full = comb(d + 1, 2)
    if r == full:
        return ConicReport(False, r, full)
    Q = sym_from_coords(kernel_basis(M)[0], d)
    return ConicReport(True, r, full, Q)


# -- hull intersection / strict quadric separation ------------------------------

class HullStatus(str, enum.Enum):
    RELATIVE_INTERIOR_INTERSECT = "RELATIVE_INTERIOR_INTERSECT"
    DISJOINT_STRICTLY_SEPARABLE = "DISJOINT_STRICTLY_SEPARABLE"
    BOUNDARY_INCONCLUSIVE = "BOUNDARY_INCONCLUSIVE"


@dataclass(frozen=True)
class HullIntersectionReport:
    status: HullStatus
    t_star: Optional[Fraction]
    weights_p: Optional[tuple[Fraction, ...]] = None
    weights_q: Optional[tuple[Fraction, ...]] = None
    separating_quadric: Optional[RatMatrix] = None

    def to_json(self) -> dict:
        def vec(v):
            return None if v is None else [fmt_rational(x) for x in v]
        return {"status": self.status.value,
                "t_star": None if self.t_star is None else fmt_rational(self.t_star),
                "weights_p": vec(self.weights_p), "weights_q": vec(self.weights_q),
                "separating_quadric": None if self.separating_quadric is None
                else self.separating_quadric.to_json()}


def quadric_value(Q: RatMatrix, x: Sequence) -> Fraction:
    """x_hat^T Q x_hat, i.e. <V(x), Q>."""
    xh = homogenize(tuple(as_rational(c) for c in x))
    return dot(xh, Q @ xh)


def _interior_lp(p, q):
    Vp = [sym_coords(veronese(x)) for x in p]
    Vq = [sym_coords(veronese(x)) for x in q]
    k = len(Vp[0])
    rows = []
    # the corner coordinate is always 1 and is implied by the convexity rows
    for c in range(k - 1):
        rows.append([v[c] for v in Vp] + [-v[c] for v in Vq])
    rows.append([1] * len(p) + [0] * len(q))
    rows.append([0] * len(p) + [1] * len(q))
    A = RatMatrix.from_rows(rows, len(p) + len(q))
    b = [0] * (k - 1) + [1, 1]
    return lp_max_min_weight(A, b)


def strict_separator(p, q, d: int) -> Optional[RatMatrix]:
    """Symmetric Q with <V(x),Q> <= -1 on p and >= 1 on q, or None."""
    k = d + 1
    idx = sym_index(k)
    w = _trace_weights(k)
    nq = len(idx)
    rows, rhs = [], []
    npts = len(p) + len(q)
    for s, (x, sign) in enumerate([(x, 1) for x in p] + [(x, -1) for x in q]):
        V = veronese(x)
        coeff = [wt * V[a, b] for wt, (a, b) in zip(w, idx)]
        # p side: <V,Q> + slack = -1 ; q side: <V,Q> - slack = 1
        row = coeff + [-c for c in coeff] + [0] * npts
        row[2 * nq + s] = sign
        rows.append(row)
        rhs.append(-1 if sign == 1 else 1)
    A = RatMatrix.from_rows(rows, 2 * nq + npts)
    res = simplex_max(A, rhs, [0] * A.cols)
    if res.status != "optimal":
        return None
    vals = [res.x[i] - res.x[nq + i] for i in range(nq)]
    return sym_from_coords(vals, k)


def hull_relation(p: Sequence[Sequence], q: Sequence[Sequence], d: int) -> HullIntersectionReport:
    """Classify conv(V(p)) against conv(V(q)) in the affine chart A^D."""
    if not p or not q:
        raise ValueError("both point sets must be nonempty")
    p = [tuple(as_rational(c) for c in x) for x in p]
    q = [tuple(as_rational(c) for c in x) for x in q]
    res = _interior_lp(p, q)
    if res.status == "optimal":
        lam, mu = res.x[:len(p)], res.x[len(p):]
        if res.objective > 0:
            k = d + 1
            lhs = sum((veronese(x).scale(l) for x, l in zip(p, lam)), RatMatrix.zeros(k, k))
            rhs = sum((veronese(y).scale(m) for y, m in zip(q, mu)), RatMatrix.zeros(k, k))
            assert lhs == rhs and all(l > 0 for l in lam) and all(m > 0 for m in mu)
            return HullIntersectionReport(HullStatus.RELATIVE_INTERIOR_INTERSECT, res.objective, lam, mu)
        return HullIntersectionReport(HullStatus.BOUNDARY_INCONCLUSIVE, res.objective, lam, mu)
    Q = strict_separator(p, q, d)
    if Q is None:
        # LP duality: disjoint finite hulls always admit a strict separator
        raise RuntimeError("hull LP infeasible but no strict separator found")
    assert all(quadric_value(Q, x) <= -1 for x in p)
    assert all(quadric_value(Q, y) >= 1 for y in q)
    return HullIntersectionReport(HullStatus.DISJOINT_STRICTLY_SEPARABLE, None, separating_quadric=Q)
