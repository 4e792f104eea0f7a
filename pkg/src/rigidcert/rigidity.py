"""
Rigidity matrix, infinitesimal rigidity, equilibrium stresses and the
Maxwell index count.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .errors import NotAStress
from .exactmat import (RatMatrix, as_rational, cokernel_basis, fmt_rational, kernel_basis,
                       primitive_integer_vector, rank)
from .framework import Framework, affine_span_dim, config_matrix


@dataclass(frozen=True)
class RigidityMatrix:
    matrix: RatMatrix
    edges: tuple[tuple[int, int], ...]
    d: int
    n: int

    def column(self, vertex: int, coord: int) -> int:
        return vertex * self.d + coord


def rigidity_matrix(F: Framework) -> RigidityMatrix:
    """One row per edge (i, j), i < j: p(i) - p(j) in the columns of i,
    p(j) - p(i) in the columns of j."""
    d, n = F.d, F.n
    rows = []
    for i, j in F.graph.edges:
        row = [Fraction(0)] * (d * n)
        for k in range(d):
            diff = F.points[j][k] - F.points[i][k]
            row[i * d + k] = -diff
            row[j * d + k] = diff
        rows.append(row)
    return RigidityMatrix(RatMatrix.from_rows(rows, d * n), F.graph.edges, d, n)


@dataclass(frozen=True)
class InfRigidityReport:
    rigid: bool
    rank: int
    expected_rank: int
    full_span: bool

    def to_json(self) -> dict:
        return {"infinitesimally_rigid": self.rigid, "rank": self.rank,
                "expected_rank": self.expected_rank, "full_affine_span": self.full_span}


def is_infinitesimally_rigid(F: Framework) -> InfRigidityReport:
    d, n = F.d, F.n
    if n < d:
        raise ValueError(f"infinitesimal rigidity in dimension {d} needs n >= {d} vertices")
    r = rank(rigidity_matrix(F).matrix)
    expected = d * n - comb(d + 1, 2)
    full_span = affine_span_dim(F.points) == d
    return InfRigidityReport(r == expected, r, expected, full_span)


def stress_basis(F: Framework) -> list[tuple[Fraction, ...]]:
    """Basis of equilibrium stresses (left kernel of R), each scaled to
    coprime integers with its first nonzero entry positive."""
    if F.graph.m == 0:
        return []
    return [primitive_integer_vector(w) for w in cokernel_basis(rigidity_matrix(F).matrix)]


def stress_residual(F: Framework, omega: Sequence) -> tuple[Fraction, ...]:
    """omega^T R(p); all zero exactly when omega is an equilibrium stress."""
    omega = [as_rational(w) for w in omega]
    if len(omega) != F.graph.m:
        raise ValueError(f"stress has {len(omega)} entries for {F.graph.m} edges")
    return rigidity_matrix(F).matrix.T @ omega


def assemble_stress_matrix(F: Framework, omega: Sequence) -> RatMatrix:
    """Omega = sum over edges of w_ij (e_i - e_j)(e_i - e_j)^T."""
    res = stress_residual(F, omega)
    if any(res):
        raise NotAStress("vector is not an equilibrium stress", residual=res)
    n = F.n
    W = [[Fraction(0)] * n for _ in range(n)]
    for (i, j), w in zip(F.graph.edges, omega):
        w = as_rational(w)
        W[i][j] -= w
        W[j][i] -= w
        W[i][i] += w
        W[j][j] += w
    Omega = RatMatrix.from_rows(W, n)
    # cheap to re-verify; both identities are what makes it an equilibrium stress matrix
    assert not any(Omega @ ([1] * n))
    assert (Omega @ config_matrix(F)).is_zero()
    return Omega


@dataclass(frozen=True)
class MaxwellAudit:
    m_edges: int
    r: int
    s: int
    f: int
    d: int
    n: int
    identity_holds: bool

    @property
    def trivial(self) -> int:
        return comb(self.d + 1, 2)

    def to_json(self) -> dict:
        return {"m": self.m_edges, "r": self.r, "s": self.s, "f": self.f, "d": self.d,
                "n": self.n, "dn": self.d * self.n, "C(d+1,2)": self.trivial,
                "identity": "m - dn + C(d+1,2) = s - (f - C(d+1,2))",
                "identity_holds": self.identity_holds}


def maxwell_audit(F: Framework) -> MaxwellAudit:
    """Count edges, rank, stresses and flexes independently and check the index theorem.

    f is the raw kernel dimension of R (trivial flexes included), so the
    audited identity reads m - dn + C(d+1,2) = s - (f - C(d+1,2)).
    """
    d, n = F.d, F.n
    if n < d:
        raise ValueError(f"Maxwell count needs n >= d ({n} < {d})")
    R = rigidity_matrix(F).matrix
    m = F.graph.m
    r = rank(R)
    s = len(cokernel_basis(R)) if m else 0
    f = len(kernel_basis(R))
    c = comb(d + 1, 2)
    return MaxwellAudit(m, r, s, f, d, n, m - d * n + c == s - (f - c))


def trivial_flexes(F: Framework) -> list[tuple[Fraction, ...]]:
    """The d translation fields and C(d,2) rotation fields of the configuration."""
    d, n = F.d, F.n
    fields = []
    for k in range(d):
        v = [Fraction(0)] * (d * n)
        for i in range(n):
            v[i * d + k] = Fraction(1)
        fields.append(tuple(v))
    for a in range(d):
        for b in range(a + 1, d):
            v = [Fraction(0)] * (d * n)
            for i, p in enumerate(F.points):
                v[i * d + a] = -p[b]
                v[i * d + b] = p[a]
            fields.append(tuple(v))
    return fields


def stress_to_json(F: Framework, omega: Sequence) -> dict:
    return {"edges": [[i, j] for i, j in F.graph.edges],
            "values": [fmt_rational(as_rational(w)) for w in omega]}
