"""
Exact rational dense linear algebra.

Everything here works over ``fractions.Fraction``; no floating point is
ever touched. Ranks and kernels come from fraction-free (Bareiss style)
elimination on integer-scaled rows, PSD decisions from symmetric
elimination with diagonal pivots, and hull/separation LPs from a small
dense simplex using Bland's rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Optional, Sequence

from .errors import LPUnbounded, NotSymmetric, ScaleExceeded

Rational = Fraction

MAX_DIM = 200


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and "num/den" strings to a Fraction.

    Floats are refused: they would smuggle rounding into the certificates.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


def fmt_rational(x: Fraction) -> str:
    # Fraction.__str__ is already "num/den" in lowest terms, "num" if den == 1
    return str(x)


class RatMatrix:
    """Immutable dense matrix of Fractions, stored row-major."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, data: Iterable):
        data = tuple(as_rational(x) for x in data)
        if len(data) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(data)}")
        self.rows = rows
        self.cols = cols
        self._data = data

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: Optional[int] = None) -> "RatMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise ValueError("cannot infer column count of an empty matrix")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, (x for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "RatMatrix":
        columns = [list(c) for c in columns]
        return cls(rows, len(columns), (columns[j][i] for i in range(rows) for j in range(len(columns))))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, (1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def diag(cls, values: Sequence) -> "RatMatrix":
        n = len(values)
        return cls(n, n, (values[i] if i == j else 0 for i in range(n) for j in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self._data[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._data[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return self._data[j::self.cols]

    def to_lists(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def T(self) -> "RatMatrix":
        return RatMatrix(self.cols, self.rows,
                         (self._data[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)))

    def submatrix(self, rows: Sequence[int], cols: Optional[Sequence[int]] = None) -> "RatMatrix":
        if cols is None:
            cols = range(self.cols)
        cols = list(cols)
        return RatMatrix(len(rows), len(cols), (self[i, j] for i in rows for j in cols))

    def __matmul__(self, other):
        if isinstance(other, RatMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            ocols = [other.col(j) for j in range(other.cols)]
            out = []
            for i in range(self.rows):
                r = self.row(i)
                out.extend(sum((a * b for a, b in zip(r, c) if a and b), Fraction(0)) for c in ocols)
            return RatMatrix(self.rows, other.cols, out)
        vec = [as_rational(x) for x in other]
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(dot(self.row(i), vec) for i in range(self.rows))

    def __neg__(self) -> "RatMatrix":
        return RatMatrix(self.rows, self.cols, (-x for x in self._data))

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return RatMatrix(self.rows, self.cols, (a + b for a, b in zip(self._data, other._data)))

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        return self + (-other)

    def scale(self, c) -> "RatMatrix":
        c = as_rational(c)
        return RatMatrix(self.rows, self.cols, (c * x for x in self._data))

    def __eq__(self, other) -> bool:
        return isinstance(other, RatMatrix) and self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._data))

    def is_zero(self) -> bool:
        return not any(self._data)

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self[i, j] == self[j, i] for i in range(self.rows) for j in range(i + 1, self.cols))

    def to_json(self) -> list[list[str]]:
        return [[fmt_rational(x) for x in self.row(i)] for i in range(self.rows)]

    @classmethod
    def from_json(cls, rows) -> "RatMatrix":
        return cls.from_rows([[as_rational(x) for x in r] for r in rows])

    def __repr__(self) -> str:
        body = "; ".join(" ".join(fmt_rational(x) for x in self.row(i)) for i in range(self.rows))
        return f"RatMatrix({self.rows}x{self.cols}: [{body}])"


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b) if x and y), Fraction(0))


def quad_form(S: RatMatrix, x: Sequence) -> Fraction:
    x = [as_rational(v) for v in x]
    return dot(x, S @ x)


def _check_scale(M: RatMatrix) -> None:
    if M.rows > MAX_DIM or M.cols > MAX_DIM:
        raise ScaleExceeded(f"matrix {M.rows}x{M.cols} exceeds the {MAX_DIM}x{MAX_DIM} cap")


def _integer_rows(M: RatMatrix) -> list[list[int]]:
    # row scaling changes neither the row space nor the right kernel
    out = []
    for i in range(M.rows):
        r = M.row(i)
        den = lcm(*(x.denominator for x in r)) if r else 1
        ints = [x.numerator * (den // x.denominator) for x in r]
        g = 0
        for v in ints:
            g = gcd(g, v)
        if g > 1:
            ints = [v // g for v in ints]
        out.append(ints)
    return out


def _fraction_free_eliminate(A: list[list[int]], ncols: int, reduced: bool):
    """Bareiss elimination in place on integer rows.

    With ``reduced`` the elimination also clears above each pivot, leaving
    ``det * RREF`` where every pivot entry equals the last pivot ``det``.
    Returns (pivot_cols, det).
    """
    nrows = len(A)
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if A[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            A[r], A[piv] = A[piv], A[r]
        p = A[r][c]
        pr = A[r]
        targets = range(nrows) if reduced else range(r + 1, nrows)
        for i in targets:
            if i == r:
                continue
            row = A[i]
            a = row[c]
            if a == 0 and prev == p:
                continue
            if a == 0:
                A[i] = [(p * x) // prev for x in row]
            else:
                A[i] = [(p * x - a * y) // prev for x, y in zip(row, pr)]
        prev = p
        pivots.append(c)
        r += 1
    return pivots, prev


def rank(M: RatMatrix) -> int:
    _check_scale(M)
    if M.rows == 0 or M.cols == 0:
        return 0
    A = _integer_rows(M)
    pivots, _ = _fraction_free_eliminate(A, M.cols, reduced=False)
    return len(pivots)


def rref(M: RatMatrix) -> tuple[RatMatrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    _check_scale(M)
    A = _integer_rows(M)
    pivots, det = _fraction_free_eliminate(A, M.cols, reduced=True)
    r = len(pivots)
    data = [Fraction(x, det) for row in A[:r] for x in row]
    data += [Fraction(0)] * ((M.rows - r) * M.cols)
    return RatMatrix(M.rows, M.cols, data), pivots


def kernel_basis(M: RatMatrix) -> list[tuple[Fraction, ...]]:
    """Basis of the right kernel, one vector per free column.

    Each vector has a 1 in its free column and zeros in the other free
    columns, so the basis is canonical for a given matrix.
    """
    _check_scale(M)
    n = M.cols
    if M.rows == 0:
        return [tuple(Fraction(int(i == j)) for i in range(n)) for j in range(n)]
    A = _integer_rows(M)
    pivots, det = _fraction_free_eliminate(A, n, reduced=True)
    pivot_set = set(pivots)
    basis = []
    for f in range(n):
        if f in pivot_set:
            continue
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for k, pc in enumerate(pivots):
            v[pc] = Fraction(-A[k][f], det)
        basis.append(tuple(v))
    return basis


def cokernel_basis(M: RatMatrix) -> list[tuple[Fraction, ...]]:
    """Basis of the left kernel {v : v^T M = 0}."""
    return kernel_basis(M.T)


def gale_dual(P_hat: RatMatrix) -> RatMatrix:
    """n x (n - rank) matrix whose columns span the affine dependencies of the rows."""
    basis = cokernel_basis(P_hat)
    return RatMatrix.from_columns(basis, P_hat.rows)


def solve(A: RatMatrix, b: Sequence) -> Optional[tuple[Fraction, ...]]:
    """One exact solution of A x = b, or None if the system is inconsistent."""
    b = [as_rational(x) for x in b]
    aug = RatMatrix(A.rows, A.cols + 1, (x for i in range(A.rows) for x in (*A.row(i), b[i])))
    R, pivots = rref(aug)
    if pivots and pivots[-1] == A.cols:
        return None
    x = [Fraction(0)] * A.cols
    for k, pc in enumerate(pivots):
        x[pc] = R[k, A.cols]
    return tuple(x)


def primitive_integer_vector(v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Scale v to coprime integers with the first nonzero entry positive."""
    v = [as_rational(x) for x in v]
    nz = [x for x in v if x]
    if not nz:
        return tuple(v)
    den = lcm(*(x.denominator for x in nz))
    ints = [x.numerator * (den // x.denominator) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    sign = 1 if nz[0] > 0 else -1
    return tuple(Fraction(sign * x // g) for x in ints)


# -- PSD certification -------------------------------------------------------

@dataclass(frozen=True)
class PsdReport:
    is_psd: bool
    rank: int
    pivot_permutation: tuple[int, ...]
    pivot_values: tuple[Fraction, ...]
    failure_witness: Optional[tuple[Fraction, ...]] = None
    witness_value: Optional[Fraction] = None

    def to_json(self) -> dict:
        return {
            "is_psd": self.is_psd,
            "rank": self.rank,
            "pivot_permutation": list(self.pivot_permutation),
            "pivot_values": [fmt_rational(x) for x in self.pivot_values],
            "failure_witness": None if self.failure_witness is None
            else [fmt_rational(x) for x in self.failure_witness],
            "witness_value": None if self.witness_value is None else fmt_rational(self.witness_value),
        }


def _lift_witness(S: RatMatrix, pivots: list[int], y: dict[int, Fraction]) -> tuple[Fraction, ...]:
    # x_P = -S_PP^{-1} S_PR y, so that x^T S x equals y^T (Schur complement) y
    n = S.rows
    x = [Fraction(0)] * n
    for i, val in y.items():
        x[i] = val
    if pivots:
        rhs = [-sum((S[p, i] * val for i, val in y.items()), Fraction(0)) for p in pivots]
        xp = solve(S.submatrix(pivots, pivots), rhs)
        for p, val in zip(pivots, xp):
            x[p] = val
    return tuple(x)


def psd_certify(S: RatMatrix) -> PsdReport:
    """Decide positive semidefiniteness exactly.

    Symmetric elimination that only ever pivots on a strictly positive
    diagonal entry of the remaining Schur complement (lowest index first).
    A negative diagonal entry, or a zero diagonal next to a nonzero
    off-diagonal entry, gives a vector x with x^T S x < 0, which is
    returned as the witness.
    """
    if not S.is_symmetric():
        raise NotSymmetric("psd_certify needs a symmetric matrix")
    _check_scale(S)
    n = S.rows
    W = {(i, j): S[i, j] for i in range(n) for j in range(n)}
    remaining = list(range(n))
    pivots: list[int] = []
    values: list[Fraction] = []

    def fail(y: dict[int, Fraction]) -> PsdReport:
        x = _lift_witness(S, pivots, y)
        val = quad_form(S, x)
        assert val < 0, "witness construction failed"
        return PsdReport(False, rank(S), tuple(pivots), tuple(values), x, val)

    while remaining:
        neg = next((i for i in remaining if W[i, i] < 0), None)
        if neg is not None:
            return fail({neg: Fraction(1)})
        piv = next((i for i in remaining if W[i, i] > 0), None)
        if piv is None:
            for a in remaining:
                for b in remaining:
                    if a < b and W[a, b] != 0:
                        # zero diagonal, nonzero coupling: (e_a - sign e_b) is negative
                        return fail({a: Fraction(1), b: Fraction(-1 if W[a, b] > 0 else 1)})
            break
        pv = W[piv, piv]
        remaining.remove(piv)
        for i in remaining:
            f = W[i, piv] / pv
            if f:
                for j in remaining:
                    W[i, j] -= f * W[piv, j]
        pivots.append(piv)
        values.append(pv)
    return PsdReport(True, len(pivots), tuple(pivots), tuple(values))


# -- exact simplex -------------------------------------------------------------

@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" or "infeasible"
    objective: Optional[Fraction]
    x: Optional[tuple[Fraction, ...]]


def _pivot(T: list[list[Fraction]], r: int, c: int) -> None:
    pr = T[r]
    pv = pr[c]
    if pv != 1:
        T[r] = pr = [x / pv for x in pr]
    for i, row in enumerate(T):
        if i != r and row[c]:
            f = row[c]
            T[i] = [x - f * y for x, y in zip(row, pr)]


def _run_simplex(T, basis, ncols, obj_row, allowed):
    """Maximize with Bland's rule. The objective row holds reduced costs
    (c_j - z_j); column ``ncols`` is the right-hand side."""
    m = len(basis)
    while True:
        enter = next((j for j in range(ncols) if allowed[j] and T[obj_row][j] > 0), None)
        if enter is None:
            return
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][ncols] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            raise LPUnbounded("simplex: objective unbounded")
        leave = best[1]
        _pivot(T, leave, enter)
        basis[leave] = enter


def simplex_max(A: RatMatrix, b: Sequence, c: Sequence) -> LPResult:
    """Maximize c.x subject to A x = b, x >= 0, exactly (two phases, Bland's rule)."""
    _check_scale(A)
    m, n = A.shape
    b = [as_rational(x) for x in b]
    c = [as_rational(x) for x in c]
    rows = []
    for i in range(m):
        r = list(A.row(i))
        bi = b[i]
        if bi < 0:
            r = [-x for x in r]
            bi = -bi
        rows.append(r + [Fraction(int(k == i)) for k in range(m)] + [bi])
    ncols = n + m
    # phase 1: maximize -sum(artificials); reduced costs = sum of rows on structural columns
    phase1 = [sum((rows[i][j] for i in range(m)), Fraction(0)) if j < n else Fraction(0)
              for j in range(ncols)]
    phase1.append(sum((rows[i][ncols] for i in range(m)), Fraction(0)))
    T = rows + [phase1]
    basis = [n + i for i in range(m)]
    _run_simplex(T, basis, ncols, m, [True] * ncols)
    if T[m][ncols] != 0:
        return LPResult("infeasible", None, None)

    # drive artificials out of the basis; drop redundant rows
    i = 0
    while i < len(basis):
        if basis[i] >= n:
            j = next((j for j in range(n) if T[i][j] != 0), None)
            if j is None:
                del T[i]
                del basis[i]
                continue
            _pivot(T, i, j)
            basis[i] = j
        i += 1
    m2 = len(basis)
    T = [row[:n] + [row[ncols]] for row in T[:m2]]
    obj = [c[j] - sum((c[basis[i]] * T[i][j] for i in range(m2)), Fraction(0)) for j in range(n)]
    obj.append(-sum((c[basis[i]] * T[i][n] for i in range(m2)), Fraction(0)))
    T.append(obj)
    _run_simplex(T, basis, n, m2, [True] * n)
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        x[j] = T[i][n]
    return LPResult("optimal", dot(c, x), tuple(x))


def lp_max_min_weight(A: RatMatrix, b: Sequence) -> LPResult:
    """Maximize t subject to A w = b and w >= t >= 0.

    ``A`` must already contain the convexity rows (sum of each weight
    block equals 1); those keep t bounded. ``x`` of the result is the
    weight vector w, ``objective`` is t*.
    """
    ones = [sum(A.row(i), Fraction(0)) for i in range(A.rows)]
    ext = RatMatrix(A.rows, A.cols + 1, (x for i in range(A.rows) for x in (*A.row(i), ones[i])))
    c = [0] * A.cols + [1]
    try:
        res = simplex_max(ext, b, c)
    except LPUnbounded as exc:
        raise LPUnbounded("max-min weight LP unbounded; convexity rows missing?") from exc
    if res.status != "optimal":
        return res
    t = res.x[-1]
    w = tuple(z + t for z in res.x[:-1])
    return LPResult("optimal", t, w)
