import random
from fractions import Fraction
from itertools import combinations

import pytest
import sympy

from rigidcert.exactmat import RatMatrix

ACCEPTANCE_RESULTS = []


def to_sympy(M: RatMatrix) -> sympy.Matrix:
    return sympy.Matrix(M.rows, M.cols, [sympy.Rational(x.numerator, x.denominator) for x in M._data])


def sympy_rank(M: RatMatrix) -> int:
    if M.rows == 0 or M.cols == 0:
        return 0
    return to_sympy(M).rank()


def rand_q(rng, lo=-20, hi=20, maxden=6):
    return Fraction(rng.randint(lo, hi), rng.randint(1, maxden))


def random_matrix(rng, rows, cols, rank=None):
    """Random rational matrix, optionally of a prescribed (maximal) rank via a product."""
    if rank is None:
        return RatMatrix(rows, cols, [rand_q(rng) for _ in range(rows * cols)])
    B = RatMatrix(rows, rank, [rand_q(rng) for _ in range(rows * rank)])
    C = RatMatrix(rank, cols, [rand_q(rng) for _ in range(rank * cols)])
    return B @ C


def principal_minors_nonneg(S: RatMatrix) -> bool:
    n = S.rows
    for k in range(1, n + 1):
        for idx in combinations(range(n), k):
            if to_sympy(S.submatrix(list(idx), list(idx))).det() < 0:
                return False
    return True


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)
