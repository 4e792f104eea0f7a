import random
from fractions import Fraction

import pytest

from conftest import sympy_rank
from rigidcert import construct
from rigidcert.certify import certify_superstable
from rigidcert.construct import (CoreSpec, RandomSource, bolker_roth_dim, build_core, build_kmn,
                                 expected_stress_dim, hendrickson_gate, moment_curve, trilaterate,
                                 trilateration_sides)
from rigidcert.errors import HypothesisViolation, RetryExhausted
from rigidcert.exactmat import rank
from rigidcert.framework import (affine_span_dim, bipartite_framework, framework_to_json,
                                 is_general_position)
from rigidcert.rigidity import assemble_stress_matrix, is_infinitesimally_rigid, rigidity_matrix, stress_basis
from rigidcert.selftest import random_gp_bipartite


def test_moment_curve():
    assert moment_curve(0, 3) == (0, 0, 0)
    assert moment_curve(2, 3) == (2, 4, 8)
    pts = [moment_curve(t, 3) for t in (Fraction(-1, 2), 0, 7, 11)]
    assert affine_span_dim(pts) == 3


def test_core_spec_validation():
    with pytest.raises(HypothesisViolation):
        CoreSpec(2, (1, 2, 3, 3, 5, 6))
    with pytest.raises(HypothesisViolation):
        CoreSpec(2, (1, 2, 3))
    spec = CoreSpec.default(2)
    assert spec.s == (1, 3, 5) and spec.t == (2, 4, 6)


def test_core_d1_layout():
    F = build_core(1)
    assert F.part_points("U") == [(1,), (3,)]
    assert F.part_points("V") == [(2,), (4,)]
    (w,) = stress_basis(F)
    assert rank(assemble_stress_matrix(F, w)) == 2


@pytest.mark.parametrize("d,r", [(1, 2), (2, 3), (3, 4)])
def test_core_certificates(d, r):
    cert = certify_superstable(build_core(d))
    assert cert.verdict and cert.stress_matrix_rank == r == d + 1


@pytest.mark.parametrize("d", [1, 2, 3])
def test_random_core_specs(d):
    rng = random.Random(100 + d)
    for _ in range(5):
        params = sorted({Fraction(rng.randint(-60, 60), rng.randint(1, 5)) for _ in range(4 * d + 8)})
        params = sorted(rng.sample(params, 2 * d + 2))
        F = build_core(d, CoreSpec(d, params))
        assert certify_superstable(F).verdict


def test_trilaterate():
    core = build_core(2)
    F = trilaterate(core, "U", (Fraction(1, 3), Fraction(-7, 2)))
    assert len(F.partition.U) == 4 and len(F.partition.V) == 3
    assert F.graph.m == 12
    assert F.partition.U == (0, 1, 2, 3)


def test_trilaterate_collinear_opposite_rejected():
    F = bipartite_framework([(0, 0), (1, 5), (4, 1)], [(1, 1), (2, 2), (3, 3)])
    with pytest.raises(HypothesisViolation):
        trilaterate(F, "U", (7, 7))
    with pytest.raises(ValueError):
        trilaterate(F, "W", (7, 7))


def test_trilateration_chain_d2():
    # D + 2 - 2(d+1) = 1 addition for d = 2
    assert trilateration_sides(2, 3, 4) == ["V"]
    assert trilateration_sides(2, 4, 3) == ["U"]
    assert trilateration_sides(3, 5, 6) == ["U", "V", "V"]
    assert trilateration_sides(3, 4, 7) == ["V", "V", "V"]


@pytest.mark.parametrize("d,m,n,s,r", [(2, 3, 4, 1, 11), (3, 5, 6, 3, 27), (3, 4, 7, 1, 27)])
def test_build_kmn_counts(d, m, n, s, r):
    F, audit = build_kmn(d, m, n, RandomSource(11))
    assert audit.passed
    assert audit.stress_dim == s == (m - d - 1) * (n - d - 1) + 1 == audit.bolker_roth_dim
    assert audit.rigidity_rank == r == d * (m + n) - d * (d + 1) // 2
    assert len(stress_basis(F)) == s
    assert is_infinitesimally_rigid(F).rigid
    assert F.n == m + n and F.graph.m == m * n


def test_build_kmn_cas_rank():
    F, _ = build_kmn(3, 5, 6, RandomSource(5))
    assert sympy_rank(rigidity_matrix(F).matrix) == 27


def test_build_kmn_larger_than_reduced():
    F, audit = build_kmn(2, 4, 4, RandomSource(2))
    assert audit.passed
    assert audit.stress_dim == expected_stress_dim(2, 4, 4) == 1 + 2
    assert audit.rigidity_rank == 2 * 8 - 3


def test_build_kmn_deterministic():
    a = build_kmn(3, 5, 6, RandomSource(42))
    b = build_kmn(3, 5, 6, RandomSource(42))
    assert framework_to_json(a[0]) == framework_to_json(b[0])
    assert a[1] == b[1]
    c = build_kmn(3, 5, 6, RandomSource(43))
    assert framework_to_json(a[0]) != framework_to_json(c[0])


def test_build_kmn_gate():
    with pytest.raises(HypothesisViolation, match="8 < 11"):
        build_kmn(3, 4, 4, RandomSource(0))


def test_build_kmn_retry_exhaustion(monkeypatch):
    # midpoint of the first two U points: collinear, so general position always fails
    monkeypatch.setattr(construct, "generic_point", lambda rng, d: (Fraction(2), Fraction(5)))
    with pytest.raises(RetryExhausted) as exc:
        build_kmn(2, 3, 4, RandomSource(9), retry_budget=3)
    assert exc.value.seeds_tried == (0, 1, 2)


def test_build_kmn_retry_recovers(monkeypatch):
    calls = []
    real = construct.generic_point

    def flaky(rng, d):
        calls.append(1)
        return (Fraction(2), Fraction(5)) if len(calls) == 1 else real(rng, d)

    monkeypatch.setattr(construct, "generic_point", flaky)
    F, audit = build_kmn(2, 3, 4, RandomSource(9))
    assert audit.passed and audit.retries_used == 1 and audit.seeds_tried == [0, 1]


def test_hendrickson_gate():
    assert hendrickson_gate(2, 3, 4).ok
    g = hendrickson_gate(3, 4, 4)
    assert not g.ok and g.reasons == ("m + n = 8 < 11 = C(d+2,2) + 1",)
    g = hendrickson_gate(2, 2, 9)
    assert not g.ok and g.reasons == ("m < d+1 (2 < 3)",)


def test_bolker_roth_examples():
    assert bolker_roth_dim(build_core(2)) == 1
    rng = random.Random(7)
    F = random_gp_bipartite(rng, 3, 5, 5)
    assert bolker_roth_dim(F) == 1 == len(stress_basis(F))
    F, _ = build_kmn(3, 5, 6, RandomSource(42))
    assert bolker_roth_dim(F) == 3


def test_bolker_roth_preconditions():
    with pytest.raises(HypothesisViolation):
        bolker_roth_dim(bipartite_framework([(0, 0), (1, 1), (2, 2)], [(0, 1), (1, 0), (3, 5)]))


def test_bolker_roth_oracle_random():
    rng = random.Random(2718)
    for _ in range(60):
        d = rng.randint(1, 3)
        F = random_gp_bipartite(rng, d, rng.randint(d + 1, 6), rng.randint(d + 1, 6))
        assert bolker_roth_dim(F) == len(stress_basis(F))


def test_zero_diagonal_necessity():
    rng = random.Random(31)
    for _ in range(3):
        F = random_gp_bipartite(rng, 3, 5, 5)
        basis = stress_basis(F)
        assert len(basis) == 1
        Om = assemble_stress_matrix(F, basis[0])
        assert all(Om[i, i] == 0 for i in range(F.n))
        assert not Om.is_zero()
        assert not certify_superstable(F).psd.is_psd
