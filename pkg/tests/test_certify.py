import json

import pytest

from rigidcert.certify import (COMPUTED, PAPER_THEOREM, certify_superstable, core_of, ggr_report,
                               recheck)
from rigidcert.construct import build_core, build_kmn, moment_curve, RandomSource
from rigidcert.errors import DegenerateFramework, HypothesisViolation, NotAStress, StressSearchOutOfScope
from rigidcert.exactmat import quad_form
from rigidcert.framework import bipartite_framework, framework_from_dict, framework_to_json, framework_from_json
from rigidcert.rigidity import stress_basis


def test_core_d1_certificate():
    cert = certify_superstable(build_core(1))
    assert cert.verdict
    assert cert.stress_matrix_rank == 2 == 4 - 1 - 1
    assert cert.psd.is_psd and not cert.conic.conic_exists
    assert cert.conic.max_rank == 1


def test_core_d2_certificate_and_wrong_sign():
    F = build_core(2)
    cert = certify_superstable(F)
    assert cert.verdict and cert.stress_matrix_rank == 3
    bad = certify_superstable(F, [-w for w in cert.stress])
    assert not bad.verdict and not bad.psd.is_psd
    assert quad_form(bad.stress_matrix, bad.psd.failure_witness) < 0


def test_supplied_non_stress_rejected():
    F = build_core(2)
    with pytest.raises(NotAStress):
        certify_superstable(F, [1] * 9)


def test_stress_search_out_of_scope():
    F, _ = build_kmn(3, 5, 6, RandomSource(1))
    with pytest.raises(StressSearchOutOfScope):
        certify_superstable(F)


def test_degenerate_span_rejected():
    F = bipartite_framework([(0, 0), (1, 1)], [(2, 2), (3, 3)])
    with pytest.raises(DegenerateFramework):
        certify_superstable(F)


def test_non_alternating_control():
    p = [moment_curve(t, 2) for t in (1, 2, 3)]
    q = [moment_curve(t, 2) for t in (4, 5, 6)]
    F = bipartite_framework(p, q)
    basis = stress_basis(F)
    if basis and len(basis) == 1:
        cert = certify_superstable(F)
        assert not cert.verdict
        for sign in (1, -1):
            c = certify_superstable(F, [sign * w for w in basis[0]])
            assert not (c.psd.is_psd and c.stress_matrix_rank == F.n - 3)


def test_certificate_json_self_contained():
    cert = certify_superstable(build_core(3))
    data = cert.to_json()
    assert data["verdict"] and data["stress_matrix_rank"] == 4
    assert len(data["psd"]["pivot_permutation"]) == 4
    json.dumps(data)


def test_core_of():
    F, _ = build_kmn(2, 3, 4, RandomSource(7))
    assert core_of(F) == build_core(2)


def test_ggr_report_k34():
    rep = ggr_report(2, 3, 4, 7)
    computed = [c for c in rep.claims if c.basis == COMPUTED]
    cited = [c for c in rep.claims if c.basis == PAPER_THEOREM]
    assert computed and all(c.holds for c in computed)
    assert len(cited) == 3 and all(c.source for c in cited)
    assert rep.computed_ok


def test_ggr_report_k56():
    rep = ggr_report(3, 5, 6, 42)
    assert rep.audit.stress_dim == 3 and rep.audit.rigidity_rank == 27
    assert rep.core_certificate.verdict and rep.core_certificate.n == 8


def test_ggr_report_gate():
    with pytest.raises(HypothesisViolation, match="8 < 11"):
        ggr_report(3, 4, 4, 0)


def test_report_rederivable_from_saved_json():
    rep = ggr_report(3, 4, 7, 3)
    data = json.loads(json.dumps(rep.to_json()))
    F = framework_from_dict(data["framework"])
    again = recheck(F, 4, 7, 3)
    original = [c for c in rep.claims if c.basis == COMPUTED]
    assert [c.to_json() for c in again] == [c.to_json() for c in original]
    assert framework_from_json(framework_to_json(F)) == rep.framework
