"""Tests for invariant-subspace certification and the structure reports."""

from fractions import Fraction

import pytest

from sl3rep.series import BasisLabel, SeriesParams, basis, multiplicity
from sl3rep.structure import (SubspaceSpec, degenerate_series_report,
                              even_k_report, k3_chain_report,
                              k23_subspace_report, verify_invariant)


def test_whole_module_is_invariant():
    params = SeriesParams((Fraction(1, 3), Fraction(1, 3), Fraction(-2, 3)),
                          (0, 0, 0))
    spec = SubspaceSpec("everything", params, lambda lab: True)
    res = verify_invariant(spec, 8)
    assert res.invariant
    assert res.connected
    assert not res.leakage
    assert res.checked_labels == sum(len(basis(params, l)) for l in range(7))


def test_generic_parameter_has_no_proper_invariant_span():
    # at a generic rational parameter the m1 = 0 span leaks
    params = SeriesParams((Fraction(1, 3), Fraction(1, 5), Fraction(-8, 15)),
                          (0, 0, 0))
    spec = SubspaceSpec("m1 = 0", params, lambda lab: lab.m1 == 0)
    res = verify_invariant(spec, 8)
    assert not res.invariant
    assert res.leakage


def test_m2_saturation_required():
    # a predicate that cuts a K-type row in half cannot be invariant
    params = SeriesParams((Fraction(0), Fraction(0), Fraction(0)), (0, 0, 0))
    spec = SubspaceSpec("half rows", params, lambda lab: lab.m2 >= 0)
    res = verify_invariant(spec, 6)
    assert not res.invariant
    assert any(e["generator"] == "Y" for e in res.leakage)


def test_verify_invariant_needs_exact_parameter():
    params = SeriesParams((0.5j, -0.5j, 0), (0, 0, 0))
    with pytest.raises(ValueError):
        verify_invariant(SubspaceSpec("x", params, lambda lab: True), 6)
    with pytest.raises(ValueError):
        verify_invariant(
            SubspaceSpec("x", SeriesParams((0, 0, 0), (0, 0, 0)),
                         lambda lab: True), 1)


@pytest.mark.parametrize("k", [2, 4])
def test_even_k_reports(k):
    rep = even_k_report(k, lmax=k + 6)
    assert all(member["invariant"] for member in rep.chain)
    assert not rep.metadata["multiplicity_mismatches"]
    for l, (m_a, m_b, total) in rep.multiplicities.items():
        assert m_a + m_b == total
    assert rep.metadata["composition_length"] == 2
    doc = rep.to_json()
    assert set(doc) == {"title", "chain", "multiplicities", "certificates",
                        "notes", "metadata"}
    assert rep.lines()


def test_even_k_validation():
    with pytest.raises(ValueError):
        even_k_report(3)
    with pytest.raises(ValueError):
        even_k_report(4, lmax=6)


def test_degenerate_series_regular_point():
    rep = degenerate_series_report(Fraction(1, 3), lmax=8)
    assert rep.metadata["U_pm1_zero"]
    assert not rep.metadata["vanishing_rungs"]
    assert not rep.metadata["quarter_integral"]
    assert rep.chain and rep.chain[0]["invariant"]


def test_degenerate_series_quarter_integral():
    rep = degenerate_series_report(Fraction(-7, 4), lmax=8)
    assert rep.metadata["quarter_integral"]
    assert [2, 2] in rep.metadata["vanishing_rungs"]
    assert any("reducible" in n for n in rep.notes)


def test_degenerate_series_rungs_printed():
    rep = degenerate_series_report(Fraction(1, 2), lmax=6)
    # rung values 4s + 2l + 3 and 4s - 2l + 1 at s = 1/2
    assert rep.metadata["rungs"]["0"] == ["5", "3"]
    assert rep.metadata["rungs"]["4"] == ["13", "-5"]


def test_degenerate_series_numeric_parameter():
    rep = degenerate_series_report(0.3 + 0.2j, lmax=6)
    assert rep.metadata["U_pm1_zero"]
    assert not rep.chain  # no exact certification without a rational s


def test_k3_chain():
    rep = k3_chain_report(lmax=8)
    assert [m["invariant"] for m in rep.chain] == [True, True, True]
    assert rep.metadata["composition_length"] == 3
    assert any("radical cancellation" in n for n in rep.notes)
    names = [m["name"] for m in rep.chain]
    assert any("odd" in n for n in names)


def test_k23_subspace():
    rep = k23_subspace_report(lmax=27)
    assert rep.chain[0]["invariant"]
    assert rep.metadata["first_k_type"] == 23
    assert rep.multiplicities[22][0] == 0
    assert rep.multiplicities[23][0] == 1
    assert rep.multiplicities[27][0] == 3  # m1 in {23, 25, 27}


def test_certificates_name_reasons():
    rep = even_k_report(2, lmax=8)
    reasons = {c["reason"] for c in rep.certificates}
    assert reasons <= {"lambda-zero", "q-zero", "folded-cancellation",
                       "out-of-range"}
    assert "lambda-zero" in reasons
