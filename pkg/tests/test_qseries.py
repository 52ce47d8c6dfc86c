"""Symbolic verification of the generating-function identities."""

import pytest

from involution_atlas.qseries import (EULER_NOTE, THEOREMS, all_identity_cases,
                                      euler_sum_check, gf_lhs, gf_rhs,
                                      qbinom_check, verify_identity)

SIGNED = tuple(t for t in THEOREMS if THEOREMS[t].signed)
UNSIGNED = tuple(t for t in THEOREMS if not THEOREMS[t].signed)


def test_theorem_registry():
    assert set(THEOREMS) == {"6.1a", "6.1b", "6.2", "6.3a", "6.3b", "6.3c",
                             "6.4a", "6.4b", "6.4c", "6.6", "6.7"}
    assert set(SIGNED) == {"6.1a", "6.2", "6.6", "6.7"}
    for tid, th in THEOREMS.items():
        assert th.statement, tid
    assert len(all_identity_cases()) == 15


def test_all_cases_verify_short_window():
    for tid, sign in all_identity_cases():
        report = verify_identity(tid, sign, trunc=5)
        assert report.all_equal, (tid, sign)
        assert len(report.rows) == 6
        for row in report.rows:
            assert row.lhs == row.rhs


def test_sign_argument_validation():
    with pytest.raises(ValueError):
        verify_identity("6.3a", "plus")
    with pytest.raises(ValueError):
        verify_identity("6.1a")
    with pytest.raises(ValueError):
        verify_identity("bogus", None)


def test_lhs_rhs_series_agree_coefficientwise():
    lhs = gf_lhs("6.3b", None, 6)
    rhs = gf_rhs("6.3b", None, 6)
    assert lhs == rhs
    for n in range(7):
        assert lhs.coefficient(n) == rhs.coefficient(n)


def test_plus_minus_series_differ():
    plus = gf_lhs("6.1a", "plus", 5)
    minus = gf_lhs("6.1a", "minus", 5)
    assert plus != minus


def test_report_is_serializable():
    report = verify_identity("6.2", "minus", trunc=4)
    d = report.to_json_dict()
    assert d["theorem"] == "6.2" and d["sign"] == "minus"
    assert len(d["rows"]) == 5
    assert all(r["equal"] for r in d["rows"])


def test_euler_and_qbinomial_ground_truth():
    # classical series identities the engine's expansion convention rests on
    assert euler_sum_check(1, 0, "minus_x")
    assert euler_sum_check(1, 1, "minus_x")
    assert euler_sum_check(2, 0, "plus_x")
    assert qbinom_check(1)
    assert qbinom_check(2, 1, 1)
    assert EULER_NOTE


def test_identity_fails_on_perturbed_truncation():
    # sanity: the checker is not vacuous; comparing different theorems fails
    lhs = gf_lhs("6.3a", None, 5)
    rhs = gf_rhs("6.3b", None, 5)
    assert lhs != rhs
