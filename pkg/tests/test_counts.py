"""Involution-count formulas, numeric and symbolic."""

import pytest
from hypothesis import given, settings, strategies as st

from involution_atlas.counts import (CountReport, OmegaClassQuery,
                                     char_degree_sum_via_involutions,
                                     count_involutions, count_involutions_poly,
                                     omega_class_membership)
from involution_atlas.exact import parse_poly, render_poly
from involution_atlas.orders import GroupSpec, WittType, char_parity_of

ODD_Q = (3, 5, 7, 9)
EVEN_Q = (2, 4, 8)


def spec(family, dim, parity="odd"):
    return GroupSpec(family, dim, parity)


def test_frozen_small_counts():
    assert count_involutions(spec("O+", 2), 3).value == 4
    assert count_involutions(spec("O", 3), 3).value == 20
    assert count_involutions(spec("SO", 3), 3).value == 10
    assert count_involutions(spec("Omega", 3), 3).value == 4
    assert count_involutions(spec("Omega+", 4, "even"), 2).value == 16
    assert count_involutions(spec("O-\\Omega-", 6, "even"), 2).value == 576


def test_symbolic_table_entries():
    p = count_involutions_poly(spec("Omega+", 8, "even")).value
    assert p == parse_poly("q^16 + q^12 - q^4")
    c = count_involutions_poly(spec("O+\\Omega+", 10, "even")).value
    assert c == parse_poly("q^25 + q^21 - q^20 - q^16 - q^13 + q^8")
    assert count_involutions_poly(spec("O+", 2)).value(3) == 4


def test_report_serialization_fields():
    rep = count_involutions(spec("SO", 3), 3)
    d = rep.to_json_dict()
    assert d["family"] == "SO" and d["dim"] == 3 and d["q"] == 3
    assert d["value"] == "10"
    assert "formula_id" in d and "branch" not in d
    rep = count_involutions(spec("Omega-", 4), 5)
    d = rep.to_json_dict()
    assert d["branch"] == "1mod4"
    sym = count_involutions_poly(spec("Omega-", 4), branch="3mod4")
    d = sym.to_json_dict()
    assert "q" not in d and d["branch"] == "3mod4"


def test_branch_handling():
    with pytest.raises(ValueError):
        count_involutions_poly(spec("Omega+", 4))       # ambiguous branch
    with pytest.raises(ValueError):
        count_involutions(spec("Omega+", 4), 5, "3mod4")  # q = 5 is 1 mod 4
    with pytest.raises(ValueError):
        count_involutions(spec("SO+", 4), 5, "1mod4")   # branch is Omega-only
    auto = count_involutions(spec("Omega+", 4), 5)
    explicit = count_involutions(spec("Omega+", 4), 5, "1mod4")
    assert auto.value == explicit.value
    one = count_involutions_poly(spec("Omega+", 4), "1mod4").value
    three = count_involutions_poly(spec("Omega+", 4), "3mod4").value
    assert one(5) == count_involutions(spec("Omega+", 4), 5).value
    assert three(3) == count_involutions(spec("Omega+", 4), 3).value
    assert one != three


def test_dimension_bound():
    with pytest.raises(ValueError):
        count_involutions(spec("O+", 62), 3)
    assert count_involutions(spec("O+", 62), 3, dim_bound=80).value > 0


def test_additivity_q_odd():
    for q in ODD_Q:
        for dim in (2, 4, 6, 8, 10):
            for sign in "+-":
                o = count_involutions(spec("O" + sign, dim), q).value
                so = count_involutions(spec("SO" + sign, dim), q).value
                coset = count_involutions(
                    spec(f"O{sign}\\SO{sign}", dim), q).value
                assert so + coset == o, (q, dim, sign)


def test_additivity_q_even():
    for q in EVEN_Q:
        for dim in (2, 4, 6, 8, 10):
            for sign in "+-":
                o = count_involutions(spec("O" + sign, dim, "even"), q).value
                om = count_involutions(
                    spec("Omega" + sign, dim, "even"), q).value
                coset = count_involutions(
                    spec(f"O{sign}\\Omega{sign}", dim, "even"), q).value
                assert om + coset == o, (q, dim, sign)


def test_odd_dimension_halving():
    for q in ODD_Q:
        for dim in (1, 3, 5, 7, 9):
            o = count_involutions(spec("O", dim), q).value
            so = count_involutions(spec("SO", dim), q).value
            assert 2 * so == o, (q, dim)


def test_omega_minus_halving_1mod4():
    for q in (5, 9, 13):
        for dim in (2, 4, 6, 8):
            so = count_involutions(spec("SO-", dim), q).value
            om = count_involutions(spec("Omega-", dim), q).value
            assert 2 * om == so, (q, dim)


@settings(deadline=None)
@given(st.sampled_from(("O+", "O-", "O", "SO+", "SO-", "SO",
                        "Omega+", "Omega-", "Omega")),
       st.sampled_from((2, 3, 4, 5, 8, 11, 16)),
       st.sampled_from(ODD_Q + EVEN_Q))
def test_symbolic_numeric_coherence(family, dim, q):
    parity = char_parity_of(q)
    if parity == "even" and family in ("O", "SO", "Omega"):
        return   # no odd-dimension formulas in even characteristic
    try:
        target = GroupSpec(family, dim, parity)
    except ValueError:
        return
    branch = None
    if parity == "odd" and family.startswith("Omega"):
        branch = "1mod4" if q % 4 == 1 else "3mod4"
    poly = count_involutions_poly(target, branch).value
    num = count_involutions(target, q).value
    assert poly(q) == num
    assert num >= 1


def test_omega_class_membership_examples():
    assert omega_class_membership(OmegaClassQuery(0, WittType.TYPE_0, 5))
    assert not omega_class_membership(OmegaClassQuery(2, WittType.TYPE_0, 3))
    assert omega_class_membership(OmegaClassQuery(2, WittType.TYPE_W, 3))
    with pytest.raises(ValueError):
        omega_class_membership(OmegaClassQuery(3, WittType.TYPE_0, 3))
    with pytest.raises(ValueError):
        omega_class_membership(OmegaClassQuery(2, WittType.TYPE_1, 3))
    with pytest.raises(ValueError):
        omega_class_membership(OmegaClassQuery(2, WittType.TYPE_0, 4))


def test_char_degree_sum_examples():
    assert char_degree_sum_via_involutions(0, 3, "+") == 2
    assert char_degree_sum_via_involutions(0, 5, "+") == 4
    assert char_degree_sum_via_involutions(0, 3, "-") == 4
    for m, q, sign in ((1, 3, "+"), (1, 5, "-"), (2, 3, "+")):
        want = count_involutions(
            spec(f"O{sign}\\SO{sign}", 4 * m + 2), q).value
        assert char_degree_sum_via_involutions(m, q, sign) == want
    with pytest.raises(ValueError):
        char_degree_sum_via_involutions(1, 4, "+")
