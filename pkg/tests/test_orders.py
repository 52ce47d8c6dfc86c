"""Order formulas for the classical group families."""

import pytest
from hypothesis import given, settings, strategies as st

from involution_atlas.exact import render_poly
from involution_atlas.orders import (COSET_FAMILIES, GROUP_FAMILIES, GroupSpec,
                                     char_parity_of, is_prime_power,
                                     order_factored, order_int, order_poly)

PRIME_POWERS = (2, 3, 4, 5, 7, 8, 9, 11, 13, 16)


def test_prime_power_predicate():
    for q in PRIME_POWERS:
        assert is_prime_power(q)
    for n in (0, 1, 6, 10, 12, 15, 100):
        assert not is_prime_power(n)


def test_char_parity():
    assert char_parity_of(2) == "even"
    assert char_parity_of(8) == "even"
    assert char_parity_of(3) == "odd"
    assert char_parity_of(9) == "odd"


def test_validate_q_rejects_non_prime_powers():
    spec = GroupSpec("O+", 4, "odd")
    with pytest.raises(ValueError):
        spec.validate_q(6)
    with pytest.raises(ValueError):
        spec.validate_q(4)   # parity mismatch: spec says odd
    with pytest.raises(ValueError):
        order_int(spec, 12)


def test_known_orders():
    assert order_int(GroupSpec("O+", 4, "odd"), 3) == 1152
    assert order_int(GroupSpec("O+", 4, "even"), 2) == 72
    assert order_int(GroupSpec("O-", 4, "even"), 2) == 120
    assert order_int(GroupSpec("Sp", 4, "even"), 2) == 720
    assert order_int(GroupSpec("Sp", 2, "odd"), 5) == 120
    assert order_int(GroupSpec("O", 3, "odd"), 3) == 48
    assert order_int(GroupSpec("O", 5, "odd"), 3) == 103680
    assert order_int(GroupSpec("O+", 2, "odd"), 3) == 4
    assert order_int(GroupSpec("O-", 2, "odd"), 3) == 8
    assert order_int(GroupSpec("O+", 0, "odd"), 3) == 1


def test_symbolic_matches_example():
    assert render_poly(order_poly(GroupSpec("O+", 4, "odd"))) == \
        "2q^6 - 4q^4 + 2q^2"


def test_subgroup_index_relations():
    for q in (3, 5, 9):
        for dim, fams in (((4, ("O+", "SO+", "Omega+")),
                           (6, ("O-", "SO-", "Omega-")),
                           (5, ("O", "SO", "Omega")))):
            o, so, om = (order_int(GroupSpec(f, dim, "odd"), q) for f in fams)
            assert o == 2 * so
            assert so == 2 * om
    for q in (2, 4, 8):
        for dim, sign in ((4, "+"), (6, "-")):
            o = order_int(GroupSpec("O" + sign, dim, "even"), q)
            om = order_int(GroupSpec("Omega" + sign, dim, "even"), q)
            assert o == 2 * om


def test_coset_cardinalities():
    for fam in COSET_FAMILIES:
        parity = "odd" if "SO" in fam else "even"
        q = 3 if parity == "odd" else 2
        big = fam.split("\\")[0]
        assert (order_int(GroupSpec(fam, 4, parity), q) * 2
                == order_int(GroupSpec(big, 4, parity), q))


def test_validation_errors():
    with pytest.raises(ValueError):
        GroupSpec("O-", 0, "odd")
    with pytest.raises(ValueError):
        GroupSpec("O+", 3, "odd")       # signed families need even dimension
    with pytest.raises(ValueError):
        GroupSpec("O", 4, "odd")        # unsigned O is odd-dimensional
    with pytest.raises(ValueError):
        GroupSpec("SO+", 4, "even")     # no determinant split at even q
    with pytest.raises(ValueError):
        GroupSpec("Sp", 3, "odd")       # symplectic dimension must be even
    with pytest.raises(ValueError):
        GroupSpec("O+\\SO+", 3, "odd")  # cosets are even-dimensional
    with pytest.raises(ValueError):
        GroupSpec("bogus", 4, "odd")


@settings(deadline=None)
@given(st.sampled_from(GROUP_FAMILIES), st.sampled_from((0, 2, 3, 4, 5, 6, 7, 8)),
       st.sampled_from(PRIME_POWERS))
def test_poly_evaluates_to_int_order(family, dim, q):
    parity = char_parity_of(q)
    try:
        spec = GroupSpec(family, dim, parity)
    except ValueError:
        return
    poly = order_poly(spec)
    assert poly(q) == order_int(spec, q)
    assert order_int(spec, q) >= 1


@settings(deadline=None)
@given(st.sampled_from(GROUP_FAMILIES + COSET_FAMILIES),
       st.sampled_from((2, 3, 4, 5, 6, 8)), st.sampled_from((3, 5, 9)))
def test_factored_form_consistent(family, dim, q):
    from involution_atlas.exact import PolyQ, cyclotomic
    try:
        spec = GroupSpec(family, dim, "odd")
    except ValueError:
        return
    scal, factors = order_factored(spec)
    value = scal
    for d, e in factors.items():
        if d == 0:
            value *= q ** e
        else:
            value *= PolyQ.from_int_list(cyclotomic(d))(q) ** e
    assert value == order_int(spec, q)
    assert order_poly(spec)(q) == order_int(spec, q)


def test_trivial_dim_zero():
    for fam in ("O+", "SO+", "Omega+", "Sp"):
        parity = "odd"
        assert order_int(GroupSpec(fam, 0, parity), 5) == 1
