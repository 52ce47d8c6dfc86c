"""Acceptance gate: one check per shipped guarantee, one line per verdict.

Each test prints a single [PRIMARY] line before asserting, so the verdicts
read off a plain pytest -v run in order.
"""

from fractions import Fraction as Q

from involution_atlas.asymptotics import (LimitSpec, convergence_table,
                                          infinite_product, limit_value)
from involution_atlas.counts import (GroupSpec,
                                     char_degree_sum_via_involutions,
                                     count_involutions,
                                     count_involutions_poly)
from involution_atlas.exact import parse_poly
from involution_atlas.fixtures import omega_table_poly
from involution_atlas.oracle import default_suite, omega_agreement_suite
from involution_atlas.qseries import all_identity_cases, verify_identity

ODD_Q = (3, 5, 7, 9)
EVEN_Q = (2, 4, 8)


def _verdict(n, ok, detail):
    print(f"[PRIMARY] criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


def test_criterion_1_omega_table_reproduction():
    bad = []
    for n in range(2, 9):
        dim = 2 * n
        for sign in ("+", "-"):
            family = (f"Omega{sign}" if dim % 4 == 0
                      else f"O{sign}\\Omega{sign}")
            computed = count_involutions_poly(GroupSpec(family, dim, "even")).value
            try:
                fixture = omega_table_poly(dim, sign)
            except ValueError:
                fixture = omega_table_poly(dim, "+")  # single shared entry
            if computed != fixture:
                bad.append((family, dim))
    eight = count_involutions_poly(GroupSpec("Omega+", 8, "even")).value
    if eight != parse_poly("q^16 + q^12 - q^4"):
        bad.append(("Omega+", 8, "spot value"))
    _verdict(1, not bad,
             "table rows for dims 4..16, both signs, match exactly"
             if not bad else f"mismatches at {bad}")


def test_criterion_2_generating_function_identities():
    failures = [(tid, sign) for tid, sign in all_identity_cases()
                if not verify_identity(tid, sign, trunc=10).all_equal]
    _verdict(2, not failures,
             "all 15 identity cases agree coefficientwise through u^10"
             if not failures else f"unequal cases {failures}")


def test_criterion_3_oracle_equivalence():
    rows = default_suite()
    bad = [(r.family, r.dim, r.q, r.subset) for r in rows if not r.ok]
    sp42 = [r for r in rows
            if r.family == "Sp" and r.dim == 4 and r.q == 2 and r.subset == "all"]
    ok = not bad and sp42 and sp42[0].expected == 76
    _verdict(3, ok,
             f"{len(rows)} brute-force counts equal formula counts, "
             "Sp(4,2) fixture 76 included"
             if ok else f"failing rows {bad or 'missing Sp(4,2)'}")


def test_criterion_4_omega_membership_agreement():
    rows = omega_agreement_suite()
    tested = sum(r.tested for r in rows)
    bad = [r.label for r in rows if r.mismatches]
    kinds = {r.criterion for r in rows}
    ok = (not bad and tested > 0
          and kinds == {"rank_parity", "eigenspace_witt"})
    _verdict(4, ok,
             f"membership criteria agree with realized Omega on all "
             f"{tested} tested elements across {len(rows)} groups"
             if ok else f"mismatches in {bad}, criteria seen {kinds}")


def test_criterion_5_asymptotics():
    eps = Q(1, 10 ** 40)
    checks = []
    pv = limit_value(LimitSpec("SO_dim0mod4", 3), eps)
    checks.append(f"{float(pv.value):.4f}" == "1.1690")
    prod = infinite_product("one_plus", 2, -1, 3, eps)
    checks.append(prod.factors >= 40)
    for sign in ("plus", "minus"):
        rows = convergence_table(LimitSpec("SO_dim0mod4", 3, sign),
                                 max_dim=24, eps=eps)
        checks.append(rows[-1].abs_error < Q(1, 10 ** 4))
    rows = convergence_table(LimitSpec("Ratio_Omega_over_SO", 3),
                             max_dim=24, eps=eps)
    checks.append(abs(rows[-1].ratio - Q(1, 2)) < Q(1, 10 ** 3))
    for kind in ("Omega_qeven_dim0mod4", "Omega_qeven_dim2mod4"):
        rows = convergence_table(LimitSpec(kind, 2), max_dim=24, eps=eps)
        checks.append(rows[-1].abs_error < Q(1, 10 ** 3))
    _verdict(5, all(checks),
             "q=3 even-dim tables reach the 1.1690 limit within 1e-4 "
             "(40+ product factors), ratio within 1e-3 of 1/2, q=2 "
             "Omega limits within 1e-3"
             if all(checks) else f"check vector {checks}")


def _numeric(family, dim, parity, q, branch=None):
    return count_involutions(GroupSpec(family, dim, parity), q, branch).value


def test_criterion_6_invariant_suite():
    bad = []
    for q in ODD_Q + EVEN_Q:
        parity = "odd" if q % 2 else "even"
        for dim in range(2, 17, 2):
            for sign in ("+", "-"):
                whole = _numeric(f"O{sign}", dim, parity, q)
                if parity == "odd":
                    parts = (_numeric(f"SO{sign}", dim, parity, q)
                             + _numeric(f"O{sign}\\SO{sign}", dim, parity, q))
                else:
                    parts = (_numeric(f"Omega{sign}", dim, parity, q)
                             + _numeric(f"O{sign}\\Omega{sign}", dim, parity, q))
                if whole != parts:
                    bad.append(("additivity", sign, dim, q))
    for q in ODD_Q:
        for dim in range(3, 17, 2):
            if 2 * _numeric("SO", dim, "odd", q) != _numeric("O", dim, "odd", q):
                bad.append(("odd-dim halving", dim, q))
    for q in (5, 9):
        for dim in range(2, 17, 2):
            if 2 * _numeric("Omega-", dim, "odd", q) != _numeric("SO-", dim, "odd", q):
                bad.append(("1mod4 minus halving", dim, q))
    for q in (3, 5, 9, 2, 4, 8):
        parity = "odd" if q % 2 else "even"
        branch = f"{q % 4}mod4" if q % 2 else None
        for dim in range(2, 17, 2):
            for family in ("O+", "SO+", "Omega+", "Omega-"):
                if parity == "even" and family.startswith("SO"):
                    continue
                spec = GroupSpec(family, dim, parity)
                b = branch if "Omega" in family else None
                sym = count_involutions_poly(spec, b).value
                if int(sym(q)) != _numeric(family, dim, parity, q, b):
                    bad.append(("coherence", family, dim, q))
    _verdict(6, not bad,
             "additivity, odd-dimension halving, 1 mod 4 Omega-minus "
             "halving, and symbolic/numeric coherence hold for q <= 9, "
             "dim <= 16"
             if not bad else f"violations {bad[:8]}")


def test_criterion_7_degree_sum_scope():
    # Character-degree sums equal involution counts for these groups; the
    # degree data itself has no independent source in this package, so the
    # involution side (criteria 1-3) is what this artifact certifies.
    ok = (char_degree_sum_via_involutions(0, 3, "+") == 2
          and char_degree_sum_via_involutions(0, 5, "+") == 4
          and char_degree_sum_via_involutions(0, 3, "-") == 4)
    _verdict(7, ok,
             "informational: degree-sum claims covered only via their "
             "involution-count side (criteria 1-3); spot identities hold")
