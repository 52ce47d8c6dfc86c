"""Truncated power series in u with exact rational-function coefficients in q,
expansion of infinite q-Pochhammer products at base y = 1/q^2, and exact
verification of the generating-function identities for involution proportions.

Each identity states that sum_n i(G_n) q^{n^2} / |O_n| u^n equals an explicit
ratio of Pochhammer products; both sides are assembled independently (left
from the counting formulas, right from Euler expansions) and compared
coefficient by coefficient as reduced rational functions of q.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction as Q
from functools import lru_cache

from .counts import _count_cyclofrac, _numerator_spec
from .exact import CycloFrac, RatFuncQ
from .orders import GroupSpec, _even_prod_factors, order_factored

DEFAULT_TRUNC = 10

POCH_SIGNS = ("plus_x", "minus_x")

EULER_NOTE = ("Pochhammer expansion convention: sum_{n>=0} y^(n(n-1)/2) x^n / "
              "(y;y)_n is expanded as the product prod_{i>=1}(1 + x y^(i-1)); "
              "the reciprocal form sometimes quoted for this sum is "
              "inconsistent with the identities verified here and is treated "
              "as an erratum.")


# ---------------------------------------------------------------------------
# series core

class USeries:
    """Power series in u truncated at u^trunc, coefficients exact in q."""

    __slots__ = ("trunc", "_cyclo")

    def __init__(self, trunc, cyclo_coeffs):
        if trunc < 0:
            raise ValueError("truncation order must be nonnegative")
        cc = list(cyclo_coeffs)
        if len(cc) != trunc + 1:
            raise ValueError(f"need {trunc + 1} coefficients, got {len(cc)}")
        self.trunc = trunc
        self._cyclo = tuple(cc)

    @classmethod
    def zero(cls, trunc):
        return cls(trunc, [CycloFrac.zero()] * (trunc + 1))

    @classmethod
    def from_monomials(cls, terms, trunc):
        """terms: iterable of (coefficient, u_power); coefficient may be an
        int, Fraction, or CycloFrac."""
        cc = [CycloFrac.zero()] * (trunc + 1)
        for c, e in terms:
            if not isinstance(c, CycloFrac):
                c = CycloFrac.from_factored(Q(c), {})
            if 0 <= e <= trunc:
                cc[e] = cc[e] + c
        return cls(trunc, cc)

    def cyclo_coefficient(self, n) -> CycloFrac:
        if not 0 <= n <= self.trunc:
            raise IndexError(f"coefficient {n} outside truncation {self.trunc}")
        return self._cyclo[n]

    def coefficient(self, n) -> RatFuncQ:
        return self.cyclo_coefficient(n).to_ratfunc()

    @property
    def coeffs(self):
        return tuple(c.to_ratfunc() for c in self._cyclo)

    def _check(self, other):
        if not isinstance(other, USeries):
            raise TypeError("expected a USeries")
        if other.trunc != self.trunc:
            raise ValueError(f"truncation mismatch: {self.trunc} vs {other.trunc}")

    def __add__(self, other):
        self._check(other)
        return USeries(self.trunc, [a + b for a, b in zip(self._cyclo, other._cyclo)])

    def __sub__(self, other):
        self._check(other)
        return USeries(self.trunc, [a - b for a, b in zip(self._cyclo, other._cyclo)])

    def __mul__(self, other):
        self._check(other)
        N = self.trunc
        out = [CycloFrac.zero() for _ in range(N + 1)]
        for i, a in enumerate(self._cyclo):
            if a.is_zero():
                continue
            for j in range(0, N + 1 - i):
                b = other._cyclo[j]
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return USeries(N, out)

    def scaled(self, c: CycloFrac):
        return USeries(self.trunc, [a * c for a in self._cyclo])

    def __eq__(self, other):
        return (isinstance(other, USeries) and self.trunc == other.trunc
                and all((a - b).is_zero() for a, b in zip(self._cyclo, other._cyclo)))

    def __repr__(self):
        parts = [f"({self.coefficient(n)}) u^{n}" for n in range(self.trunc + 1)
                 if not self._cyclo[n].is_zero()]
        return " + ".join(parts) if parts else "0"


def series_arith(a: USeries, b: USeries, op: str) -> USeries:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def series_inverse(a: USeries) -> USeries:
    """Multiplicative inverse up to truncation; needs a nonzero constant term."""
    c0 = a.cyclo_coefficient(0)
    if c0.is_zero():
        raise ValueError("series with zero constant term has no inverse")
    inv0 = c0.inverse()
    out = [inv0]
    for n in range(1, a.trunc + 1):
        acc = CycloFrac.zero()
        for k in range(1, n + 1):
            ak = a.cyclo_coefficient(k)
            if not ak.is_zero():
                acc = acc + ak * out[n - k]
        out.append(-(inv0 * acc))
    return USeries(a.trunc, out)


# ---------------------------------------------------------------------------
# Pochhammer products at base y = 1/q^2

@dataclass(frozen=True)
class PochSpec:
    """The infinite product prod_{i>=1} (1 - s u^a q^b y^(i-1)) with
    y = q^y_qpow; sign plus_x means s = +1, minus_x means s = -1."""
    x_upow: int
    x_qpow: int
    sign: str
    y_qpow: int = -2

    def __post_init__(self):
        if self.x_upow < 1:
            raise ValueError("argument must carry a positive power of u")
        if self.sign not in POCH_SIGNS:
            raise ValueError(f"sign must be one of {POCH_SIGNS}")
        if self.y_qpow != -2:
            raise ValueError("only the base y = 1/q^2 is supported")


@lru_cache(maxsize=None)
def _poch_coeff(n: int, b: int, s: int) -> CycloFrac:
    """Series term n of the expansion: (-s)^n q^(bn+2n) / prod_{j<=n}(q^2j - 1)."""
    fac = {0: b * n + 2 * n}
    for d, e in _even_prod_factors(n).items():
        fac[d] = fac.get(d, 0) - e
    return CycloFrac.from_factored(Q((-s) ** n), fac)


def poch_expand(spec: PochSpec, trunc: int = DEFAULT_TRUNC) -> USeries:
    """Euler expansion: prod(1 + x y^(i-1)) = sum_n y^(n(n-1)/2) x^n/(y;y)_n,
    and with alternating signs for prod(1 - x y^(i-1))."""
    s = 1 if spec.sign == "plus_x" else -1
    a, b = spec.x_upow, spec.x_qpow
    cc = [CycloFrac.zero() for _ in range(trunc + 1)]
    n = 0
    while a * n <= trunc:
        cc[a * n] = _poch_coeff(n, b, s)
        n += 1
    return USeries(trunc, cc)


@lru_cache(maxsize=None)
def _y_poch_inv(n: int) -> CycloFrac:
    """1/(y;y)_n at y = 1/q^2, i.e. q^(n(n+1)) / prod_{j<=n} (q^2j - 1)."""
    fac = {d: -e for d, e in _even_prod_factors(n).items()}
    fac[0] = fac.get(0, 0) + n * (n + 1)
    return CycloFrac.from_factored(Q(1), fac)


def _q_monomial(e: int) -> CycloFrac:
    return CycloFrac.from_factored(Q(1), {0: e})


def qbinom_check(A_qpow: int, x_upow: int = 1, x_qpow: int = 0,
                 trunc: int = 8) -> bool:
    """Exact check of sum_n (A;y)_n/(y;y)_n x^n = (Ax;y)_inf/(x;y)_inf with
    A = q^A_qpow, x = u^x_upow q^x_qpow, y = 1/q^2."""
    one = CycloFrac.from_factored(Q(1), {})
    lhs = [CycloFrac.zero() for _ in range(trunc + 1)]
    a_poch = one
    for n in range(0, trunc // x_upow + 1):
        if n > 0:
            # (A;y)_n gains the factor (1 - A y^(n-1))
            a_poch = a_poch * (one - _q_monomial(A_qpow - 2 * (n - 1)))
        term = a_poch * _y_poch_inv(n) * _q_monomial(x_qpow * n)
        if x_upow * n <= trunc:
            lhs[x_upow * n] = term
    lhs_series = USeries(trunc, lhs)
    num = poch_expand(PochSpec(x_upow, A_qpow + x_qpow, "plus_x"), trunc)
    den = poch_expand(PochSpec(x_upow, x_qpow, "plus_x"), trunc)
    rhs = num * series_inverse(den)
    return lhs_series == rhs


def euler_sum_check(x_upow: int = 1, x_qpow: int = 0, sign: str = "minus_x",
                    trunc: int = 8) -> bool:
    """Exact check of sum_n (+-1)^n y^(n(n-1)/2) x^n/(y;y)_n against the
    product form prod(1 -+ x y^(i-1)), each side assembled independently."""
    s = 1 if sign == "plus_x" else -1
    cc = [CycloFrac.zero() for _ in range(trunc + 1)]
    for n in range(0, trunc // x_upow + 1):
        # y^(n(n-1)/2) x^n/(y;y)_n built from first principles
        term = _q_monomial(-n * (n - 1) + x_qpow * n) * _y_poch_inv(n)
        if s > 0:
            term = term * CycloFrac.from_factored(Q((-1) ** n), {})
        if x_upow * n <= trunc:
            cc[x_upow * n] = term
    return USeries(trunc, cc) == poch_expand(PochSpec(x_upow, x_qpow, sign), trunc)


# ---------------------------------------------------------------------------
# right-hand-side blocks shared across the identities

def _inv_linear(terms, trunc):
    """series_inverse of a short polynomial in u given as (coeff, upow) pairs."""
    return series_inverse(USeries.from_monomials(terms, trunc))


@lru_cache(maxsize=None)
def _block(name: str, trunc: int) -> USeries:
    P = lambda a, b, s: poch_expand(PochSpec(a, b, s), trunc)
    IP = lambda a, b, s: series_inverse(poch_expand(PochSpec(a, b, s), trunc))
    if name == "A":        # (-u;y)^2 / ((1-u^2 q^2)(1-u^2)(u^2/q^2;y))
        pm = P(1, 0, "minus_x")
        return pm * pm * _inv_linear([(1, 0), (CycloFrac.from_factored(Q(-1), {0: 2}), 2)], trunc) \
            * _inv_linear([(1, 0), (-1, 2)], trunc) * IP(2, -2, "plus_x")
    if name == "B":        # (-u/q;y)^2 / ((1-u^2)(u^2/q^2;y))
        pm = P(1, -1, "minus_x")
        return pm * pm * _inv_linear([(1, 0), (-1, 2)], trunc) * IP(2, -2, "plus_x")
    if name == "C":        # (-u;y)(-u/q;y) / ((1-u^2 q)(u^2/q;y))
        return P(1, 0, "minus_x") * P(1, -1, "minus_x") \
            * _inv_linear([(1, 0), (CycloFrac.from_factored(Q(-1), {0: 1}), 2)], trunc) \
            * IP(2, -1, "plus_x")
    if name == "D":        # (-u;y)(u/q;y) / ((1+u^2 q)(-u^2/q;y))
        return P(1, 0, "minus_x") * P(1, -1, "plus_x") \
            * _inv_linear([(1, 0), (CycloFrac.from_factored(Q(1), {0: 1}), 2)], trunc) \
            * IP(2, -1, "minus_x")
    if name == "E":        # (u;y)(-u/q;y) / ((1+u^2 q)(-u^2/q;y))
        return P(1, 0, "plus_x") * P(1, -1, "minus_x") \
            * _inv_linear([(1, 0), (CycloFrac.from_factored(Q(1), {0: 1}), 2)], trunc) \
            * IP(2, -1, "minus_x")
    if name == "GA":       # (-u;y) / ((1-u^2 q^2)(1-u^2)(u^2/q^2;y))
        return P(1, 0, "minus_x") \
            * _inv_linear([(1, 0), (CycloFrac.from_factored(Q(-1), {0: 2}), 2)], trunc) \
            * _inv_linear([(1, 0), (-1, 2)], trunc) * IP(2, -2, "plus_x")
    if name == "GB":       # (-u/q;y) / ((1-u^2)(u^2/q^2;y))
        return P(1, -1, "minus_x") * _inv_linear([(1, 0), (-1, 2)], trunc) \
            * IP(2, -2, "plus_x")
    if name == "ODD0":     # (1/(1-u)) (-u/q^2;y)^2 / (u^2/q^2;y)
        pm = P(1, -2, "minus_x")
        return pm * pm * _inv_linear([(1, 0), (-1, 1)], trunc) * IP(2, -2, "plus_x")
    if name == "ODD1":     # (1+u)(-u/q^2;y)^2 / ((1-u^2)(u^2/q^2;y))
        pm = P(1, -2, "minus_x")
        return pm * pm * USeries.from_monomials([(1, 0), (1, 1)], trunc) \
            * _inv_linear([(1, 0), (-1, 2)], trunc) * IP(2, -2, "plus_x")
    if name == "ODD2_1":   # (-u/q;y)(-u/q^2;y) / (u^2/q;y)
        return P(1, -1, "minus_x") * P(1, -2, "minus_x") * IP(2, -1, "plus_x")
    if name == "ODD2_3":   # (u/q;y)(-u/q^2;y) / (-u^2/q;y)
        return P(1, -1, "plus_x") * P(1, -2, "minus_x") * IP(2, -1, "minus_x")
    raise ValueError(f"unknown block {name!r}")


def _half():
    return CycloFrac.from_factored(Q(1, 2), {})


def _quarter():
    return CycloFrac.from_factored(Q(1, 4), {})


def _u_times_half_q(series, trunc):
    """(u q / 2) * series."""
    pref = USeries.from_monomials([(CycloFrac.from_factored(Q(1, 2), {0: 1}), 1)], trunc)
    return pref * series


# ---------------------------------------------------------------------------
# the identity registry

@dataclass(frozen=True)
class TheoremDef:
    theorem_id: str
    signed: bool
    statement: str


THEOREMS = {
    "6.1a": TheoremDef("6.1a", True,
        "sum_n i(SO^s(2n,q)) q^(n^2)/|O^s(2n,q)| u^n = (1/2)[F_A s F_B] for "
        "q odd, with F_A = (-u;y)^2/((1-u^2q^2)(1-u^2)(u^2/q^2;y)) and "
        "F_B = (-u/q;y)^2/((1-u^2)(u^2/q^2;y)), y = 1/q^2"),
    "6.1b": TheoremDef("6.1b", False,
        "sum_n i(SO(2n+1,q)) q^(n^2)/|O(2n+1,q)| u^n = (1/2) (1/(1-u)) "
        "(-u/q^2;y)^2/(u^2/q^2;y) for q odd"),
    "6.2": TheoremDef("6.2", True,
        "sum_n i(O^s(2n,q) \\ SO^s(2n,q)) q^(n^2)/|O^s(2n,q)| u^n = "
        "(uq/2) F_A for q odd (same right side for both signs)"),
    "6.3a": TheoremDef("6.3a", False,
        "sum_n i(Omega^+(2n,q)) q^(n^2)/|O^+(2n,q)| u^n = "
        "(1/4)[F_A + 2 F_C + F_B] for q = 1 mod 4, with "
        "F_C = (-u;y)(-u/q;y)/((1-u^2q)(u^2/q;y))"),
    "6.3b": TheoremDef("6.3b", False,
        "sum_n i(Omega^-(2n,q)) q^(n^2)/|O^-(2n,q)| u^n = (1/4)[F_A - F_B] "
        "for q = 1 mod 4"),
    "6.3c": TheoremDef("6.3c", False,
        "sum_n i(Omega(2n+1,q)) q^(n^2)/|O(2n+1,q)| u^n = "
        "(1/4)[(1+u)(-u/q^2;y)^2/((1-u^2)(u^2/q^2;y)) + "
        "(-u/q;y)(-u/q^2;y)/(u^2/q;y)] for q = 1 mod 4"),
    "6.4a": TheoremDef("6.4a", False,
        "sum_n i(Omega^+(2n,q)) q^(n^2)/|O^+(2n,q)| u^n = "
        "(1/4)[F_A + F_D + F_E + F_B] for q = 3 mod 4, with "
        "F_D = (-u;y)(u/q;y)/((1+u^2q)(-u^2/q;y)) and "
        "F_E = (u;y)(-u/q;y)/((1+u^2q)(-u^2/q;y))"),
    "6.4b": TheoremDef("6.4b", False,
        "sum_n i(Omega^-(2n,q)) q^(n^2)/|O^-(2n,q)| u^n = "
        "(1/4)[F_A + F_D - F_E - F_B] for q = 3 mod 4"),
    "6.4c": TheoremDef("6.4c", False,
        "sum_n i(Omega(2n+1,q)) q^(n^2)/|O(2n+1,q)| u^n = "
        "(1/4)[(1+u)(-u/q^2;y)^2/((1-u^2)(u^2/q^2;y)) + "
        "(u/q;y)(-u/q^2;y)/(-u^2/q;y)] for q = 3 mod 4"),
    "6.6": TheoremDef("6.6", True,
        "sum_n i(Omega^s(2n,q)) q^(n^2)/|O^s(2n,q)| u^n = (1/2)[G_A s G_B] "
        "for q even, with G_A = (-u;y)/((1-u^2q^2)(1-u^2)(u^2/q^2;y)) and "
        "G_B = (-u/q;y)/((1-u^2)(u^2/q^2;y))"),
    "6.7": TheoremDef("6.7", True,
        "sum_n i(O^s(2n,q) \\ Omega^s(2n,q)) q^(n^2)/|O^s(2n,q)| u^n = "
        "(uq/2) G_A for q even (same right side for both signs)"),
}

SIGNS = ("plus", "minus")


def _resolve(theorem_id, sign):
    if theorem_id not in THEOREMS:
        raise ValueError(f"unknown theorem id {theorem_id!r}; "
                         f"known: {', '.join(sorted(THEOREMS))}")
    td = THEOREMS[theorem_id]
    if td.signed:
        if sign not in SIGNS:
            raise ValueError(f"theorem {theorem_id} carries a sign choice; "
                             f"pass sign 'plus' or 'minus'")
    elif sign is not None:
        raise ValueError(f"theorem {theorem_id} has no sign choice")
    return td


def _lhs_group(theorem_id, sign, n):
    """GroupSpec and branch for coefficient n, or None when the coefficient
    is zero by the 1/|O^-(0,q)| = 0 and empty-coset conventions."""
    s = "+" if sign == "plus" else "-"
    if theorem_id == "6.1a":
        if n == 0 and s == "-":
            return None
        return GroupSpec(f"SO{s}", 2 * n, "odd"), None
    if theorem_id == "6.1b":
        return GroupSpec("SO", 2 * n + 1, "odd"), None
    if theorem_id == "6.2":
        if n == 0:
            return None
        return GroupSpec(f"O{s}\\SO{s}", 2 * n, "odd"), None
    if theorem_id in ("6.3a", "6.3b", "6.4a", "6.4b"):
        branch = "1mod4" if theorem_id.startswith("6.3") else "3mod4"
        fam_sign = "+" if theorem_id.endswith("a") else "-"
        if n == 0 and fam_sign == "-":
            return None
        return GroupSpec(f"Omega{fam_sign}", 2 * n, "odd"), branch
    if theorem_id in ("6.3c", "6.4c"):
        branch = "1mod4" if theorem_id == "6.3c" else "3mod4"
        return GroupSpec("Omega", 2 * n + 1, "odd"), branch
    if theorem_id == "6.6":
        if n == 0 and s == "-":
            return None
        return GroupSpec(f"Omega{s}", 2 * n, "even"), None
    if theorem_id == "6.7":
        if n == 0:
            return None
        return GroupSpec(f"O{s}\\Omega{s}", 2 * n, "even"), None
    raise AssertionError(theorem_id)


def gf_lhs(theorem_id: str, sign: str | None = None,
           trunc: int = DEFAULT_TRUNC) -> USeries:
    """Left side: coefficient n is the involution count of the n-th group in
    the family, times q^(n^2), over the full orthogonal group order."""
    _resolve(theorem_id, sign)
    cc = []
    for n in range(trunc + 1):
        got = _lhs_group(theorem_id, sign, n)
        if got is None:
            cc.append(CycloFrac.zero())
            continue
        spec, branch = got
        count_cf, _ = _count_cyclofrac(spec, branch)
        oscal, ofac = order_factored(_numerator_spec(spec))
        fac = {0: n * n}
        for k, e in ofac.items():
            fac[k] = fac.get(k, 0) - e
        cc.append(count_cf * CycloFrac.from_factored(1 / oscal, fac))
    return USeries(trunc, cc)


def gf_rhs(theorem_id: str, sign: str | None = None,
           trunc: int = DEFAULT_TRUNC) -> USeries:
    """Right side: the identity's Pochhammer-product expression, expanded."""
    _resolve(theorem_id, sign)
    B = lambda name: _block(name, trunc)
    if theorem_id == "6.1a":
        fa, fb = B("A"), B("B")
        return (fa + fb if sign == "plus" else fa - fb).scaled(_half())
    if theorem_id == "6.1b":
        return B("ODD0").scaled(_half())
    if theorem_id == "6.2":
        return _u_times_half_q(B("A"), trunc)
    if theorem_id == "6.3a":
        return (B("A") + B("C") + B("C") + B("B")).scaled(_quarter())
    if theorem_id == "6.3b":
        return (B("A") - B("B")).scaled(_quarter())
    if theorem_id == "6.3c":
        return (B("ODD1") + B("ODD2_1")).scaled(_quarter())
    if theorem_id == "6.4a":
        return (B("A") + B("D") + B("E") + B("B")).scaled(_quarter())
    if theorem_id == "6.4b":
        return (B("A") + B("D") - B("E") - B("B")).scaled(_quarter())
    if theorem_id == "6.4c":
        return (B("ODD1") + B("ODD2_3")).scaled(_quarter())
    if theorem_id == "6.6":
        ga, gb = B("GA"), B("GB")
        return (ga + gb if sign == "plus" else ga - gb).scaled(_half())
    if theorem_id == "6.7":
        return _u_times_half_q(B("GA"), trunc)
    raise AssertionError(theorem_id)


@dataclass(frozen=True)
class IdentityRow:
    n: int
    lhs: str
    rhs: str
    equal: bool


@dataclass(frozen=True)
class IdentityReport:
    theorem_id: str
    sign: str | None
    trunc: int
    rows: tuple
    note: str = field(default=EULER_NOTE)

    @property
    def all_equal(self):
        return all(r.equal for r in self.rows)

    def to_json_dict(self):
        return {
            "theorem": self.theorem_id,
            "sign": self.sign,
            "trunc": self.trunc,
            "rows": [{"n": r.n, "lhs": r.lhs, "rhs": r.rhs, "equal": r.equal}
                     for r in self.rows],
            "all_equal": self.all_equal,
            "note": self.note,
        }


def verify_identity(theorem_id: str, sign: str | None = None,
                    trunc: int = DEFAULT_TRUNC) -> IdentityReport:
    """Compare both sides coefficient by coefficient through u^trunc."""
    lhs = gf_lhs(theorem_id, sign, trunc)
    rhs = gf_rhs(theorem_id, sign, trunc)
    rows = []
    for n in range(trunc + 1):
        lc, rc = lhs.cyclo_coefficient(n), rhs.cyclo_coefficient(n)
        rows.append(IdentityRow(n, str(lc.to_ratfunc()), str(rc.to_ratfunc()),
                                (lc - rc).is_zero()))
    return IdentityReport(theorem_id, sign, trunc, tuple(rows))


def all_identity_cases():
    """Every (theorem_id, sign) pair in a deterministic order."""
    out = []
    for tid in sorted(THEOREMS):
        td = THEOREMS[tid]
        if td.signed:
            out.extend([(tid, "plus"), (tid, "minus")])
        else:
            out.append((tid, None))
    return out
