"""Exact arithmetic in the variable q: polynomials, rational functions,
Laurent windows in 1/q, and a factored-denominator fast path.

All scalars are `fractions.Fraction`.  PolyQ is a dense polynomial with
rational coefficients; RatFuncQ is a reduced quotient of two PolyQ with monic
denominator; LaurentQ is a truncated expansion in powers of 1/q.

CycloFrac is an internal representation used by the heavier symbolic sums:
a numerator polynomial over a denominator kept as a multiset of irreducible
factors (powers of q and cyclotomic polynomials Phi_d(q)).  Every denominator
produced by the group-order and q-series formulas is such a product, so
reduction is exact division by known irreducibles and never needs a
general polynomial gcd.
"""

from __future__ import annotations

from fractions import Fraction
from dataclasses import dataclass
import re

Q = Fraction  # scalar constructor shorthand


# ---------------------------------------------------------------------------
# integer coefficient lists (ascending), private helpers

def _itrim(a):
    n = len(a)
    while n and a[n - 1] == 0:
        n -= 1
    del a[n:]
    return a


def _iadd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return _itrim(out)


def _ineg(a):
    return [-c for c in a]


def _imul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _idivexact(a, b):
    """Quotient of a by b if the division is exact, else None."""
    if not a:
        return []
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    if len(a) < len(b):
        return None
    rem = list(a)
    out = [0] * (len(a) - len(b) + 1)
    lead = b[-1]
    for k in range(len(out) - 1, -1, -1):
        c = rem[k + len(b) - 1]
        if c % lead:
            return None
        f = c // lead
        out[k] = f
        if f:
            for j, bj in enumerate(b):
                rem[k + j] -= f * bj
    return out if not any(rem) else None


# ---------------------------------------------------------------------------
# cyclotomic polynomials, as integer lists

_CYCLO = {1: [-1, 1]}


def cyclotomic(d):
    """Coefficients (ascending ints) of the d-th cyclotomic polynomial."""
    if d not in _CYCLO:
        num = [-1] + [0] * (d - 1) + [1]  # q^d - 1
        for e in range(1, d):
            if d % e == 0:
                num = _idivexact(num, cyclotomic(e))
                assert num is not None
        _CYCLO[d] = num
    return _CYCLO[d]


class PolyQ:
    """Dense polynomial in q over Fraction.  Immutable."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [Q(c) for c in coeffs]
        n = len(cs)
        while n and cs[n - 1] == 0:
            n -= 1
        object.__setattr__(self, "coeffs", tuple(cs[:n]))

    def __setattr__(self, *a):
        raise AttributeError("PolyQ is immutable")

    @staticmethod
    def const(c):
        return PolyQ([c])

    @staticmethod
    def monomial(c, e):
        assert e >= 0
        return PolyQ([0] * e + [c])

    @property
    def degree(self):
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, PolyQ) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return PolyQ(out)

    def __neg__(self):
        return PolyQ([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return PolyQ([c * other for c in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return PolyQ()
        out = [Q(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return PolyQ(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        assert n >= 0
        out, base = PolyQ([1]), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __divmod__(self, other):
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        rem = list(self.coeffs)
        db, lead = other.degree, other.coeffs[-1]
        if len(rem) <= db:
            return PolyQ(), self
        quo = [Q(0)] * (len(rem) - db)
        for k in range(len(quo) - 1, -1, -1):
            f = rem[k + db] / lead
            quo[k] = f
            if f:
                for j, bj in enumerate(other.coeffs):
                    rem[k + j] -= f * bj
        return PolyQ(quo), PolyQ(rem[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        """Evaluate at a Fraction/int by Horner."""
        acc = Q(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def monic(self):
        if self.is_zero():
            return self
        return self * (1 / self.coeffs[-1])

    def int_coeffs(self):
        """(content, primitive integer coefficient list); zero -> (0, [])."""
        if self.is_zero():
            return Q(0), []
        from math import gcd, lcm
        den = 1
        for c in self.coeffs:
            den = lcm(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for c in ints:
            g = gcd(g, c)
        if ints[-1] < 0:
            g = -g
        return Q(g, den), [c // g for c in ints]

    @staticmethod
    def from_int_list(ints, scale=1):
        return PolyQ([Q(c) * scale for c in ints])

    def derivative(self):
        return PolyQ([i * c for i, c in enumerate(self.coeffs)][1:])

    def __repr__(self):
        return f"PolyQ({render_poly(self)!r})"

    def __str__(self):
        return render_poly(self)


def poly_gcd(a: PolyQ, b: PolyQ) -> PolyQ:
    """Monic gcd by the Euclidean algorithm over Q.

    Remainders are rescaled monic at each step so coefficient growth stays
    bounded by the input size.
    """
    ra, rb = a, b
    while not rb.is_zero():
        ra, rb = rb, (ra % rb).monic()
    return ra.monic()


class RatFuncQ:
    """Reduced rational function num/den with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _reduced=False):
        if not isinstance(num, PolyQ):
            num = PolyQ.const(num) if isinstance(num, (int, Fraction)) else PolyQ(num)
        if den is None:
            den = PolyQ([1])
        elif not isinstance(den, PolyQ):
            den = PolyQ.const(den) if isinstance(den, (int, Fraction)) else PolyQ(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            num, den = PolyQ(), PolyQ([1])
        elif not _reduced:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num = num // g
                den = den // g
            lead = den.coeffs[-1]
            if lead != 1:
                num = num * (1 / lead)
                den = den * (1 / lead)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *a):
        raise AttributeError("RatFuncQ is immutable")

    @staticmethod
    def qpow(e):
        """q**e for any integer e."""
        if e >= 0:
            return RatFuncQ(PolyQ.monomial(1, e), None, _reduced=True)
        return RatFuncQ(PolyQ([1]), PolyQ.monomial(1, -e), _reduced=True)

    def is_zero(self):
        return self.num.is_zero()

    def is_poly(self):
        return self.den.degree == 0

    def as_poly(self):
        if not self.is_poly():
            raise ValueError("not a polynomial: %s" % self)
        return self.num

    def __eq__(self, other):
        return (isinstance(other, RatFuncQ)
                and self.num == other.num and self.den == other.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        other = _coerce(other)
        return RatFuncQ(self.num * other.den + other.num * self.den,
                        self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFuncQ(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        return RatFuncQ(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFuncQ(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def __pow__(self, n):
        if n < 0:
            return RatFuncQ(self.den ** (-n), self.num ** (-n))
        return RatFuncQ(self.num ** n, self.den ** n, _reduced=True)

    def __call__(self, x):
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError(f"pole at q = {x}")
        return self.num(x) / d

    def __str__(self):
        if self.is_poly():
            return render_poly(self.num)
        ns = render_poly(self.num)
        if len(self.num.coeffs) - self.num.coeffs.count(0) > 1 or self.num.coeffs and self.num.coeffs[-1] < 0:
            ns = "(%s)" % ns
        return "%s / (%s)" % (ns, render_poly(self.den))

    def __repr__(self):
        return f"RatFuncQ({str(self)!r})"


def _coerce(x):
    if isinstance(x, RatFuncQ):
        return x
    if isinstance(x, PolyQ):
        return RatFuncQ(x, None, _reduced=True)
    if isinstance(x, (int, Fraction)):
        return RatFuncQ(PolyQ.const(x), None, _reduced=True)
    raise TypeError(type(x))


RAT_ZERO = RatFuncQ(PolyQ())
RAT_ONE = RatFuncQ(PolyQ([1]))


# ---------------------------------------------------------------------------
# Laurent windows in 1/q

@dataclass(frozen=True)
class LaurentQ:
    """Truncated expansion sum c_e (1/q)^e for e in [min_exp, max_exp].

    Exponents count powers of 1/q, so negative exponents are positive powers
    of q (a pole at infinity).
    """
    coeffs: dict
    min_exp: int
    max_exp: int

    def coefficient(self, e):
        if not (self.min_exp <= e <= self.max_exp):
            raise KeyError(f"exponent {e} outside window [{self.min_exp}, {self.max_exp}]")
        return self.coeffs.get(e, Q(0))

    def resum(self, q0, upto=None):
        """Partial sum of the window evaluated at q = q0."""
        hi = self.max_exp if upto is None else min(upto, self.max_exp)
        return sum((c * Q(q0) ** -e for e, c in self.coeffs.items() if e <= hi), Q(0))


def laurent_expand(f: RatFuncQ, max_neg_power: int) -> LaurentQ:
    """Expand f(q) in powers of 1/q through (1/q)^max_neg_power.

    The leading exponent is deg(den) - deg(num); it may be negative when f
    has a pole at infinity.  Raises ValueError if the requested window ends
    before the leading term.
    """
    if f.is_zero():
        return LaurentQ({}, 0, max_neg_power)
    shift = f.den.degree - f.num.degree
    if shift > max_neg_power:
        raise ValueError("window [%d] too small to contain the leading term (1/q)^%d"
                         % (max_neg_power, shift))
    # substitute q = 1/t and divide power series in t
    nt = list(reversed(f.num.coeffs))
    dt = list(reversed(f.den.coeffs))
    order = max_neg_power - shift
    out = {}
    cs = []
    for k in range(order + 1):
        acc = nt[k] if k < len(nt) else Q(0)
        for j in range(max(0, k - len(dt) + 1), k):
            acc -= cs[j] * dt[k - j]
        ck = acc / dt[0]
        cs.append(ck)
        if ck:
            out[shift + k] = ck
    return LaurentQ(out, shift, max_neg_power)


# ---------------------------------------------------------------------------
# canonical text form

def _render_coeff(c: Fraction, e: int) -> str:
    if e == 0:
        return str(c)
    if c == 1:
        s = ""
    elif c.denominator == 1:
        s = str(c)
    else:
        s = "(%s)" % c
    return s + ("q" if e == 1 else "q^%d" % e)


def render_poly(p: PolyQ) -> str:
    """Canonical text: descending powers, explicit signs, e.g. 'q^9 - q^6'."""
    if p.is_zero():
        return "0"
    parts = []
    for e in range(p.degree, -1, -1):
        c = p.coeffs[e]
        if c == 0:
            continue
        body = _render_coeff(abs(c), e)
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)


_TERM_RE = re.compile(
    r"^(?:\(?(?P<coef>\d+(?:/\d+)?)\)?)?\s*(?P<var>q(?:\^(?P<exp>\d+))?)?$")


def parse_poly(text: str) -> PolyQ:
    """Parse the canonical polynomial text form (also accepts no spaces)."""
    s = text.strip()
    if s == "0":
        return PolyQ()
    # split into signed terms
    s = s.replace("-", "+-")
    if s.startswith("+"):
        s = s[1:]
    terms = {}
    for chunk in s.split("+"):
        chunk = chunk.strip()
        if not chunk:
            raise ValueError(f"empty term in {text!r}")
        sign = 1
        if chunk.startswith("-"):
            sign = -1
            chunk = chunk[1:].strip()
        m = _TERM_RE.match(chunk)
        if not m or (m.group("coef") is None and m.group("var") is None):
            raise ValueError(f"cannot parse term {chunk!r} in {text!r}")
        coef = Q(m.group("coef")) if m.group("coef") else Q(1)
        if m.group("var"):
            exp = int(m.group("exp")) if m.group("exp") else 1
        else:
            exp = 0
        terms[exp] = terms.get(exp, Q(0)) + sign * coef
    out = [Q(0)] * (max(terms) + 1)
    for e, c in terms.items():
        out[e] = c
    return PolyQ(out)


# ---------------------------------------------------------------------------
# factored fractions: numerator polynomial over {q^a * prod Phi_d^e}

def _factor_poly_mul(ints, key, power):
    """Multiply an integer coefficient list by factor_key^power (power >= 0)."""
    for _ in range(power):
        if key == 0:
            ints = [0] + ints
        else:
            ints = _imul(ints, cyclotomic(key))
    return ints


class CycloFrac:
    """scalar * num(q) / (q^e0 * prod_d Phi_d(q)^e_d), num a primitive int poly.

    Closed under + - * and under division by factored monomials; reduction
    cancels the (irreducible) denominator factors out of num by exact
    division, so equality and conversion to RatFuncQ/PolyQ never require a
    polynomial gcd.
    """

    __slots__ = ("scal", "num", "den")

    def __init__(self, scal=Q(0), num=None, den=None, normalize=True):
        self.scal = Q(scal)
        self.num = [1] if num is None else num
        self.den = {} if den is None else den
        if normalize:
            self._normalize()

    @staticmethod
    def zero():
        return CycloFrac(Q(0), [], {}, normalize=False)

    @staticmethod
    def one():
        return CycloFrac(Q(1), [1], {}, normalize=False)

    @staticmethod
    def from_factored(scal, factors):
        """factors: {key: exponent}, exponent any sign; key 0 is q, d>=1 is Phi_d."""
        num = [1]
        den = {}
        for k, e in factors.items():
            if e > 0:
                num = _factor_poly_mul(num, k, e)
            elif e < 0:
                den[k] = den.get(k, 0) - e
        return CycloFrac(scal, num, den)

    @staticmethod
    def from_poly(p: PolyQ):
        c, ints = p.int_coeffs()
        return CycloFrac(c, ints, {}, normalize=False)

    def _normalize(self):
        if self.scal == 0 or not self.num:
            self.scal, self.num, self.den = Q(0), [], {}
            return
        num = self.num
        den = dict(self.den)
        for k in list(den):
            f = [0, 1] if k == 0 else cyclotomic(k)
            while den[k] > 0:
                quo = _idivexact(num, f)
                if quo is None:
                    break
                num = quo
                den[k] -= 1
            if den[k] == 0:
                del den[k]
        from math import gcd as igcd
        g = 0
        for c in num:
            g = igcd(g, c)
        if num[-1] < 0:
            g = -g
        if g not in (0, 1):
            num = [c // g for c in num]
            self.scal *= g
        self.num, self.den = num, den

    def is_zero(self):
        return self.scal == 0

    def __eq__(self, other):
        return (isinstance(other, CycloFrac) and self.scal == other.scal
                and self.num == other.num and self.den == other.den)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0 or self.is_zero():
                return CycloFrac.zero()
            return CycloFrac(self.scal * other, self.num, self.den, normalize=False)
        if self.is_zero() or other.is_zero():
            return CycloFrac.zero()
        den = dict(self.den)
        for k, e in other.den.items():
            den[k] = den.get(k, 0) + e
        return CycloFrac(self.scal * other.scal, _imul(self.num, other.num), den)

    __rmul__ = __mul__

    def __neg__(self):
        return CycloFrac(-self.scal, self.num, self.den, normalize=False)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloFrac(Q(other), [1], {}, normalize=False)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        den = {}
        for k in set(self.den) | set(other.den):
            den[k] = max(self.den.get(k, 0), other.den.get(k, 0))
        a = self.num
        b = other.num
        for k, e in den.items():
            a = _factor_poly_mul(a, k, e - self.den.get(k, 0))
            b = _factor_poly_mul(b, k, e - other.den.get(k, 0))
        # merge scalars over a common rational
        sa, sb = self.scal, other.scal
        from math import gcd as igcd, lcm
        dl = lcm(sa.denominator, sb.denominator)
        ia = sa.numerator * (dl // sa.denominator)
        ib = sb.numerator * (dl // sb.denominator)
        g = igcd(ia, ib)
        merged = _iadd([c * (ia // g) for c in a], [c * (ib // g) for c in b])
        return CycloFrac(Q(g, dl), merged, den)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloFrac(Q(other), [1], {}, normalize=False)
        return self + (-other)

    def inverse(self):
        """Reciprocal; defined when the numerator factors over the q/Phi_d
        basis, which covers every series constant this library inverts."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        num = self.num
        factors = dict(self.den)  # old denominator becomes numerator material
        while num and num[0] == 0:  # strip powers of q
            factors[0] = factors.get(0, 0) - 1
            num = num[1:]
        d = 1
        while len(num) > 1:
            deg = len(num) - 1
            if d > max(6, 2 * deg * deg):  # phi(d) > deg for all remaining d
                raise ValueError("numerator does not factor over the q/Phi_d basis")
            quo = _idivexact(num, cyclotomic(d))
            if quo is not None:
                factors[d] = factors.get(d, 0) - 1
                num = quo
            else:
                d += 1
        return CycloFrac.from_factored(Q(1) / (self.scal * num[0]), factors)

    def to_ratfunc(self) -> RatFuncQ:
        if self.is_zero():
            return RAT_ZERO
        den_ints = [1]
        for k, e in sorted(self.den.items()):
            den_ints = _factor_poly_mul(den_ints, k, e)
        num = PolyQ.from_int_list(self.num, self.scal)
        den = PolyQ.from_int_list(den_ints)
        return RatFuncQ(num, den, _reduced=True)

    def to_poly(self) -> PolyQ:
        if self.is_zero():
            return PolyQ()
        if self.den:
            raise ValueError("not a polynomial: residual denominator %s" % (self.den,))
        return PolyQ.from_int_list(self.num, self.scal)

    def __str__(self):
        return str(self.to_ratfunc())

    def __repr__(self):
        return f"CycloFrac({str(self)!r})"
