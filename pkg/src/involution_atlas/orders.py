"""Orders of the finite orthogonal and symplectic groups, exact in q.

Families are named by tokens: "O+", "O-" (even dimension), "O" (odd
dimension), "SO+", "SO-", "SO", "Omega+", "Omega-", "Omega", "Sp", and the
coset families "O+\\SO+", "O-\\SO-" (odd characteristic) and "O+\\Omega+",
"O-\\Omega-" (even characteristic), whose "order" is the coset cardinality.

Degenerate conventions: |O+(0,q)| = 1, |O(1,q)| = 2 for q odd and 1 for q
even, |Sp(0,q)| = 1; O-(0,q) does not exist and is rejected.  For q even the
odd-dimensional group has |O(2n+1,q)| = |Sp(2n,q)|, and SO is not split off
as a separate family.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction as Q

from .exact import CycloFrac, PolyQ


class WittType(enum.Enum):
    """Similarity type of a nondegenerate quadratic space (q odd): the two
    even-dimensional types and the two odd-dimensional discriminant types."""
    TYPE_0 = "0"   # even dim, discriminant of the fully hyperbolic form
    TYPE_W = "w"   # even dim, the other class
    TYPE_1 = "1"   # odd dim, square discriminant class (x^2 summand)
    TYPE_D = "d"   # odd dim, non-square class


GROUP_FAMILIES = ("O+", "O-", "O", "SO+", "SO-", "SO", "Omega+", "Omega-",
                  "Omega", "Sp")
COSET_FAMILIES = ("O+\\SO+", "O-\\SO-", "O+\\Omega+", "O-\\Omega-")
FAMILIES = GROUP_FAMILIES + COSET_FAMILIES

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13)


def is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    for p in range(2, q + 1):
        if p * p > q:
            return q >= 2  # q itself prime
        if q % p == 0:
            while q % p == 0:
                q //= p
            return q == 1
    return True


def char_parity_of(q: int) -> str:
    return "even" if q % 2 == 0 else "odd"


@dataclass(frozen=True)
class GroupSpec:
    """A group (or O-coset) family at a fixed dimension and characteristic
    parity.  The parity matters: order and count formulas differ between odd
    and even characteristic."""
    family: str
    dim: int
    char_parity: str = "odd"

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.char_parity not in ("odd", "even"):
            raise ValueError(f"char_parity must be 'odd' or 'even', got {self.char_parity!r}")
        if self.dim < 0:
            raise ValueError("dimension must be nonnegative")
        fam, dim, par = self.family, self.dim, self.char_parity
        even_dim = dim % 2 == 0
        if fam in ("O+", "O-", "SO+", "SO-", "Omega+", "Omega-", "Sp") and not even_dim:
            raise ValueError(f"{fam} requires even dimension, got {dim}")
        if fam in ("O", "SO", "Omega") and even_dim:
            raise ValueError(f"{fam} is the odd-dimension family, got dim {dim}")
        if fam in ("O-", "SO-", "Omega-") and dim == 0:
            raise ValueError(f"{fam}(0, q) does not exist")
        if fam.startswith("SO") and par == "even":
            raise ValueError("SO families are only split off for odd characteristic")
        if fam == "Omega" and par == "even":
            raise ValueError("odd-dimension Omega is defined here for odd characteristic only")
        if fam in COSET_FAMILIES:
            if dim == 0 or not even_dim:
                raise ValueError(f"coset family {fam} requires positive even dimension")
            want = "odd" if "SO" in fam else "even"
            if par != want:
                raise ValueError(f"{fam} is a {want}-characteristic family")

    @property
    def is_coset(self) -> bool:
        return self.family in COSET_FAMILIES

    @property
    def sign(self):
        """'+'/'-' for signed families, None for odd-dimension and Sp."""
        base = self.family.split("\\")[0]
        if base.endswith("+"):
            return "+"
        if base.endswith("-"):
            return "-"
        return None

    def validate_q(self, q: int):
        if not is_prime_power(q):
            raise ValueError(f"q = {q} is not a prime power")
        if char_parity_of(q) != self.char_parity:
            raise ValueError(f"q = {q} has {char_parity_of(q)} characteristic, "
                             f"spec says {self.char_parity}")


# ---------------------------------------------------------------------------
# factored orders

def _plus_one_factors(n: int) -> dict:
    """q^n + 1 as cyclotomic exponents: divisors of 2n not dividing n."""
    return {d: 1 for d in range(1, 2 * n + 1) if (2 * n) % d == 0 and n % d != 0}


def _minus_one_factors(n: int) -> dict:
    return {d: 1 for d in range(1, n + 1) if n % d == 0}


def _even_prod_factors(m: int) -> dict:
    """prod_{i=1}^{m} (q^{2i} - 1), as cyclotomic exponents."""
    out = {}
    for d in range(1, 2 * m + 1):
        step = d if d % 2 else d // 2  # d | 2i  iff  step | i
        e = m // step
        if e:
            out[d] = e
    return out


def _merge(*dicts) -> dict:
    out = {}
    for dd in dicts:
        for k, e in dd.items():
            out[k] = out.get(k, 0) + e
            if out[k] == 0:
                del out[k]
    return out


def order_factored(spec: GroupSpec) -> tuple:
    """(scalar, factors) with order = scalar * q^e0 * prod Phi_d^{e_d}."""
    fam, dim, par = spec.family, spec.dim, spec.char_parity
    if fam == "O+" or fam == "O-":
        n = dim // 2
        if n == 0:
            return Q(1), {}
        sign_part = _plus_one_factors(n) if fam == "O-" else _minus_one_factors(n)
        return Q(2), _merge({0: n * (n - 1)}, sign_part, _even_prod_factors(n - 1))
    if fam == "O":
        n = (dim - 1) // 2
        scal = Q(2) if par == "odd" else Q(1)
        return scal, _merge({0: n * n}, _even_prod_factors(n))
    if fam == "Sp":
        n = dim // 2
        return Q(1), _merge({0: n * n}, _even_prod_factors(n))
    if fam in ("SO+", "SO-", "SO"):
        if dim == 0:
            return Q(1), {}
        scal, f = order_factored(GroupSpec("O" + fam[2:], dim, par))
        return scal / 2, f
    if fam in ("Omega+", "Omega-", "Omega"):
        if dim == 0:
            return Q(1), {}
        scal, f = order_factored(GroupSpec("O" + fam[5:], dim, par))
        return scal / (4 if par == "odd" else 2), f
    if fam in COSET_FAMILIES:
        base = "O" + fam[1]
        scal, f = order_factored(GroupSpec(base, dim, par))
        return scal / 2, f
    raise AssertionError(fam)


def order_poly(spec: GroupSpec) -> PolyQ:
    """The order as a polynomial in q (valid for the requested parity)."""
    scal, factors = order_factored(spec)
    return CycloFrac.from_factored(scal, factors).to_poly()


def order_int(spec: GroupSpec, q: int) -> int:
    """The order at a concrete prime power q of matching parity."""
    spec.validate_q(q)
    scal, factors = order_factored(spec)
    val = scal
    for k, e in factors.items():
        base = q if k == 0 else _eval_cyclotomic(k, q)
        val *= Q(base) ** e
    assert val.denominator == 1
    return int(val)


def _eval_cyclotomic(d: int, q: int) -> int:
    from .exact import cyclotomic
    acc = 0
    for c in reversed(cyclotomic(d)):
        acc = acc * q + c
    return acc
