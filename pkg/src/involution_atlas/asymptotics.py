"""Limit constants for involution counts normalized by q^(n^2) (even
dimension) or q^(n^2+n) (odd dimension), and empirical convergence tables.

Each limit is a rational combination of the infinite products
P(+-) = prod_{i>=1}(1 +- 1/q^(2i-1)) and E(+) = prod_{i>=1}(1 + 1/q^(2i)),
evaluated as exact rational partial products with a geometric tail bound; no
floating point enters until display.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q

from .counts import count_involutions
from .orders import GroupSpec, is_prime_power

LIMIT_KINDS = (
    "SO_dim0mod4", "SO_dim2mod4", "SO_odd_dim",
    "Coset_SO_dim0mod4", "Coset_SO_dim2mod4",
    "Omega_qodd_dim0mod4", "Omega_qodd_dim2mod4", "Omega_odd_dim",
    "Omega_qeven_dim0mod4", "Omega_qeven_dim2mod4",
    "Coset_Omega_dim0mod4", "Coset_Omega_dim2mod4",
    "Ratio_Omega_over_SO",
)

_EVEN_CHAR_KINDS = ("Omega_qeven_dim0mod4", "Omega_qeven_dim2mod4",
                    "Coset_Omega_dim0mod4", "Coset_Omega_dim2mod4")

DEFAULT_EPS = Q(1, 10 ** 12)


@dataclass(frozen=True)
class LimitSpec:
    kind: str
    q: int
    sign: str = "plus"

    def __post_init__(self):
        if self.kind not in LIMIT_KINDS:
            raise ValueError(f"unknown limit kind {self.kind!r}")
        if not is_prime_power(self.q):
            raise ValueError(f"q must be a prime power, got {self.q}")
        want_even = self.kind in _EVEN_CHAR_KINDS
        if want_even != (self.q % 2 == 0):
            par = "even" if want_even else "odd"
            raise ValueError(f"kind {self.kind} needs q of {par} characteristic")
        if self.sign not in ("plus", "minus"):
            raise ValueError("sign must be 'plus' or 'minus'")


@dataclass(frozen=True)
class ProductValue:
    """Partial product with a rigorous bound on the truncated tail."""
    value: Q
    error_bound: Q
    factors: int

    def __float__(self):
        return float(self.value)


def infinite_product(sign: str, a: int, b: int, q: int,
                     eps=DEFAULT_EPS) -> ProductValue:
    """prod_{i>=1}(1 + s/q^(a*i+b)) with s = +1 for 'one_plus', -1 for
    'one_minus', truncated once the geometric tail bound drops below eps."""
    if sign not in ("one_plus", "one_minus"):
        raise ValueError("sign must be 'one_plus' or 'one_minus'")
    if a < 1:
        raise ValueError("exponent pattern must increase with i")
    if a + b < 1:
        raise ValueError(f"first factor exponent a+b = {a + b} must be >= 1")
    if q < 2:
        raise ValueError("q must be at least 2")
    eps = Q(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    s = 1 if sign == "one_plus" else -1
    value = Q(1)
    i = 0
    while True:
        i += 1
        value *= 1 + Q(s, q ** (a * i + b))
        # sum of remaining term magnitudes; factors at most 1/2 each, so the
        # multiplicative tail is within a factor exp(2S) <= 1 + 4S of 1
        tail_sum = Q(1, q ** (a * (i + 1) + b)) / (1 - Q(1, q ** a))
        bound = abs(value) * 4 * tail_sum
        if bound < eps:
            return ProductValue(value, bound, i)


def _p_plus(q, eps):
    return infinite_product("one_plus", 2, -1, q, eps)


def _p_minus(q, eps):
    return infinite_product("one_minus", 2, -1, q, eps)


def _e_plus(q, eps):
    return infinite_product("one_plus", 2, 0, q, eps)


# kind -> (coefficient, combination) where the combination is built from the
# squared or first-power products; see limit_value
_COMBOS = {
    "SO_dim0mod4":          (Q(1, 2), "pp2+pm2"),
    "SO_dim2mod4":          (Q(1, 2), "pp2-pm2"),
    "SO_odd_dim":           (Q(1), "ep2"),
    "Coset_SO_dim0mod4":    (Q(1, 2), "pp2-pm2"),
    "Coset_SO_dim2mod4":    (Q(1, 2), "pp2+pm2"),
    "Omega_qodd_dim0mod4":  (Q(1, 4), "pp2+pm2"),
    "Omega_qodd_dim2mod4":  (Q(1, 4), "pp2-pm2"),
    "Omega_odd_dim":        (Q(1, 2), "ep2"),
    "Omega_qeven_dim0mod4": (Q(1, 2), "pp+pm"),
    "Omega_qeven_dim2mod4": (Q(1, 2), "pp-pm"),
    "Coset_Omega_dim0mod4": (Q(1, 2), "pp-pm"),
    "Coset_Omega_dim2mod4": (Q(1, 2), "pp+pm"),
}


def limit_value(spec: LimitSpec, eps=DEFAULT_EPS) -> ProductValue:
    """The closed-form constant the normalized involution count converges to."""
    eps = Q(eps)
    if spec.kind == "Ratio_Omega_over_SO":
        return ProductValue(Q(1, 2), Q(0), 0)
    coeff, combo = _COMBOS[spec.kind]
    sub = eps / 16         # generous per-factor budget, see bound note below
    if combo == "ep2":
        e = _e_plus(spec.q, sub)
        value = coeff * e.value ** 2
        bound = coeff * (2 * e.value * e.error_bound + e.error_bound ** 2)
        return ProductValue(value, bound, e.factors)
    pp, pm = _p_plus(spec.q, sub), _p_minus(spec.q, sub)
    if combo.startswith("pp2"):
        vp, vm = pp.value ** 2, pm.value ** 2
        bp = 2 * pp.value * pp.error_bound + pp.error_bound ** 2
        bm = 2 * pm.value * pm.error_bound + pm.error_bound ** 2
    else:
        vp, vm = pp.value, pm.value
        bp, bm = pp.error_bound, pm.error_bound
    value = coeff * (vp + vm if "+" in combo else vp - vm)
    return ProductValue(value, coeff * (bp + bm), max(pp.factors, pm.factors))


# ---------------------------------------------------------------------------
# convergence tables

@dataclass(frozen=True)
class ConvergenceRow:
    dim: int
    ratio: Q
    abs_error: Q

    @property
    def ratio_float(self):
        return float(self.ratio)

    @property
    def abs_error_float(self):
        return float(self.abs_error)


def _dims_for(kind: str, max_dim: int):
    if kind in ("SO_odd_dim", "Omega_odd_dim"):
        return range(3, max_dim + 1, 2)
    if kind == "Ratio_Omega_over_SO":
        return range(4, max_dim + 1, 2)
    start = 4 if "0mod4" in kind else 2
    return range(start, max_dim + 1, 4)


def _family_for(kind: str, sign: str):
    s = "+" if sign == "plus" else "-"
    if kind.startswith("SO_dim"):
        return f"SO{s}"
    if kind == "SO_odd_dim":
        return "SO"
    if kind.startswith("Coset_SO"):
        return f"O{s}\\SO{s}"
    if kind.startswith("Omega_qodd"):
        return f"Omega{s}"
    if kind == "Omega_odd_dim":
        return "Omega"
    if kind.startswith("Omega_qeven"):
        return f"Omega{s}"
    if kind.startswith("Coset_Omega"):
        return f"O{s}\\Omega{s}"
    raise AssertionError(kind)


def _normalized_count(family, dim, q) -> Q:
    parity = "even" if q % 2 == 0 else "odd"
    count = count_involutions(GroupSpec(family, dim, parity), q).value
    if dim % 2:
        n = (dim - 1) // 2
        return Q(count, q ** (n * n + n))
    n = dim // 2
    return Q(count, q ** (n * n))


def convergence_table(spec: LimitSpec, max_dim: int = 24,
                      eps=DEFAULT_EPS) -> list:
    """Rows of normalized counts against the limit.

    The Ratio kind divides involution counts directly, summed over both form
    types: per-sign ratios hit the limit 1/2 exactly on alternating residue
    classes (the q = 1 mod 4 minus-type halving and its q = 3 mod 4
    analogues), which makes them degenerate witnesses, while the summed
    ratio converges strictly monotonically for every odd q."""
    lim = limit_value(spec, eps)
    rows = []
    for dim in _dims_for(spec.kind, max_dim):
        if spec.kind == "Ratio_Omega_over_SO":
            num = sum(count_involutions(GroupSpec(f"Omega{s}", dim, "odd"),
                                        spec.q).value for s in "+-")
            den = sum(count_involutions(GroupSpec(f"SO{s}", dim, "odd"),
                                        spec.q).value for s in "+-")
            ratio = Q(num, den)
        else:
            ratio = _normalized_count(_family_for(spec.kind, spec.sign), dim, spec.q)
        rows.append(ConvergenceRow(dim, ratio, abs(ratio - lim.value)))
    return rows


def heuristic_tail_note(spec: LimitSpec, rows) -> str:
    """Informational line comparing the final error to 10 (1/q)^(max_dim/2)."""
    if not rows:
        return "empty table"
    last = rows[-1]
    guide = 10 * Q(1, spec.q) ** (last.dim // 2)
    rel = "<" if last.abs_error < guide else ">="
    return (f"final abs_error {float(last.abs_error):.3e} {rel} "
            f"10*(1/q)^(dim/2) = {float(guide):.3e}")
