"""Involution counts (elements of order dividing 2, identity included) in the
orthogonal, special orthogonal and Omega families, exact in q or at a fixed q.

Every count is a sum of terms |O|/D where D is a product of smaller group
orders and explicit powers of q, one term per conjugacy class of involutions;
all counts are exposed numerically and as polynomials in q.  The symplectic
family has no in-scope formula (fixture and oracle coverage only).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q
from functools import lru_cache

from .exact import CycloFrac, PolyQ, render_poly
from .orders import (GroupSpec, WittType, _eval_cyclotomic, is_prime_power,
                     order_factored, order_int)

BRANCHES = ("1mod4", "3mod4")
DEFAULT_DIM_BOUND = 60


@dataclass(frozen=True)
class CountReport:
    family: str
    dim: int
    value: object            # int, or PolyQ in symbolic mode
    formula_id: str
    q: int | None = None
    branch: str | None = None

    def to_json_dict(self) -> dict:
        out = {"family": self.family, "dim": self.dim}
        if self.q is not None:
            out["q"] = self.q
        if self.branch is not None:
            out["branch"] = self.branch
        out["value"] = render_poly(self.value) if isinstance(self.value, PolyQ) \
            else str(self.value)
        out["formula_id"] = self.formula_id
        return out


# ---------------------------------------------------------------------------
# term plans: denominator atom = ("O", sign|None, dim) | ("Sp", dim) | ("q", e)
# a term is (const, [atoms]); terms containing O-(0) are dropped by convention

def _oo(s1, k, s2, m):
    a1 = ("O", s1 if k % 2 == 0 else None, k)
    a2 = ("O", s2 if m % 2 == 0 else None, m)
    return (1, [a1, a2])


def _plan_qodd(family, dim, branch):
    n = dim // 2
    if family == "O+":
        terms = [_oo("+", k, "+", dim - k) for k in range(0, dim + 1)]
        terms += [_oo("-", k, "-", dim - k) for k in range(1, dim)]
        return terms, "O_even[q odd]"
    if family == "O-":
        terms = [_oo("+", k, "-", dim - k) for k in range(0, dim)]
        terms += [_oo("-", k, "+", dim - k) for k in range(1, dim + 1)]
        return terms, "O_even[q odd]"
    if family == "O":
        terms = [_oo("+", k, "+", dim - k) for k in range(0, dim + 1)]
        terms += [_oo("-", k, "-", dim - k) for k in range(1, dim)]
        return terms, "O_odd[q odd]"
    if family == "SO+":
        terms = [_oo("+", 2 * r, "+", dim - 2 * r) for r in range(0, n + 1)]
        terms += [_oo("-", 2 * r, "-", dim - 2 * r) for r in range(1, n)]
        return terms, "SO_even[q odd]"
    if family == "SO-":
        terms = [(2, _oo("+", 2 * r, "-", dim - 2 * r)[1]) for r in range(0, n)]
        return terms, "SO_even[q odd]"
    if family == "SO":
        base, _ = _plan_qodd("O", dim, branch)
        return [(Q(c, 2), atoms) for c, atoms in base], "SO_odd[q odd]"
    if family in ("O+\\SO+", "O-\\SO-"):
        terms = [(2, [("O", None, 2 * r + 1), ("O", None, dim - 2 * r - 1)])
                 for r in range(0, n)]
        return terms, "O\\SO[q odd]"
    if family in ("Omega+", "Omega-", "Omega"):
        if branch not in BRANCHES:
            raise ValueError("Omega counts in odd characteristic need branch "
                             f"'1mod4' or '3mod4', got {branch!r}")
        sign = "-" if family == "Omega-" else "+"
        odd_dim = family == "Omega"
        top = n if dim % 2 or sign == "+" else n - 1
        rs = range(0, (n if odd_dim else top) + 1)
        terms = []
        if branch == "1mod4":
            for r in rs:
                a2 = ("O", None, dim - 2 * r) if odd_dim else ("O", sign, dim - 2 * r)
                terms.append((1, [("O", "+", 2 * r), a2]))
            return terms, f"Omega_{'odd' if odd_dim else 'even'}[q=1 mod 4]"
        # 3 mod 4: the complementary factor flips type with the parity of r
        for r in range(0, n + 1):
            s1 = "+" if r % 2 == 0 else "-"
            if odd_dim:
                a2 = ("O", None, dim - 2 * r)
            else:
                a2 = ("O", sign if r % 2 == 0 else ("+" if sign == "-" else "-"),
                      dim - 2 * r)
            terms.append((1, [("O", s1, 2 * r), a2]))
        return terms, f"Omega_{'odd' if odd_dim else 'even'}[q=3 mod 4]"
    raise ValueError(f"no odd-characteristic involution formula for {family!r}")


def _plan_qeven(family, dim):
    n = dim // 2
    if dim % 2 or family not in ("O+", "O-", "Omega+", "Omega-",
                                 "O+\\Omega+", "O-\\Omega-"):
        raise ValueError(f"no even-characteristic involution formula for "
                         f"{family!r} in dimension {dim}")
    sign = "+" if "+" in family else "-"

    def A(k):
        return (1, [("q", k * (k - 1) // 2 + k * (dim - 2 * k)),
                    ("Sp", k), ("O", sign, dim - 2 * k)])

    def B(k):
        return (Q(1, 2), [("q", k * (k + 1) // 2 + (k - 1) * (dim - 2 * k) - 1),
                          ("Sp", k - 2), ("Sp", dim - 2 * k)])

    def C(k):
        return (Q(1, 2), [("q", k * (k - 1) // 2 + (k - 1) * (dim - 2 * k)),
                          ("Sp", k - 1), ("Sp", dim - 2 * k)])

    a_terms = [A(k) for k in range(0, n + 1, 2)]
    b_terms = [B(k) for k in range(2, n + 1, 2)]
    c_terms = [C(k) for k in range(1, n + 1, 2)]
    if family in ("O+", "O-"):
        return a_terms + b_terms + c_terms, "O_even[q even]"
    if family in ("Omega+", "Omega-"):
        return a_terms + b_terms, "Omega_even[q even]"
    return c_terms, "O\\Omega[q even]"


def _numerator_spec(spec: GroupSpec) -> GroupSpec:
    """All counts are normalized sums over the full orthogonal group order."""
    fam = spec.family.split("\\")[0]
    if fam.startswith("SO"):
        fam = "O" + fam[2:]
    elif fam.startswith("Omega"):
        fam = "O" + fam[5:]
    return GroupSpec(fam, spec.dim, spec.char_parity)


def _plan(spec: GroupSpec, branch):
    if spec.char_parity == "odd":
        terms, fid = _plan_qodd(spec.family, spec.dim, branch)
    else:
        if branch is not None:
            raise ValueError("branch applies only to odd-characteristic Omega counts")
        terms, fid = _plan_qeven(spec.family, spec.dim)
    # drop terms containing the nonexistent O-(0); skip trivial atoms
    kept = []
    for const, atoms in terms:
        keep, drop = [], False
        for a in atoms:
            if a[0] == "O" and a[2] == 0:
                if a[1] == "-":
                    drop = True
                    break
                continue
            if a[0] == "Sp" and a[1] == 0:
                continue
            if a[0] == "q" and a[1] == 0:
                continue
            keep.append(a)
        if not drop:
            kept.append((const, keep))
    return kept, fid


@lru_cache(maxsize=None)
def _atom_factored(atom, parity):
    kind = atom[0]
    if kind == "q":
        return Q(1), {0: atom[1]}
    if kind == "Sp":
        return order_factored(GroupSpec("Sp", atom[1], parity))
    sign, m = atom[1], atom[2]
    fam = "O" if sign is None else "O" + sign
    return order_factored(GroupSpec(fam, m, parity))


def _check_dim(spec, dim_bound):
    if spec.dim > dim_bound:
        raise ValueError(f"dimension {spec.dim} above bound {dim_bound}")


def count_involutions(spec: GroupSpec, q: int, branch=None, *,
                      dim_bound=DEFAULT_DIM_BOUND) -> CountReport:
    """Number of g with g^2 = 1 in the family at prime power q (cosets: in
    the coset).  For Omega in odd characteristic the branch is selected by
    q mod 4; passing branch explicitly just asserts it matches."""
    spec.validate_q(q)
    _check_dim(spec, dim_bound)
    if spec.char_parity == "odd" and spec.family.startswith("Omega"):
        qbranch = "1mod4" if q % 4 == 1 else "3mod4"
        if branch is not None and branch != qbranch:
            raise ValueError(f"q = {q} is in the {qbranch} branch, not {branch}")
        branch = qbranch
    elif branch is not None and spec.char_parity == "odd":
        raise ValueError("branch applies only to Omega families")
    terms, fid = _plan(spec, branch)
    num = order_int(_numerator_spec(spec), q)
    total = Q(0)
    for const, atoms in terms:
        den = Q(1)
        for a in atoms:
            scal, factors = _atom_factored(a, spec.char_parity)
            v = scal
            for k, e in factors.items():
                v *= Q(q if k == 0 else _eval_cyclotomic(k, q)) ** e
            den *= v
        total += Q(const) * num / den
    assert total.denominator == 1, f"non-integer count for {spec}: {total}"
    return CountReport(spec.family, spec.dim, int(total), fid, q=q, branch=branch)


@lru_cache(maxsize=None)
def _count_cyclofrac(spec: GroupSpec, branch) -> tuple:
    terms, fid = _plan(spec, branch)
    nscal, nfac = order_factored(_numerator_spec(spec))
    total = CycloFrac.zero()
    for const, atoms in terms:
        scal = nscal * Q(const)
        fac = dict(nfac)
        for a in atoms:
            ascal, afac = _atom_factored(a, spec.char_parity)
            scal /= ascal
            for k, e in afac.items():
                fac[k] = fac.get(k, 0) - e
        total = total + CycloFrac.from_factored(scal, fac)
    return total, fid


def count_involutions_poly(spec: GroupSpec, branch=None, *,
                           dim_bound=DEFAULT_DIM_BOUND) -> CountReport:
    """The count as a polynomial in q, valid for all q of the requested
    characteristic parity (and branch, for Omega in odd characteristic)."""
    _check_dim(spec, dim_bound)
    if spec.char_parity == "odd" and spec.family.startswith("Omega"):
        if branch not in BRANCHES:
            raise ValueError(f"branch must be one of {BRANCHES} for Omega, got {branch!r}")
    elif branch is not None:
        raise ValueError("branch applies only to odd-characteristic Omega counts")
    total, fid = _count_cyclofrac(spec, branch)
    return CountReport(spec.family, spec.dim, total.to_poly(), fid, branch=branch)


# ---------------------------------------------------------------------------
# Omega membership of an involution class from its (-1)-eigenspace data

@dataclass(frozen=True)
class OmegaClassQuery:
    """An involution class in SO (q odd), described by the dimension d of its
    (-1)-eigenspace and the Witt type of the form restricted to it."""
    eigenspace_dim: int
    witt: WittType
    q: int


def omega_class_membership(query: OmegaClassQuery) -> bool:
    """Whether the class lies in Omega: true iff v = d(q-1)/4 (+1 for the
    TYPE_W restricted form) is an even integer."""
    d, witt, q = query.eigenspace_dim, query.witt, query.q
    if not is_prime_power(q) or q % 2 == 0:
        raise ValueError(f"q must be an odd prime power, got {q}")
    if d < 0 or d % 2:
        raise ValueError(f"(-1)-eigenspace dimension must be even, got {d}")
    if witt not in (WittType.TYPE_0, WittType.TYPE_W):
        raise ValueError("restricted form of an even-dimensional eigenspace "
                         f"must be TYPE_0 or TYPE_W, got {witt}")
    v = Q(d * (q - 1), 4)
    if witt is WittType.TYPE_W:
        v += 1
    if v.denominator != 1:
        raise ValueError(f"v = {v} is not an integer; invalid (d, witt, q) combination")
    return int(v) % 2 == 0


def char_degree_sum_via_involutions(m: int, q: int, sign: str) -> int:
    """Sum of the irreducible character degrees of SO^sign(4m+2, q), q odd:
    equals the involution count of the coset O \\ SO in dimension 4m+2."""
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    if m < 0:
        raise ValueError("m must be nonnegative")
    spec = GroupSpec(f"O{sign}\\SO{sign}", 4 * m + 2, "odd")
    return count_involutions(spec, q).value
