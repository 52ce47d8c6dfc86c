"""Brute-force oracle: explicit classical matrix groups over tiny fields.

Everything here is independent of the counting formulas.  Groups are built by
backtracking over images of basis vectors, involutions are counted by squaring
matrices, and the Omega subgroup is realized as a closure of squares that is
certified to have index 2 (squares and commutators always land in Omega, so a
closure of them that reaches index 2 must be exactly Omega).

Field arithmetic is table based so prime powers work the same way as primes.
Supported q <= 16 with fixed irreducible polynomials: x^2+x+1 for F4,
x^3+x+1 for F8, x^2+1 for F9, x^4+x+1 for F16.  Matrices act on column
vectors; an element's columns are the images of the standard basis.
"""

from __future__ import annotations

import itertools
import json
import os
import random
from dataclasses import dataclass

import numpy as np

from .counts import OmegaClassQuery, count_involutions, omega_class_membership
from .orders import (GroupSpec, WittType, char_parity_of, is_prime_power,
                     order_int)

DEFAULT_CAP = 10 ** 6
CAP_ENV = "INVOLUTION_ATLAS_CAP"

# coefficient tuples (low degree first) of the reducing polynomial per q
_IRREDUCIBLE = {4: (1, 1, 1), 8: (1, 1, 0, 1), 9: (1, 0, 1), 16: (1, 1, 0, 0, 1)}


class CapExceeded(RuntimeError):
    """Estimated group order is above the enumeration cap."""


def enumeration_cap(cap=None) -> int:
    if cap is not None:
        return int(cap)
    return int(os.environ.get(CAP_ENV, DEFAULT_CAP))


# ---------------------------------------------------------------------------
# field tables

def _char_of(q: int) -> int:
    for p in (2, 3, 5, 7, 11, 13):
        if q % p == 0:
            return p
    raise ValueError(f"no prime factor found for {q}")


class FieldTable:
    """Arithmetic tables for F_q, q <= 16.  Element k encodes the polynomial
    whose coefficient vector is k written in base p, so 0 and 1 are the two
    identities.  The tables are verified at construction."""

    def __init__(self, q: int):
        if not is_prime_power(q) or not 2 <= q <= 16:
            raise ValueError(f"field tables cover prime powers 2..16, got {q}")
        p = _char_of(q)
        deg = 1
        while p ** deg < q:
            deg += 1
        assert p ** deg == q
        self.q, self.p, self.deg = q, p, deg
        add = np.zeros((q, q), dtype=np.uint8)
        mul = np.zeros((q, q), dtype=np.uint8)
        for a in range(q):
            for b in range(a, q):
                add[a, b] = add[b, a] = self._add(a, b)
                mul[a, b] = mul[b, a] = self._mul(a, b)
        self.add, self.mul = add, mul
        self.neg = np.array([int(np.where(add[a] == 0)[0][0]) for a in range(q)],
                            dtype=np.uint8)
        inv = [0] * q
        for a in range(1, q):
            hits = np.where(mul[a] == 1)[0]
            if len(hits) != 1:
                raise AssertionError(f"element {a} of F_{q} lacks a unique inverse")
            inv[a] = int(hits[0])
        self.inv = np.array(inv, dtype=np.uint8)
        self.squares = frozenset(int(mul[a, a]) for a in range(q))
        self._verify()

    def _digits(self, a: int) -> list:
        out = []
        for _ in range(self.deg):
            out.append(a % self.p)
            a //= self.p
        return out

    def _undigits(self, ds) -> int:
        a = 0
        for d in reversed(ds):
            a = a * self.p + d % self.p
        return a

    def _add(self, a: int, b: int) -> int:
        da, db = self._digits(a), self._digits(b)
        return self._undigits([(x + y) % self.p for x, y in zip(da, db)])

    def _mul(self, a: int, b: int) -> int:
        if self.deg == 1:
            return (a * b) % self.p
        da, db = self._digits(a), self._digits(b)
        conv = [0] * (2 * self.deg - 1)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                conv[i + j] = (conv[i + j] + x * y) % self.p
        red = _IRREDUCIBLE[self.q]
        for i in range(len(conv) - 1, self.deg - 1, -1):
            c = conv[i]
            if c:
                conv[i] = 0
                for j in range(self.deg):
                    conv[i - self.deg + j] = (conv[i - self.deg + j]
                                              - c * red[j]) % self.p
        return self._undigits(conv[:self.deg])

    def _verify(self):
        q, add, mul = self.q, self.add, self.mul
        idx = np.arange(q, dtype=np.uint8)
        assert np.array_equal(add[0], idx) and np.array_equal(mul[1], idx)
        assert not mul[0].any()
        assert np.array_equal(add, add.T) and np.array_equal(mul, mul.T)
        rng = random.Random(q * 1009)
        for _ in range(300):
            a, b, c = (rng.randrange(q) for _ in range(3))
            assert add[add[a, b], c] == add[a, add[b, c]]
            assert mul[mul[a, b], c] == mul[a, mul[b, c]]
            assert mul[a, add[b, c]] == add[mul[a, b], mul[a, c]]
        for a in range(1, q):
            assert mul[a, self.inv[a]] == 1
        assert all(add[a, self.neg[a]] == 0 for a in range(q))


_FIELDS = {}


def field(q: int) -> FieldTable:
    if q not in _FIELDS:
        _FIELDS[q] = FieldTable(q)
    return _FIELDS[q]


# ---------------------------------------------------------------------------
# matrix arithmetic over a FieldTable (matrices are uint8 ndarrays)

def _identity(d: int) -> np.ndarray:
    return np.eye(d, dtype=np.uint8)


def mat_mul(F: FieldTable, a, b) -> np.ndarray:
    if F.deg == 1:
        return ((a.astype(np.int64) @ b.astype(np.int64)) % F.q).astype(np.uint8)
    d = a.shape[1]
    acc = np.zeros((a.shape[0], b.shape[1]), dtype=np.uint8)
    for k in range(d):
        acc = F.add[acc, F.mul[a[:, k][:, None], b[k, :][None, :]]]
    return acc


def stack_mul(F: FieldTable, A, B) -> np.ndarray:
    """Batched product; either operand may be a single (d,d) matrix."""
    A, B = np.asarray(A), np.asarray(B)
    if F.deg == 1:
        return ((A.astype(np.int64) @ B.astype(np.int64)) % F.q).astype(np.uint8)
    if A.ndim == 2:
        A = A[None]
    if B.ndim == 2:
        B = B[None]
    d = A.shape[-1]
    n = max(A.shape[0], B.shape[0])
    acc = np.zeros((n, A.shape[1], B.shape[-1]), dtype=np.uint8)
    for k in range(d):
        ak = A[:, :, k][:, :, None]
        bk = B[:, k, :][:, None, :]
        acc = F.add[acc, F.mul[ak, bk]]
    return acc


def _gauss(F: FieldTable, m):
    """Row reduce a copy of m; returns (rank, rref, pivot columns)."""
    a = m.copy()
    rows, cols = a.shape
    r, pivots = 0, []
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if a[i, c]), None)
        if pivot is None:
            continue
        if pivot != r:
            a[[r, pivot]] = a[[pivot, r]]
        a[r] = F.mul[F.inv[a[r, c]], a[r]]
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] = F.add[a[i], F.mul[F.neg[a[i, c]], a[r]]]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return r, a, pivots


def gauss_rank(F: FieldTable, m) -> int:
    return _gauss(F, m)[0]


def kernel_basis(F: FieldTable, m) -> np.ndarray:
    """Rows spanning {x : m @ x = 0}."""
    cols = m.shape[1]
    rank, rref, pivots = _gauss(F, m)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    for row, f in enumerate(free):
        basis[row, f] = 1
        for i, p in enumerate(pivots):
            basis[row, p] = F.neg[rref[i, f]]
    return basis


def mat_inverse(F: FieldTable, m) -> np.ndarray:
    d = m.shape[0]
    aug = np.concatenate([m, _identity(d)], axis=1)
    rank, rref, _ = _gauss(F, aug)
    if rank < d or not np.array_equal(rref[:, :d], _identity(d)):
        raise ValueError("matrix is singular")
    return rref[:, d:].copy()


def _det_single(F: FieldTable, m) -> int:
    """Determinant of one matrix by Gaussian elimination over the field."""
    a = m.astype(np.uint8).copy()
    d = a.shape[0]
    det = 1
    for col in range(d):
        piv = next((r for r in range(col, d) if a[r, col]), None)
        if piv is None:
            return 0
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            det = int(F.neg[det])
        det = int(F.mul[det, a[col, col]])
        inv = F.inv[a[col, col]]
        for r in range(col + 1, d):
            if a[r, col]:
                factor = F.mul[a[r, col], inv]
                a[r] = F.add[a[r], F.neg[F.mul[factor, a[col]]]]
    return det


def _batched_det(F: FieldTable, stack) -> np.ndarray:
    """Determinants by permutation expansion (dimension <= 6)."""
    d = stack.shape[-1]
    assert d <= 6
    total = np.zeros(stack.shape[0], dtype=np.uint8)
    for perm in itertools.permutations(range(d)):
        prod = stack[:, 0, perm[0]]
        for i in range(1, d):
            prod = F.mul[prod, stack[:, i, perm[i]]]
        inversions = sum(perm[i] > perm[j]
                         for i in range(d) for j in range(i + 1, d))
        if inversions % 2:
            prod = F.neg[prod]
        total = F.add[total, prod]
    return total


# ---------------------------------------------------------------------------
# forms

@dataclass(eq=False)
class FormSpec:
    """A nondegenerate form on F_q^dim: kind "quadratic" (coefficients in the
    upper-triangular matrix quad, polarization polar) or "alternating"
    (Gram matrix polar, quad None).  witt labels the quadratic type; for even
    characteristic TYPE_0/TYPE_W mean plus/minus type."""
    kind: str
    dim: int
    q: int
    witt: object
    quad: object
    polar: object

    @property
    def field(self) -> FieldTable:
        return field(self.q)

    def group_spec(self) -> GroupSpec:
        par = char_parity_of(self.q)
        if self.kind == "alternating":
            return GroupSpec("Sp", self.dim, par)
        if self.dim % 2 == 0:
            fam = "O+" if self.witt is WittType.TYPE_0 else "O-"
            return GroupSpec(fam, self.dim, par)
        return GroupSpec("O", self.dim, par)

    def value_batch(self, X) -> np.ndarray:
        """Q on each row of X (quadratic forms only)."""
        F = self.field
        acc = np.zeros(X.shape[0], dtype=np.uint8)
        for i, j in zip(*np.nonzero(self.quad)):
            term = F.mul[self.quad[i, j], F.mul[X[:, i], X[:, j]]]
            acc = F.add[acc, term]
        return acc

    def pair_batch(self, v, X) -> np.ndarray:
        """Polarization <v, x> for each row x of X."""
        F = self.field
        w = np.zeros(self.dim, dtype=np.uint8)
        for i in range(self.dim):
            if v[i]:
                w = F.add[w, F.mul[v[i], self.polar[i]]]
        acc = np.zeros(X.shape[0], dtype=np.uint8)
        for j in range(self.dim):
            if w[j]:
                acc = F.add[acc, F.mul[w[j], X[:, j]]]
        return acc

    def is_isometry(self, m) -> bool:
        F = self.field
        gt = m.T.copy()
        if not np.array_equal(mat_mul(F, mat_mul(F, gt, self.polar), m),
                              self.polar):
            return False
        if self.kind == "quadratic":
            cols = m.T[None, :, :]  # columns of m as rows of a batch
            vals = self.value_batch(cols[0])
            if not np.array_equal(vals, np.diagonal(self.quad)):
                return False
        return True


def _all_vectors(q: int, d: int) -> np.ndarray:
    return np.array(list(itertools.product(range(q), repeat=d)), dtype=np.uint8)


def _singular_expectation(dim: int, q: int, witt) -> int:
    """Nonzero vectors with Q = 0 on a nondegenerate space."""
    if dim % 2 == 0:
        n = dim // 2
        if witt is WittType.TYPE_0:
            return (q ** n - 1) * (q ** (n - 1) + 1)
        return (q ** n + 1) * (q ** (n - 1) - 1)
    return q ** (dim - 1) - 1


def quadratic_form_spec(dim: int, q: int, witt: WittType) -> FormSpec:
    """The standard quadratic form of the requested Witt type: a chain of
    hyperbolic pairs plus, where needed, a diagonal or anisotropic block."""
    if dim < 1:
        raise ValueError("dimension must be positive")
    F = field(q)
    C = np.zeros((dim, dim), dtype=np.uint8)
    if q % 2 == 1:
        if dim % 2 == 0:
            if witt not in (WittType.TYPE_0, WittType.TYPE_W):
                raise ValueError(f"even dimension needs TYPE_0 or TYPE_W, got {witt}")
            for i in range(0, dim, 2):
                C[i, i + 1] = 1
            if witt is WittType.TYPE_W:
                C[dim - 2, dim - 1] = 0
                delta = next(a for a in range(2, q) if a not in F.squares)
                C[dim - 2, dim - 2] = 1
                C[dim - 1, dim - 1] = F.neg[delta]
        else:
            if witt not in (WittType.TYPE_1, WittType.TYPE_D):
                raise ValueError(f"odd dimension needs TYPE_1 or TYPE_D, got {witt}")
            for i in range(0, dim - 1, 2):
                C[i, i + 1] = 1
            if witt is WittType.TYPE_1:
                C[dim - 1, dim - 1] = 1
            else:
                C[dim - 1, dim - 1] = next(a for a in range(2, q)
                                           if a not in F.squares)
    else:
        if dim % 2:
            raise ValueError("odd-dimensional quadratic spaces in even "
                             "characteristic have a radical; use the "
                             "alternating model instead")
        if witt not in (WittType.TYPE_0, WittType.TYPE_W):
            raise ValueError(f"even characteristic needs TYPE_0 or TYPE_W, got {witt}")
        n = dim // 2
        for i in range(n):
            C[i, n + i] = 1
        if witt is WittType.TYPE_W:
            # replace the last pair's plane by x^2 + xy + a y^2 with
            # t^2 + t + a irreducible (a found by search, type verified below)
            image = {int(F.add[F.mul[t, t], t]) for t in range(q)}
            a = next(v for v in range(q) if v not in image)
            C[n - 1, n - 1] = 1
            C[2 * n - 1, 2 * n - 1] = a
    polar = F.add[C, C.T]
    form = FormSpec("quadratic", dim, q, witt, C, polar)
    if gauss_rank(F, polar) != dim:
        raise ValueError("degenerate polarization")
    if q ** dim <= 2 ** 20:
        X = _all_vectors(q, dim)
        zeros = int((form.value_batch(X) == 0).sum()) - 1
        assert zeros == _singular_expectation(dim, q, witt), \
            f"singular vector count {zeros} disagrees with type {witt}"
    if q % 2 == 1:
        assert witt_type(symmetric_gram(form), q) is witt
    return form


def alternating_form_spec(dim: int, q: int) -> FormSpec:
    if dim < 2 or dim % 2:
        raise ValueError("alternating forms need positive even dimension")
    F = field(q)
    n = dim // 2
    polar = np.zeros((dim, dim), dtype=np.uint8)
    for i in range(n):
        polar[i, n + i] = 1
        polar[n + i, i] = F.neg[1]
    assert gauss_rank(F, polar) == dim
    return FormSpec("alternating", dim, q, None, None, polar)


def form_for_family(family: str, dim: int, q: int) -> FormSpec:
    """The standard form whose full isometry group realizes the family."""
    if family == "Sp":
        return alternating_form_spec(dim, q)
    if family == "O+":
        return quadratic_form_spec(dim, q, WittType.TYPE_0)
    if family == "O-":
        return quadratic_form_spec(dim, q, WittType.TYPE_W)
    if family == "O":
        return quadratic_form_spec(dim, q, WittType.TYPE_1)
    raise ValueError(f"no single form realizes family {family!r}")


def symmetric_gram(form: FormSpec) -> np.ndarray:
    """The symmetric Gram matrix B with Q(x) = x^T B x (odd characteristic)."""
    if form.kind != "quadratic" or form.q % 2 == 0:
        raise ValueError("symmetric Gram matrices need an odd-characteristic "
                         "quadratic form")
    F = form.field
    half = F.inv[2 % form.q]
    return F.mul[half, form.polar]


def witt_type(gram, q: int) -> WittType:
    """Witt type of a nondegenerate symmetric Gram matrix, q odd: determinant
    class against the type-0 (even dim) or x^2-summand (odd dim) normal form."""
    if q % 2 == 0:
        raise ValueError("Witt types are classified here for odd q only")
    F = field(q)
    d = gram.shape[0]
    if d == 0:
        return WittType.TYPE_0
    if gauss_rank(F, gram) != d:
        raise ValueError("degenerate form")
    det = _det_single(F, gram)
    if d % 2 == 0:
        val = det if (d // 2) % 2 == 0 else int(F.neg[det])
        return WittType.TYPE_0 if val in F.squares else WittType.TYPE_W
    m = (d - 1) // 2
    val = det if m % 2 == 0 else int(F.neg[det])
    return WittType.TYPE_1 if val in F.squares else WittType.TYPE_D


# ---------------------------------------------------------------------------
# groups

class IsometryGroup:
    """An immutable set of matrices preserving a form: either a full isometry
    group from build_isometry_group or a realized subgroup of one."""

    def __init__(self, form: FormSpec, elements: np.ndarray, label: str):
        self.form = form
        self.q = form.q
        self.elements = elements
        self.label = label
        self._index = {elements[i].tobytes(): i for i in range(len(elements))}
        self._inv_mask = None
        self._det1 = None
        self._omega = None

    @property
    def order(self) -> int:
        return len(self.elements)

    def contains(self, m) -> bool:
        return np.asarray(m, dtype=np.uint8).tobytes() in self._index

    def membership_mask(self, sub: "IsometryGroup") -> np.ndarray:
        keys = sub._index
        return np.array([self.elements[i].tobytes() in keys
                         for i in range(self.order)], dtype=bool)

    def subgroup(self, stack: np.ndarray, label: str) -> "IsometryGroup":
        return IsometryGroup(self.form, stack, label)

    def involution_mask(self) -> np.ndarray:
        if self._inv_mask is None:
            F = self.form.field
            sq = stack_mul(F, self.elements, self.elements)
            self._inv_mask = (sq == _identity(self.elements.shape[-1])).all((1, 2))
        return self._inv_mask


def build_isometry_group(form: FormSpec, cap=None) -> IsometryGroup:
    """Every matrix preserving the form, by backtracking over basis images.
    Candidates for each image are filtered by the pairing values against the
    already-chosen images (and the quadratic values); nondegeneracy makes any
    complete choice automatically invertible."""
    cap = enumeration_cap(cap)
    spec = form.group_spec()
    expected = order_int(spec, form.q)
    if expected > cap:
        raise CapExceeded(f"|{spec.family}({form.dim},{form.q})| = {expected} "
                          f"exceeds cap {cap}")
    F, d, q = form.field, form.dim, form.q
    X = _all_vectors(q, d)
    if form.kind == "quadratic":
        qvals = form.value_batch(X)
        slots = [np.where(qvals == form.quad[k, k])[0] for k in range(d)]
    else:
        everything = np.arange(len(X))
        slots = [everything.copy() for _ in range(d)]
    out = []
    chosen = []

    def extend(level, cands):
        if level == d:
            out.append(np.stack(chosen, axis=1))
            return
        for idx in cands[0]:
            v = X[idx]
            chosen.append(v)
            if level == d - 1:
                extend(level + 1, [])
            else:
                pv = form.pair_batch(v, X)
                nxt = [c[pv[c] == form.polar[level, j]]
                       for j, c in enumerate(cands[1:], start=level + 1)]
                if all(len(c) for c in nxt):
                    extend(level + 1, nxt)
            chosen.pop()

    extend(0, slots)
    stack = np.stack(out)
    if len(stack) != expected:
        raise AssertionError(f"enumerated {len(stack)} isometries for "
                             f"{spec.family}({d},{q}), order formula says {expected}")
    label = f"{spec.family}({d},{q})"
    group = IsometryGroup(form, stack, label)
    _verify_group(group)
    return group


def _verify_group(G: IsometryGroup):
    """Form preservation for every element; closure and inverses spot-checked."""
    F, form, E = G.form.field, G.form, G.elements
    gt = E.transpose(0, 2, 1).copy()
    assert (stack_mul(F, stack_mul(F, gt, form.polar), E)
            == form.polar).all(), "polarization not preserved"
    if form.kind == "quadratic":
        diag = np.diagonal(form.quad)
        for i in range(form.dim):
            assert (form.value_batch(E[:, :, i]) == diag[i]).all(), \
                "quadratic values not preserved"
    rng = random.Random(G.order * 31 + G.q)
    n = G.order
    for _ in range(min(200, n * n)):
        a, b = rng.randrange(n), rng.randrange(n)
        prod = mat_mul(F, E[a], E[b])
        assert G.contains(prod), "not closed under product"
    for _ in range(min(50, n)):
        a = rng.randrange(n)
        assert G.contains(mat_inverse(F, E[a])), "not closed under inverse"


def special_subgroup(G: IsometryGroup) -> IsometryGroup:
    """The determinant-1 subgroup (odd characteristic orthogonal groups; for
    alternating forms the determinant is identically 1 already)."""
    if G._det1 is not None:
        return G._det1
    F = G.form.field
    if G.form.kind == "quadratic" and G.q % 2 == 0:
        raise ValueError("determinant is identically 1 on even-characteristic "
                         "orthogonal groups; use omega_subgroup instead")
    dets = _batched_det(F, G.elements)
    mask = dets == 1
    label = "S" + G.label if G.form.kind == "quadratic" else G.label
    G._det1 = G.subgroup(G.elements[mask], label)
    return G._det1


def _closure(F: FieldTable, gens: np.ndarray, d: int) -> np.ndarray:
    """Subgroup generated by gens, by breadth-first multiplication."""
    seen = {_identity(d).tobytes()}
    elements = [_identity(d)]
    frontier = np.stack([_identity(d)])
    while len(frontier):
        new = []
        for g in gens:
            prods = stack_mul(F, frontier, g)
            for m in prods:
                key = m.tobytes()
                if key not in seen:
                    seen.add(key)
                    new.append(m)
        if not new:
            break
        frontier = np.stack(new)
        elements.extend(new)
    return np.stack(elements)


def _transvections(form: FormSpec) -> np.ndarray:
    """All orthogonal transvections x -> x + (<x,v>/Q(v)) v, q even: the
    involutions with rank(1+g) = 1, which generate the orthogonal group
    outside one classical exception."""
    F, d = form.field, form.dim
    X = _all_vectors(form.q, d)
    qvals = form.value_batch(X)
    eye = _identity(d)
    out, seen = [], set()
    for idx in np.where(qvals != 0)[0]:
        v = X[idx]
        w = np.zeros(d, dtype=np.uint8)
        for i in range(d):
            if v[i]:
                w = F.add[w, F.mul[v[i], form.polar[i]]]
        c = F.mul[F.inv[qvals[idx]], w]
        T = F.add[eye, F.mul[v[:, None], c[None, :]]]
        key = T.tobytes()
        if key not in seen:
            seen.add(key)
            out.append(T)
    return np.stack(out)


def _omega_even(G: IsometryGroup, cap) -> np.ndarray:
    """Element stack of Omega for q even: products of pairs of transvections
    (the even-length words).  When the transvections fail to generate the
    whole group (the plus type in dimension 4 over F_2), the element is
    extended by an identity block on an extra hyperbolic plane and classified
    inside the stabilized group, where the word realization works."""
    F, d = G.form.field, G.form.dim
    trans = _transvections(G.form)
    gens = [mat_mul(F, trans[0], trans[j]) for j in range(1, len(trans))]
    closure = (_closure(F, np.stack(gens), d) if gens
               else np.stack([_identity(d)]))
    if 2 * len(closure) == G.order:
        assert trans[0].tobytes() not in {m.tobytes() for m in closure}
        return closure
    big_c = np.zeros((d + 2, d + 2), dtype=np.uint8)
    big_c[:d, :d] = G.form.quad
    big_c[d, d + 1] = 1
    big_form = FormSpec("quadratic", d + 2, G.q, G.form.witt, big_c,
                        F.add[big_c, big_c.T])
    big = build_isometry_group(big_form, cap)
    big_omega = omega_subgroup(big)
    keep = []
    for g in G.elements:
        ext = _identity(d + 2)
        ext[:d, :d] = g
        if big_omega.contains(ext):
            keep.append(g)
    stack = np.stack(keep)
    if 2 * len(stack) != G.order:
        raise RuntimeError(f"stabilized word classification of {G.label} "
                           f"selected {len(stack)} of {G.order} elements")
    return stack


def omega_subgroup(G: IsometryGroup, cap=None) -> IsometryGroup:
    """Omega realized independently of the counting formulas: for q odd the
    closure of squares inside SO, certified by reaching index exactly 2
    (squares lie in the index-2 kernel, so index 2 proves equality); for q
    even the even-length transvection words."""
    if G._omega is not None:
        return G._omega
    if G.form.kind != "quadratic":
        raise ValueError("Omega subgroups are defined for orthogonal groups")
    F, d = G.form.field, G.form.dim
    if G.q % 2 == 0:
        closure = _omega_even(G, cap)
        base = G
    else:
        base = special_subgroup(G)
        sq = stack_mul(F, base.elements, base.elements)
        uniq, order_keys = {}, []
        for m in sq:
            key = m.tobytes()
            if key not in uniq:
                uniq[key] = m
                order_keys.append(key)
        rng = random.Random(G.order * 7 + G.q)
        pool = list(order_keys)
        rng.shuffle(pool)
        gens, closure = [], np.stack([_identity(d)])
        for start in range(0, len(pool), 16):
            gens.extend(uniq[k] for k in pool[start:start + 16])
            closure = _closure(F, np.stack(gens), d)
            if 2 * len(closure) >= base.order:
                break
        if 2 * len(closure) != base.order:
            raise RuntimeError(f"square closure of {base.label} has index "
                               f"{base.order / len(closure):g}, expected 2")
    label = "Omega" + G.label[1:] if G.label.startswith("O") else "Omega?" + G.label
    G._omega = G.subgroup(closure, label)
    return G._omega


def derived_subgroup(G: IsometryGroup) -> IsometryGroup:
    """The commutator subgroup.  Small groups get the exact all-pairs
    computation; larger ones use sampled commutators whose closure is then
    certified exactly (normality plus an abelian quotient check), so the
    result is never heuristic."""
    F, d, n = G.form.field, G.form.dim, G.order
    E = G.elements
    inv_cache = {}

    def inv_of(i):
        if i not in inv_cache:
            inv_cache[i] = mat_inverse(F, E[i])
        return inv_cache[i]

    if n <= 2500:
        # exact: every commutator [g,h] = g^-1 h^-1 g h, batched over h
        inverses = np.stack([mat_inverse(F, E[i]) for i in range(n)])
        seen, comms = set(), []
        for i in range(n):
            t = stack_mul(F, inverses, E[i])            # h^-1 g
            t = stack_mul(F, t, E)                      # h^-1 g h
            t = stack_mul(F, inverses[i], t)            # g^-1 h^-1 g h
            for m in t:
                key = m.tobytes()
                if key not in seen:
                    seen.add(key)
                    comms.append(m)
        rng = random.Random(n * 13 + G.q)
        rng.shuffle(comms)
        gens, closure, keys = [], np.stack([_identity(d)]), {_identity(d).tobytes()}
        while True:
            missing = [m for m in comms if m.tobytes() not in keys]
            if not missing:
                break
            gens.extend(missing[:32])
            closure = _closure(F, np.stack(gens), d)
            keys = {m.tobytes() for m in closure}
        return G.subgroup(closure, f"derived({G.label})")

    rng = random.Random(n * 13 + G.q)
    seen, gens = set(), []
    closure = np.stack([_identity(d)])
    stable = 0
    while stable < 2:
        batch = []
        for _ in range(128):
            i, j = rng.randrange(n), rng.randrange(n)
            c = mat_mul(F, mat_mul(F, mat_mul(F, inv_of(i), inv_of(j)), E[i]), E[j])
            key = c.tobytes()
            if key not in seen:
                seen.add(key)
                batch.append(c)
        before = len(closure)
        gens.extend(batch)
        closure = _closure(F, np.stack(gens), d)
        stable = stable + 1 if len(closure) == before else 0
    H = G.subgroup(closure, f"derived({G.label})")
    _certify_derived(G, H)
    return H


def _certify_derived(G: IsometryGroup, H: IsometryGroup):
    """H is generated by commutators, so H <= [G,G]; normality of H plus an
    abelian quotient shows [G,G] <= H, hence equality."""
    F, d = G.form.field, G.form.dim
    if G.order % H.order:
        raise AssertionError("subgroup order does not divide group order")
    index = G.order // H.order
    if index > 64:
        raise RuntimeError(f"commutator sampling left index {index}; "
                           "not attempting certification")
    assigned = G.membership_mask(H)
    reps = [_identity(d)]
    while not assigned.all():
        r = G.elements[int(np.argmin(assigned))]
        reps.append(r)
        coset = stack_mul(F, H.elements, r)
        for m in coset:
            idx = G._index.get(m.tobytes())
            if idx is None:
                raise AssertionError("coset left the group")
            assigned[idx] = True
    if len(reps) != index:
        raise AssertionError("coset decomposition miscounted")
    for r in reps[1:]:
        r_inv = mat_inverse(F, r)
        conj = stack_mul(F, r_inv, stack_mul(F, H.elements, r))
        if not all(H.contains(m) for m in conj):
            raise AssertionError("sampled closure is not normal; resample")
    for a in reps:
        for b in reps:
            c = mat_mul(F, mat_mul(F, mat_mul(F, mat_inverse(F, a),
                                              mat_inverse(F, b)), a), b)
            if not H.contains(c):
                raise AssertionError("quotient is not abelian; resample")


def count_involutions_bruteforce(G: IsometryGroup, subset: str = "all") -> int:
    """Elements with g^2 = 1 (identity included) in the chosen subset of a
    built group: all, det1 (SO), omega, or coset (O minus SO for q odd,
    O minus Omega for q even)."""
    inv = G.involution_mask()
    if subset == "all":
        return int(inv.sum())
    if G.form.kind == "alternating":
        if subset == "det1":
            return int(inv.sum())  # symplectic matrices have determinant 1
        raise ValueError(f"subset {subset!r} is undefined for alternating forms")
    if subset == "det1":
        so = special_subgroup(G)
        return int((inv & G.membership_mask(so)).sum())
    if subset == "omega":
        return int((inv & G.membership_mask(omega_subgroup(G))).sum())
    if subset == "coset":
        if G.q % 2 == 1:
            big = G.membership_mask(special_subgroup(G))
        else:
            big = G.membership_mask(omega_subgroup(G))
        return int((inv & ~big).sum())
    raise ValueError(f"unknown subset {subset!r}")


def omega_membership_even(g, G: IsometryGroup) -> bool:
    """Omega membership for q even: rank(1 + g) is even."""
    if G.q % 2 == 1:
        raise ValueError("the rank-parity criterion applies to even q only")
    F = G.form.field
    m = F.add[_identity(G.form.dim), np.asarray(g, dtype=np.uint8)]
    return gauss_rank(F, m) % 2 == 0


def dump_elements(G: IsometryGroup, path: str):
    """Flat binary dump: one JSON header line, then row-major element bytes."""
    header = {"schema": 1, "label": G.label, "dim": G.form.dim, "q": G.q,
              "count": G.order}
    with open(path, "wb") as fh:
        fh.write(json.dumps(header, sort_keys=True).encode() + b"\n")
        fh.write(G.elements.tobytes())


# ---------------------------------------------------------------------------
# validation suites

@dataclass(frozen=True)
class SuiteRow:
    family: str
    dim: int
    q: int
    subset: str
    brute: object           # int, or None when skipped
    expected: object
    ok: bool
    note: str = ""

    def to_json_dict(self) -> dict:
        return {"family": self.family, "dim": self.dim, "q": self.q,
                "subset": self.subset, "brute": self.brute,
                "expected": self.expected, "ok": self.ok, "note": self.note}


@dataclass(frozen=True)
class AgreementRow:
    label: str
    criterion: str          # "rank_parity" (q even) or "eigenspace_witt" (q odd)
    tested: int
    mismatches: int

    @property
    def ok(self) -> bool:
        return self.mismatches == 0

    def to_json_dict(self) -> dict:
        return {"label": self.label, "criterion": self.criterion,
                "tested": self.tested, "mismatches": self.mismatches,
                "ok": self.ok}


_BUILD_CACHE = {}


def _built(family: str, dim: int, q: int, cap) -> IsometryGroup:
    key = (family, dim, q)
    if key not in _BUILD_CACHE:
        cap_val = enumeration_cap(cap)
        spec = GroupSpec(family, dim, "odd" if q % 2 else "even")
        expected = order_int(spec, q)
        if expected > cap_val:
            raise CapExceeded(f"|{family}({dim},{q})| = {expected} "
                              f"exceeds cap {cap_val}")
        _BUILD_CACHE[key] = build_isometry_group(form_for_family(family, dim, q),
                                                 cap)
    return _BUILD_CACHE[key]


def _orthogonal_targets():
    """(O-family, dim, q) for the default suite grid."""
    out = []
    for q in (2, 3, 4, 5):
        for dim in (2, 4, 6):
            for fam in ("O+", "O-"):
                out.append((fam, dim, q))
    out += [("O", 3, 3), ("O", 3, 5), ("O", 5, 3)]
    return out


def _count_rows_for(G: IsometryGroup, fam: str, dim: int, q: int) -> list:
    par = char_parity_of(q)
    sign = fam[1:]  # "+", "-", or ""
    rows = []

    def formula(family):
        return count_involutions(GroupSpec(family, dim, par), q).value

    def row(label, subset, expected):
        brute = count_involutions_bruteforce(G, subset)
        rows.append(SuiteRow(label, dim, q, subset, brute, expected,
                             brute == expected))

    row(fam, "all", formula(fam))
    if par == "odd":
        row("SO" + sign, "det1", formula("SO" + sign))
        row("Omega" + sign, "omega", formula("Omega" + sign))
        if dim % 2 == 0:
            row(f"O{sign}\\SO{sign}", "coset", formula(f"O{sign}\\SO{sign}"))
        else:
            # odd dimension: O = SO x {+-1}, so the coset count is the
            # difference of the two group counts
            row("O\\SO", "coset", formula("O") - formula("SO"))
    else:
        row("Omega" + sign, "omega", formula("Omega" + sign))
        row(f"O{sign}\\Omega{sign}", "coset", formula(f"O{sign}\\Omega{sign}"))
    return rows


def default_suite(cap=None) -> list:
    """Brute-force versus formula involution counts over every buildable
    target in the default grid, plus the symplectic spot checks."""
    cap = enumeration_cap(cap)
    rows = []
    for fam, dim, q in _orthogonal_targets():
        spec = GroupSpec(fam, dim, "odd" if q % 2 else "even")
        expected_order = order_int(spec, q)
        if expected_order > cap:
            rows.append(SuiteRow(fam, dim, q, "all", None, None, True,
                                 f"skipped: order {expected_order} above cap {cap}"))
            continue
        G = _built(fam, dim, q, cap)
        rows.extend(_count_rows_for(G, fam, dim, q))
    from .fixtures import SP_ODD_CHAR_BRUTE, sp_involution_poly
    for q in (2, 3):
        G = _built("Sp", 4, q, cap)
        brute = count_involutions_bruteforce(G, "all")
        if q % 2 == 0:
            expected = sp_involution_poly(4)(q)
        else:
            expected = SP_ODD_CHAR_BRUTE[(4, q)]
        rows.append(SuiteRow("Sp", 4, q, "all", brute, expected,
                             brute == expected))
    return rows


def omega_agreement_suite(cap=None) -> list:
    """Cross-validation of the two Omega-membership criteria against the
    certified Omega subgroups, over every buildable orthogonal target."""
    cap = enumeration_cap(cap)
    out = []
    for fam, dim, q in _orthogonal_targets():
        spec = GroupSpec(fam, dim, "odd" if q % 2 else "even")
        if order_int(spec, q) > cap:
            continue
        G = _built(fam, dim, q, cap)
        if q % 2 == 0:
            out.append(_agreement_even(G))
        else:
            out.append(_agreement_odd(G))
    return out


def _agreement_even(G: IsometryGroup) -> AgreementRow:
    F, d = G.form.field, G.form.dim
    omega_mask = G.membership_mask(omega_subgroup(G))
    eye = _identity(d)
    mismatches = 0
    for i in range(G.order):
        pred = gauss_rank(F, F.add[eye, G.elements[i]]) % 2 == 0
        mismatches += pred != bool(omega_mask[i])
    return AgreementRow(G.label, "rank_parity", G.order, mismatches)


def _agreement_odd(G: IsometryGroup) -> AgreementRow:
    F, d, q = G.form.field, G.form.dim, G.q
    so = special_subgroup(G)
    omega = omega_subgroup(G)
    omega_mask = so.membership_mask(omega)
    inv_mask = so.involution_mask()
    gram = symmetric_gram(G.form)
    eye = _identity(d)
    tested = mismatches = 0
    for i in np.where(inv_mask)[0]:
        t = so.elements[i]
        ker = kernel_basis(F, F.add[t, eye])  # the (-1)-eigenspace
        d_eig = len(ker)
        if d_eig == 0:
            pred = True
        else:
            sub = mat_mul(F, mat_mul(F, ker, gram), ker.T.copy())
            pred = omega_class_membership(
                OmegaClassQuery(d_eig, witt_type(sub, q), q))
        tested += 1
        mismatches += pred != bool(omega_mask[i])
    return AgreementRow(G.label, "eigenspace_witt", tested, mismatches)
