"""Graded tensor powers ``X^{(x)k}`` of a presented superalgebra.

A basis tensor is a tuple of :class:`~supertruss.superalg.Monomial`.  Products
and permutations pick up Koszul signs computed by counting the odd factors that
cross each other.  Arity 0 is the base field, arity 1 is ``X`` itself.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .errors import AmbientMismatch
from .superalg import EVEN, Field, GeneratorSet, Monomial, SuperPoly, _render_sum, _Sparse

Key = tuple  # tuple[Monomial, ...]


def _crossing_sign(a: Key, b: Key) -> int:
    """(-1)^{sum_{i>j} |a_i||b_j|}: moving each b_j left past a_{j+1..k}."""
    n = 0
    odd_a_right = 0
    for j in range(len(a) - 1, -1, -1):
        if b[j].parity:
            n += odd_a_right
        if a[j].parity:
            odd_a_right += 1
    return -1 if n & 1 else 1


class TensorElement(_Sparse):
    __slots__ = ("gens", "field", "arity")

    def __init__(self, gens: GeneratorSet, field: Field, arity: int, terms: Mapping[Key, object] | None = None):
        self.gens = gens
        self.field = field
        self.arity = arity
        clean = {}
        for k, c in (terms or {}).items():
            k = tuple(k)
            if len(k) != arity:
                raise AmbientMismatch(f"tensor monomial of arity {len(k)} in arity-{arity} element")
            c = field.coerce(c)
            if c:
                clean[k] = c
        self.terms = clean

    def _ambient(self):
        return (self.gens, self.field, self.arity)

    def _new(self, terms):
        out = TensorElement.__new__(TensorElement)
        out.gens, out.field, out.arity, out.terms = self.gens, self.field, self.arity, terms
        return out

    def _scalar(self, c):
        return TensorElement.unit(self.gens, self.field, self.arity).scale(c)

    @staticmethod
    def _key_mul(a: Key, b: Key):
        sign = _crossing_sign(a, b)
        out = []
        for x, y in zip(a, b):
            r = x.mul(y)
            if r is None:
                return None
            s, m = r
            sign *= s
            out.append(m)
        return sign, tuple(out)

    # construction -------------------------------------------------------

    @classmethod
    def unit(cls, gens: GeneratorSet, field: Field, arity: int) -> "TensorElement":
        return cls(gens, field, arity, {(gens.unit_monomial(),) * arity: 1})

    @classmethod
    def zero(cls, gens: GeneratorSet, field: Field, arity: int) -> "TensorElement":
        return cls(gens, field, arity, {})

    @classmethod
    def from_poly(cls, p: SuperPoly) -> "TensorElement":
        return cls(p.gens, p.field, 1, {(m,): c for m, c in p.terms.items()})

    @classmethod
    def pure(cls, *factors: SuperPoly) -> "TensorElement":
        """``f1 # f2 # ...`` for arity-1 factors (expanded, no signs)."""
        if not factors:
            raise ValueError("pure() needs at least one factor")
        out = cls.from_poly(factors[0])
        for f in factors[1:]:
            out = outer(out, cls.from_poly(f))
        return out

    def to_poly(self) -> SuperPoly:
        if self.arity != 1:
            raise AmbientMismatch(f"arity-{self.arity} tensor is not an algebra element")
        return SuperPoly(self.gens, self.field, {k[0]: c for k, c in self.terms.items()})

    def to_scalar(self):
        if self.arity != 0:
            raise AmbientMismatch(f"arity-{self.arity} tensor is not a scalar")
        return self.terms.get((), self.field.zero)

    # queries ------------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Key, object]]:
        return sorted(self.terms.items(), key=lambda kv: tuple(m.key() for m in kv[0]), reverse=True)

    def __str__(self) -> str:
        pieces = [(c, " # ".join(m.render(self.gens) for m in k) or "1") for k, c in self.sorted_terms()]
        return _render_sum(pieces, self.field)

    def homogeneous_parity(self) -> int | None:
        ps = {sum(m.parity for m in k) & 1 for k in self.terms}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else EVEN


def _check_same(a: TensorElement, b: TensorElement) -> None:
    if (a.gens, a.field) != (b.gens, b.field):
        raise AmbientMismatch("tensor factors over different presentations")


def tensor_mul(a: TensorElement, b: TensorElement) -> TensorElement:
    return a * b


def outer(a: TensorElement, b: TensorElement) -> TensorElement:
    """Concatenate tensor factors: ``(a1#..#ak) , (b1#..#bl) -> a1#..#ak#b1#..#bl``."""
    _check_same(a, b)
    f = a.field
    out: dict = {}
    for ka, ca in a.terms.items():
        for kb, cb in b.terms.items():
            k = ka + kb
            v = f.norm(out.get(k, 0) + ca * cb)
            if v:
                out[k] = v
            else:
                out.pop(k, None)
    res = TensorElement.__new__(TensorElement)
    res.gens, res.field, res.arity, res.terms = a.gens, f, a.arity + b.arity, out
    return res


def _map_terms(t: TensorElement, arity: int, fn) -> TensorElement:
    """Apply ``fn(key) -> (sign, key) | None`` termwise and re-accumulate."""
    f = t.field
    out: dict = {}
    for k, c in t.terms.items():
        r = fn(k)
        if r is None:
            continue
        sign, nk = r
        v = f.norm(out.get(nk, 0) + sign * c)
        if v:
            out[nk] = v
        else:
            out.pop(nk, None)
    res = TensorElement.__new__(TensorElement)
    res.gens, res.field, res.arity, res.terms = t.gens, f, arity, out
    return res


def permutation_sign(perm: Sequence[int], key: Key, graded: bool = True) -> int:
    """Koszul sign of placing input factor ``perm[p]`` (0-based) at output slot ``p``."""
    if not graded:
        return 1
    n = 0
    k = len(perm)
    for p in range(k):
        for q in range(p + 1, k):
            i, j = perm[q], perm[p]  # j is placed before i
            if j > i and key[i].parity and key[j].parity:
                n += 1
    return -1 if n & 1 else 1


def koszul_permute(perm: Sequence[int], t: TensorElement, graded: bool = True) -> TensorElement:
    """Rearrange tensor factors; ``perm`` lists, 1-based, which input factor lands in each slot.

    ``koszul_permute((3, 2, 1), t)`` is the graded swap of factors 1 and 3.
    With ``graded=False`` the plain (unsigned) rearrangement is returned.
    """
    if sorted(perm) != list(range(1, t.arity + 1)):
        raise AmbientMismatch(f"{tuple(perm)} is not a permutation of 1..{t.arity}")
    p0 = [i - 1 for i in perm]

    def fn(k):
        return permutation_sign(p0, k, graded), tuple(k[i] for i in p0)

    return _map_terms(t, t.arity, fn)


def sigma13(t: TensorElement, graded: bool = True) -> TensorElement:
    if t.arity != 3:
        raise AmbientMismatch("sigma13 acts on arity-3 tensors")
    return koszul_permute((3, 2, 1), t, graded)


def _product(ms: Sequence[Monomial]) -> tuple[int, Monomial] | None:
    sign = 1
    acc = ms[0]
    for m in ms[1:]:
        r = acc.mul(m)
        if r is None:
            return None
        s, acc = r
        sign *= s
    return sign, acc


def collapse(t: TensorElement, sizes: Sequence[int]) -> TensorElement:
    """Multiply consecutive blocks of factors, e.g. ``sizes=(1, 2)`` is ``1 (x) m``.

    Adjacent factors are multiplied in order, so no Koszul sign arises beyond the
    sign of normal-forming each product.
    """
    if sum(sizes) != t.arity:
        raise AmbientMismatch(f"block sizes {tuple(sizes)} do not cover arity {t.arity}")
    unit = t.gens.unit_monomial()

    def fn(k):
        sign, out, pos = 1, [], 0
        for s in sizes:
            if s == 0:
                out.append(unit)
                continue
            r = _product(k[pos:pos + s])
            if r is None:
                return None
            sign *= r[0]
            out.append(r[1])
            pos += s
        return sign, tuple(out)

    return _map_terms(t, len(sizes), fn)


def mult_collapse(i: int, t: TensorElement) -> SuperPoly:
    """``m^(i)``: the ordered product of all ``i`` tensor factors."""
    if t.arity != i:
        raise AmbientMismatch(f"m^({i}) applied to an arity-{t.arity} tensor")
    if i == 0:
        return SuperPoly.constant(t.gens, t.field, t.to_scalar())
    return collapse(t, (i,)).to_poly()


def _eps(k: Key) -> int:
    p = [m.parity for m in k]
    # positions are 1-based in the usual statement: x2 x3 + x5 x4 + x5 x2
    e = p[1] * p[2] + p[4] * p[3] + p[4] * p[1]
    return -1 if e & 1 else 1


def m135(t: TensorElement) -> TensorElement:
    """``x1#..#x6 -> (-1)^eps (x1 x3 x5) # x2 # x4 # x6``."""
    if t.arity != 6:
        raise AmbientMismatch("m135 acts on arity-6 tensors")

    def fn(k):
        r = _product((k[0], k[2], k[4]))
        if r is None:
            return None
        return _eps(k) * r[0], (r[1], k[1], k[3], k[5])

    return _map_terms(t, 4, fn)


def m246(t: TensorElement) -> TensorElement:
    """``x1#..#x6 -> (-1)^eps x1 # x3 # x5 # (x2 x4 x6)``."""
    if t.arity != 6:
        raise AmbientMismatch("m246 acts on arity-6 tensors")

    def fn(k):
        r = _product((k[1], k[3], k[5]))
        if r is None:
            return None
        return _eps(k) * r[0], (k[0], k[2], k[4], r[1])

    return _map_terms(t, 4, fn)


def project_even(t: TensorElement, gens: GeneratorSet) -> TensorElement:
    """Drop every term with an odd generator in any factor and re-home on ``gens``.

    ``gens`` must be the even part of ``t.gens`` (same even generators, same order).
    """
    out = {}
    for k, c in t.terms.items():
        if any(m.odd for m in k):
            continue
        out[tuple(Monomial(m.exps, 0) for m in k)] = c
    return TensorElement(gens, t.field, t.arity, out)
