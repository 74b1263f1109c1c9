"""Superalgebra homomorphisms given by their values on generators.

A :class:`GenHom` sends every generator name (inverse names included) of a
presented algebra to an element of a target: a tensor power of some presented
algebra (:class:`TensorTarget`, arity 0 being the base field) or a Grassmann test
algebra.  All maps are parity preserving, so tensoring them never costs a sign.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence, Union

from .errors import (
    AmbientMismatch,
    GrassmannRelationViolation,
    InvertibilityViolation,
    ParityViolation,
)
from .superalg import EVEN, ODD, Field, GeneratorSet, GrassmannAlgebra, GrassmannElement, Monomial, SuperPoly
from .tensor import TensorElement, outer


@dataclass(frozen=True)
class TensorTarget:
    """``Y^{(x)arity}`` for a presented algebra ``Y``; arity 0 is the base field."""

    gens: GeneratorSet
    field: Field
    arity: int

    def one(self) -> TensorElement:
        return TensorElement.unit(self.gens, self.field, self.arity)

    def zero(self) -> TensorElement:
        return TensorElement.zero(self.gens, self.field, self.arity)

    def __str__(self) -> str:
        names = ",".join(g.name for g in self.gens) or "-"
        return f"X[{names}]^{self.arity}"


Target = Union[TensorTarget, GrassmannAlgebra]


def _target_of(el) -> Target:
    if isinstance(el, TensorElement):
        return TensorTarget(el.gens, el.field, el.arity)
    if isinstance(el, GrassmannElement):
        return el.algebra
    raise TypeError(f"unsupported image type {type(el).__name__}")


def _as_source(a, source: GeneratorSet) -> SuperPoly:
    if isinstance(a, TensorElement):
        a = a.to_poly()
    if not isinstance(a, SuperPoly) or a.gens != source:
        raise AmbientMismatch("element does not belong to the source of the homomorphism")
    return a


class GenHom:
    """Homomorphism out of the free algebra on ``source``, fixed by generator images."""

    __slots__ = ("source", "field", "target", "images", "_key")

    def __init__(self, source: GeneratorSet, field: Field, target: Target, images: Mapping[str, object]):
        names = source.names()
        missing = [n for n in names if n not in images]
        if missing:
            raise ValueError(f"no image given for generator(s) {', '.join(missing)}")
        extra = sorted(set(images) - set(names))
        if extra:
            raise ValueError(f"images given for unknown generator(s) {', '.join(extra)}")
        imgs = {}
        for n in names:
            img = images[n]
            if isinstance(target, TensorTarget) and isinstance(img, SuperPoly) and target.arity == 1:
                img = TensorElement.from_poly(img)
            if _target_of(img) != target:
                raise AmbientMismatch(f"image of {n!r} does not live in {target}")
            imgs[n] = img
        self.source = source
        self.field = field
        self.target = target
        self.images = imgs
        self._key = (source, field, target, tuple(imgs[n] for n in names))

    def __eq__(self, other) -> bool:
        return isinstance(other, GenHom) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        body = ", ".join(f"{n} -> {self.images[n]}" for n in self.source.names())
        return f"GenHom({body})"

    def __call__(self, a):
        return apply(self, a)


class _MonomialImages:
    """Memoised images of monomials and generator powers under one hom."""

    def __init__(self, h: GenHom):
        self.h = h
        self.one = h.target.one()
        self.powers: dict[tuple[str, int], object] = {}
        self.monos: dict[Monomial, object] = {}

    def power(self, name: str, e: int):
        key = (name, e)
        got = self.powers.get(key)
        if got is None:
            got = self.one
            base = self.h.images[name]
            for _ in range(e):
                got = got * base
            self.powers[key] = got
        return got

    def __call__(self, m: Monomial):
        got = self.monos.get(m)
        if got is not None:
            return got
        src = self.h.source
        acc = self.one
        for g, e in zip(src.even, m.exps):
            if e > 0:
                acc = acc * self.power(g.name, e)
            elif e < 0:
                acc = acc * self.power(g.inverse, -e)
        for i in m.odd_support:
            acc = acc * self.h.images[src.odd[i].name]
        self.monos[m] = acc
        return acc


def apply(h: GenHom, a, _cache: _MonomialImages | None = None):
    """Extend ``h`` multiplicatively and linearly to the element ``a``."""
    a = _as_source(a, h.source)
    imgs = _cache or _MonomialImages(h)
    out = h.target.zero()
    for m, c in a.terms.items():
        out = out + imgs(m).scale(c)
    return out


def check_well_defined(h: GenHom) -> None:
    """Raise on the first generator whose image breaks a defining relation.

    Checks parity preservation, ``h(theta)^2 = 0`` for odd generators, and
    ``h(x) h(x^-1) = 1`` for invertible pairs, in generator order.
    """
    src = h.source
    for g in src.gens:
        img = h.images[g.name]
        if img.homogeneous_parity() != g.parity and not img.is_zero():
            raise ParityViolation(g.name, f"image {img} is not {'odd' if g.parity else 'even'}")
        if g.inverse:
            inv = h.images[g.inverse]
            if inv.homogeneous_parity() != EVEN and not inv.is_zero():
                raise ParityViolation(g.inverse, f"image {inv} is not even")
    for g in src.odd:
        img = h.images[g.name]
        sq = img * img
        if not sq.is_zero():
            raise GrassmannRelationViolation(g.name, f"image squares to {sq}, not 0")
    one = h.target.one()
    for g in src.even:
        if not g.inverse:
            continue
        a, b = h.images[g.name], h.images[g.inverse]
        if a * b != one or b * a != one:
            raise InvertibilityViolation(g.name, f"images {a} and {b} are not mutually inverse")


def is_well_defined(h: GenHom) -> bool:
    try:
        check_well_defined(h)
    except (ParityViolation, GrassmannRelationViolation, InvertibilityViolation):
        return False
    return True


def identity(gens: GeneratorSet, field: Field) -> GenHom:
    images = {n: TensorElement(gens, field, 1, {(gens.monomial(n),): 1}) for n in gens.names()}
    return GenHom(gens, field, TensorTarget(gens, field, 1), images)


def compose(g: GenHom, h: GenHom) -> GenHom:
    """``g o h``: first ``h``, then ``g``; ``h`` must land in arity 1 over ``g.source``."""
    t = h.target
    if not (isinstance(t, TensorTarget) and t.arity == 1 and t.gens == g.source and t.field == g.field):
        raise AmbientMismatch("codomain of the inner map is not the domain of the outer map")
    cache = _MonomialImages(g)
    return GenHom(h.source, h.field, g.target, {n: apply(g, img, cache) for n, img in h.images.items()})


class TensorHom:
    """``h1 (x) ... (x) hk`` acting factorwise on ``X^{(x)k}``."""

    __slots__ = ("homs", "source", "field", "gens_out", "arity_out")

    def __init__(self, homs: Sequence[GenHom]):
        if not homs:
            raise ValueError("tensor_hom needs at least one map")
        src = {(h.source, h.field) for h in homs}
        if len(src) != 1:
            raise AmbientMismatch("tensor_hom factors have different sources")
        outs = set()
        for h in homs:
            if not isinstance(h.target, TensorTarget):
                raise AmbientMismatch("tensor_hom factors must land in tensor powers")
            outs.add((h.target.gens, h.target.field))
        if len(outs) != 1:
            raise AmbientMismatch("tensor_hom factors land in different algebras")
        self.homs = tuple(homs)
        self.source, self.field = src.pop()
        self.gens_out = homs[0].target.gens
        self.arity_out = sum(h.target.arity for h in homs)

    def __call__(self, t: TensorElement) -> TensorElement:
        if t.arity != len(self.homs) or t.gens != self.source:
            raise AmbientMismatch(f"tensor_hom of {len(self.homs)} maps applied to arity {t.arity}")
        caches = [_MonomialImages(h) for h in self.homs]
        out = TensorElement.zero(self.gens_out, self.field, self.arity_out)
        for key, c in t.terms.items():
            piece = caches[0](key[0])
            for cache, m in zip(caches[1:], key[1:]):
                piece = outer(piece, cache(m))
            out = out + piece.scale(c)
        return out


def tensor_hom(*homs: GenHom) -> TensorHom:
    return TensorHom(homs)


def scalar_hom(gens: GeneratorSet, field: Field, values: Mapping[str, object]) -> GenHom:
    """A character ``X -> K`` from scalar values on generators."""
    tgt = TensorTarget(gens, field, 0)
    return GenHom(gens, field, tgt, {n: TensorElement(gens, field, 0, {(): v}) for n, v in values.items()})


def hom_from_polys(source: GeneratorSet, field: Field, images: Mapping[str, SuperPoly]) -> GenHom:
    """An endomorphism-style map ``X -> Y`` from arity-1 images."""
    some = next(iter(images.values()))
    tgt = TensorTarget(some.gens, field, 1)
    return GenHom(source, field, tgt, {n: TensorElement.from_poly(p) for n, p in images.items()})


__all__ = [
    "EVEN",
    "ODD",
    "GenHom",
    "TensorHom",
    "TensorTarget",
    "apply",
    "check_well_defined",
    "compose",
    "hom_from_polys",
    "identity",
    "is_well_defined",
    "scalar_hom",
    "tensor_hom",
]
