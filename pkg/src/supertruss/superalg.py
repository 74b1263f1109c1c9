"""Exact arithmetic in free supercommutative superalgebras and Grassmann algebras.

Base fields are the rationals (``QQ``) and prime fields (``GF(p)``).  Elements of
a presented algebra are sparse maps from :class:`Monomial` to scalars; odd
generators are Grassmann (square zero) and invertible even generators carry
signed (Laurent) exponents, so every element has a unique normal form without
any rewriting.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

from .errors import AmbientMismatch, NotInvertible

EVEN, ODD = 0, 1


# ---------------------------------------------------------------------------
# scalars


class Field:
    """A base field.  Scalars are plain Python values normalised by :meth:`norm`."""

    finite = False
    characteristic = 0

    def norm(self, value):
        raise NotImplementedError

    def coerce(self, value):
        raise NotImplementedError

    def inv(self, value):
        raise NotImplementedError

    def render(self, value) -> str:
        return str(value)

    @property
    def zero(self):
        return self.coerce(0)

    @property
    def one(self):
        return self.coerce(1)

    @property
    def sign_blind(self) -> bool:
        """True in characteristic 2, where every Koszul sign is invisible."""
        return self.characteristic == 2


@dataclass(frozen=True)
class Rationals(Field):
    name: str = "QQ"

    def norm(self, value):
        return value if isinstance(value, Fraction) else Fraction(value)

    def coerce(self, value):
        if isinstance(value, str):
            return Fraction(value.strip())
        if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
            raise TypeError(f"cannot coerce {value!r} into QQ")
        return Fraction(value)

    def inv(self, value):
        if value == 0:
            raise NotInvertible("0 is not invertible")
        return 1 / Fraction(value)

    def random(self, rng: random.Random, bound: int = 5):
        return Fraction(rng.randint(-bound, bound))

    def __str__(self) -> str:
        return "QQ"


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


@dataclass(frozen=True)
class PrimeField(Field):
    p: int
    finite = True

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def characteristic(self) -> int:  # type: ignore[override]
        return self.p

    def norm(self, value):
        return value % self.p

    def coerce(self, value):
        if isinstance(value, str):
            value = Fraction(value.strip())
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise NotInvertible(f"denominator of {value} vanishes mod {self.p}")
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        if isinstance(value, bool) or not isinstance(value, int):
            raise TypeError(f"cannot coerce {value!r} into GF({self.p})")
        return value % self.p

    def inv(self, value):
        if value % self.p == 0:
            raise NotInvertible(f"0 is not invertible in GF({self.p})")
        return pow(value, -1, self.p)

    def elements(self) -> range:
        return range(self.p)

    def random(self, rng: random.Random, bound: int = 0):
        return rng.randrange(self.p)

    def __str__(self) -> str:
        return f"GF({self.p})"


QQ = Rationals()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_spec(text: str) -> Field:
    """Parse ``qq``/``QQ`` or ``fp:P``/``FP P`` into a field."""
    t = text.strip()
    if t.lower() == "qq":
        return QQ
    low = t.lower()
    for prefix in ("fp:", "fp ", "gf:", "gf "):
        if low.startswith(prefix):
            return GF(int(t[len(prefix):].strip()))
    raise ValueError(f"unknown field {text!r}")


# ---------------------------------------------------------------------------
# generators and monomials


@dataclass(frozen=True)
class Generator:
    name: str
    parity: int = EVEN
    inverse: str | None = None

    @property
    def invertible(self) -> bool:
        return self.inverse is not None


class GeneratorSet:
    """Ordered generators; the order fixes the canonical monomial order.

    Even generators are indexed among themselves (exponent vector slots) and odd
    generators among themselves (bits of the odd-support mask).
    """

    __slots__ = ("gens", "even", "odd", "_lookup")

    def __init__(self, gens: Iterable[Generator]):
        gens = tuple(gens)
        seen: set[str] = set()
        for g in gens:
            for nm in (g.name, g.inverse):
                if nm is None:
                    continue
                if nm in seen:
                    raise ValueError(f"duplicate generator name {nm!r}")
                seen.add(nm)
            if g.invertible and g.parity != EVEN:
                raise ValueError(f"odd generator {g.name!r} cannot be invertible")
        self.gens = gens
        self.even = tuple(g for g in gens if g.parity == EVEN)
        self.odd = tuple(g for g in gens if g.parity == ODD)
        lookup: dict[str, tuple[int, int, int]] = {}
        for i, g in enumerate(self.even):
            lookup[g.name] = (EVEN, i, 1)
            if g.inverse:
                lookup[g.inverse] = (EVEN, i, -1)
        for i, g in enumerate(self.odd):
            lookup[g.name] = (ODD, i, 1)
        self._lookup = lookup

    @classmethod
    def of(cls, *specs: str) -> "GeneratorSet":
        """Shorthand: ``GeneratorSet.of("x", "theta:odd", "y:inv=yi")``."""
        out = []
        for s in specs:
            name, _, rest = s.partition(":")
            parity, inverse = EVEN, None
            for opt in filter(None, rest.split(",")):
                if opt == "odd":
                    parity = ODD
                elif opt.startswith("inv="):
                    inverse = opt[4:]
            out.append(Generator(name, parity, inverse))
        return cls(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, GeneratorSet) and self.gens == other.gens

    def __hash__(self) -> int:
        return hash(self.gens)

    def __repr__(self) -> str:
        return f"GeneratorSet({', '.join(g.name for g in self.gens)})"

    def __iter__(self) -> Iterator[Generator]:
        return iter(self.gens)

    def __len__(self) -> int:
        return len(self.gens)

    def names(self) -> list[str]:
        """All names that need an image under a homomorphism, inverses included."""
        out = []
        for g in self.gens:
            out.append(g.name)
            if g.inverse:
                out.append(g.inverse)
        return out

    def locate(self, name: str) -> tuple[int, int, int]:
        """Return ``(parity, index, exponent sign)`` for a generator or inverse name."""
        try:
            return self._lookup[name]
        except KeyError:
            raise KeyError(f"unknown generator {name!r}") from None

    def parity_of(self, name: str) -> int:
        return self.locate(name)[0]

    def monomial(self, name: str, power: int = 1) -> "Monomial":
        par, i, sgn = self.locate(name)
        if par == ODD:
            if power == 0:
                return self.unit_monomial()
            if power != 1:
                raise ValueError(f"odd generator {name!r} only admits exponent 0 or 1")
            return Monomial((0,) * len(self.even), 1 << i)
        e = sgn * power
        if e < 0 and not self.even[i].invertible:
            raise ValueError(f"negative power of non-invertible generator {name!r}")
        exps = [0] * len(self.even)
        exps[i] = e
        return Monomial(tuple(exps), 0)

    def unit_monomial(self) -> "Monomial":
        return Monomial((0,) * len(self.even), 0)

    def without_odd(self) -> "GeneratorSet":
        return GeneratorSet(self.even)


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def bits(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def merge_sign(a: int, b: int) -> int:
    """Sign of sorting the concatenation of two disjoint ascending index sets."""
    n = 0
    j = 0
    while b:
        if b & 1:
            n += popcount(a >> (j + 1))
        b >>= 1
        j += 1
    return -1 if n & 1 else 1


@dataclass(frozen=True, slots=True)
class Monomial:
    """``prod x_i^exps[i] * theta_{j1} ... theta_{jr}`` with ``j1 < ... < jr``.

    ``odd`` is a bitmask over the odd generators, so repeats cannot be stored.
    """

    exps: tuple[int, ...]
    odd: int = 0

    @property
    def odd_support(self) -> tuple[int, ...]:
        return bits(self.odd)

    @property
    def parity(self) -> int:
        return popcount(self.odd) & 1

    @property
    def is_unit(self) -> bool:
        return self.odd == 0 and not any(self.exps)

    def key(self):
        return (self.exps, self.odd_support)

    def mul(self, other: "Monomial") -> tuple[int, "Monomial"] | None:
        if self.odd & other.odd:
            return None
        exps = tuple(a + b for a, b in zip(self.exps, other.exps))
        return merge_sign(self.odd, other.odd), Monomial(exps, self.odd | other.odd)

    def render(self, gens: GeneratorSet) -> str:
        parts = []
        for g, e in zip(gens.even, self.exps):
            if e == 1:
                parts.append(g.name)
            elif e:
                parts.append(f"{g.name}^{e}")
        parts.extend(gens.odd[i].name for i in self.odd_support)
        return "*".join(parts) if parts else "1"


# ---------------------------------------------------------------------------
# shared sparse-combination machinery


def _render_sum(pieces: list[tuple[object, str]], field: Field) -> str:
    """Join ``(coefficient, basis text)`` pairs; basis text ``"1"`` means scalar."""
    if not pieces:
        return "0"
    out: list[str] = []
    for c, basis in pieces:
        txt = field.render(c)
        neg = txt.startswith("-")
        mag = txt[1:] if neg else txt
        if basis == "1":
            term = mag
        elif mag == "1":
            term = basis
        else:
            term = f"{mag}*{basis}"
        if not out:
            out.append(("-" if neg else "") + term)
        else:
            out.append((" - " if neg else " + ") + term)
    return "".join(out)


class _Sparse:
    """Immutable finite linear combination with coefficients in ``self.field``."""

    __slots__ = ("terms",)
    terms: dict

    # subclasses provide: field, _ambient(), _new(terms), _key_mul(k1, k2)

    def _check(self, other) -> None:
        if type(other) is not type(self) or other._ambient() != self._ambient():
            raise AmbientMismatch(f"cannot combine {self._describe()} with {_describe(other)}")

    def _describe(self) -> str:
        return f"{type(self).__name__} over {self._ambient()!r}"

    def _lift(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._scalar(other)
        return other

    def __add__(self, other):
        other = self._lift(other)
        self._check(other)
        f = self.field
        terms = dict(self.terms)
        for k, c in other.terms.items():
            v = f.norm(terms.get(k, 0) + c)
            if v:
                terms[k] = v
            else:
                terms.pop(k, None)
        return self._new(terms)

    __radd__ = __add__

    def __neg__(self):
        f = self.field
        return self._new({k: f.norm(-c) for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c):
        f = self.field
        c = f.coerce(c)
        if not c:
            return self._new({})
        out = {}
        for k, v in self.terms.items():
            w = f.norm(v * c)
            if w:
                out[k] = w
        return self._new(out)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        self._check(other)
        f = self.field
        out: dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                r = self._key_mul(k1, k2)
                if r is None:
                    continue
                sign, k = r
                v = f.norm(out.get(k, 0) + sign * c1 * c2)
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
        return self._new(out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = self._scalar(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = self._scalar(other)
        if type(other) is not type(self):
            return NotImplemented
        return self._ambient() == other._ambient() and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self._ambient(), frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self})"


def _describe(x) -> str:
    if isinstance(x, _Sparse):
        return x._describe()
    return type(x).__name__


# ---------------------------------------------------------------------------
# presented superalgebra elements


class SuperPoly(_Sparse):
    """Element of the free supercommutative (optionally Laurent) algebra on ``gens``."""

    __slots__ = ("gens", "field")

    def __init__(self, gens: GeneratorSet, field: Field, terms: Mapping[Monomial, object] | None = None):
        self.gens = gens
        self.field = field
        clean = {}
        for m, c in (terms or {}).items():
            c = field.coerce(c)
            if c:
                clean[m] = c
        self.terms = clean

    def _ambient(self):
        return (self.gens, self.field)

    def _new(self, terms):
        out = SuperPoly.__new__(SuperPoly)
        out.gens, out.field, out.terms = self.gens, self.field, terms
        return out

    def _scalar(self, c):
        return SuperPoly.constant(self.gens, self.field, c)

    @staticmethod
    def _key_mul(a: Monomial, b: Monomial):
        return a.mul(b)

    @classmethod
    def constant(cls, gens: GeneratorSet, field: Field, c=1) -> "SuperPoly":
        return cls(gens, field, {gens.unit_monomial(): c})

    @classmethod
    def gen(cls, gens: GeneratorSet, field: Field, name: str, power: int = 1) -> "SuperPoly":
        return cls(gens, field, {gens.monomial(name, power): 1})

    def sorted_terms(self) -> list[tuple[Monomial, object]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0].key(), reverse=True)

    def __str__(self) -> str:
        return _render_sum([(c, m.render(self.gens)) for m, c in self.sorted_terms()], self.field)

    def parity_parts(self) -> tuple["SuperPoly", "SuperPoly"]:
        ev = {m: c for m, c in self.terms.items() if m.parity == EVEN}
        od = {m: c for m, c in self.terms.items() if m.parity == ODD}
        return self._new(ev), self._new(od)

    def homogeneous_parity(self) -> int | None:
        """Parity if homogeneous (0 counts as both: returns 0), else ``None``."""
        ps = {m.parity for m in self.terms}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else EVEN

    def scalar_part(self):
        return self.terms.get(self.gens.unit_monomial(), 0)


def poly_mul(a: SuperPoly, b: SuperPoly) -> SuperPoly:
    return a * b


def poly_parity(a: SuperPoly) -> tuple[SuperPoly, SuperPoly]:
    return a.parity_parts()


# ---------------------------------------------------------------------------
# Grassmann test algebras


@lru_cache(maxsize=None)
def _grassmann_table(n: int) -> tuple[tuple[tuple[int, int] | None, ...], ...]:
    size = 1 << n
    return tuple(
        tuple(None if a & b else (merge_sign(a, b), a | b) for b in range(size))
        for a in range(size)
    )


def _subset_key(mask: int):
    return (popcount(mask), bits(mask))


@dataclass(frozen=True)
class GrassmannAlgebra:
    """The Grassmann algebra on ``n`` odd generators ``xi1 .. xin`` over ``field``."""

    field: Field
    n: int
    prefix: str = dc_field(default="xi", compare=False)

    @property
    def dim(self) -> int:
        return 1 << self.n

    def basis(self, parity: int | None = None) -> list[int]:
        masks = sorted(range(self.dim), key=_subset_key)
        if parity is None:
            return masks
        return [m for m in masks if popcount(m) & 1 == parity]

    def element(self, terms: Mapping[int, object] | None = None) -> "GrassmannElement":
        return GrassmannElement(self, terms or {})

    def zero(self) -> "GrassmannElement":
        return GrassmannElement(self, {})

    def one(self) -> "GrassmannElement":
        return self.scalar(1)

    def scalar(self, c) -> "GrassmannElement":
        return GrassmannElement(self, {0: c})

    def xi(self, i: int) -> "GrassmannElement":
        if not 1 <= i <= self.n:
            raise IndexError(f"xi{i} outside 1..{self.n}")
        return GrassmannElement(self, {1 << (i - 1): 1})

    def enumerate(self, parity: int) -> Iterator["GrassmannElement"]:
        """All elements of the even or odd part, in a fixed deterministic order."""
        if not self.field.finite:
            from .errors import InfiniteBase

            raise InfiniteBase("cannot enumerate a Grassmann algebra over QQ")
        masks = self.basis(parity)
        for coeffs in itertools.product(self.field.elements(), repeat=len(masks)):
            yield GrassmannElement(self, dict(zip(masks, coeffs)))

    def count(self, parity: int) -> int:
        if not self.field.finite:
            return -1
        return self.field.p ** len(self.basis(parity))

    def random(self, rng: random.Random, parity: int, bound: int = 5) -> "GrassmannElement":
        return GrassmannElement(self, {m: self.field.random(rng, bound) for m in self.basis(parity)})

    def __str__(self) -> str:
        return f"Lambda{self.n}({self.field})"


class GrassmannElement(_Sparse):
    __slots__ = ("algebra",)

    def __init__(self, algebra: GrassmannAlgebra, terms: Mapping[int, object]):
        self.algebra = algebra
        f = algebra.field
        clean = {}
        for m, c in terms.items():
            if not 0 <= m < algebra.dim:
                raise ValueError(f"basis mask {m} outside Lambda{algebra.n}")
            c = f.coerce(c)
            if c:
                clean[m] = c
        self.terms = clean

    @property
    def field(self) -> Field:
        return self.algebra.field

    def _ambient(self):
        return self.algebra

    def _new(self, terms):
        out = GrassmannElement.__new__(GrassmannElement)
        out.algebra, out.terms = self.algebra, terms
        return out

    def _scalar(self, c):
        return self.algebra.scalar(c)

    def _key_mul(self, a: int, b: int):
        return _grassmann_table(self.algebra.n)[a][b]

    def __str__(self) -> str:
        p = self.algebra.prefix
        pieces = []
        for m in sorted(self.terms, key=_subset_key):
            basis = "*".join(f"{p}{i + 1}" for i in bits(m)) or "1"
            pieces.append((self.terms[m], basis))
        return _render_sum(pieces, self.field)

    def scalar_part(self):
        return self.terms.get(0, self.field.zero)

    def parity_parts(self) -> tuple["GrassmannElement", "GrassmannElement"]:
        ev = {m: c for m, c in self.terms.items() if popcount(m) % 2 == 0}
        od = {m: c for m, c in self.terms.items() if popcount(m) % 2 == 1}
        return self._new(ev), self._new(od)

    def is_homogeneous(self, parity: int) -> bool:
        return all(popcount(m) & 1 == parity for m in self.terms)

    def homogeneous_parity(self) -> int | None:
        ps = {popcount(m) & 1 for m in self.terms}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else EVEN

    def dense(self) -> list:
        return [self.terms.get(m, 0) for m in range(self.algebra.dim)]

    def inverse(self) -> "GrassmannElement":
        return grassmann_inverse(self)


def grassmann_mul(a: GrassmannElement, b: GrassmannElement) -> GrassmannElement:
    return a * b


def grassmann_inverse(a: GrassmannElement) -> GrassmannElement:
    """Two-sided inverse via the terminating series ``c^-1 sum (-c^-1 nil)^k``."""
    f = a.field
    c = a.scalar_part()
    if not c:
        raise NotInvertible(f"{a} has zero scalar part")
    cinv = f.inv(c)
    nil = a - a.algebra.scalar(c)
    step = nil.scale(f.norm(-cinv))
    out = a.algebra.one()
    power = a.algebra.one()
    for _ in range(a.algebra.n):
        power = power * step
        if not power:
            break
        out = out + power
    return out.scale(cinv)
