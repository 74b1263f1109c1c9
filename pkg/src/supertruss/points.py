"""The functor of points: homomorphisms ``X -> Lambda_n`` and the truss they form.

Points are evaluated symbolically (exact, any field).  Over a prime field the
whole point set can be enumerated, and :class:`PointTable` then compiles the
product and heap operations into integer tables with a vectorised evaluator, so
that identities are checked by table lookups.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .cotruss import CotrussPresentation
from .errors import AmbientMismatch, BudgetExceeded, InfiniteBase, MissingMap
from .homs import GenHom, _MonomialImages, check_well_defined
from .superalg import EVEN, ODD, GrassmannAlgebra, GrassmannElement, grassmann_inverse, popcount
from .tensor import TensorElement

DEFAULT_BUDGET = 10_000_000
LITERAL_CAP = 1_000_000

TestAlgebra = GrassmannAlgebra


# ---------------------------------------------------------------------------
# points


class Point:
    """A parity-preserving homomorphism from a presentation into a Grassmann algebra."""

    __slots__ = ("presentation", "algebra", "images", "_key", "_hom", "_monos")

    def __init__(self, P: CotrussPresentation, A: GrassmannAlgebra, images: Mapping[str, GrassmannElement], check: bool = True):
        if A.field != P.field:
            raise AmbientMismatch(f"test algebra over {A.field}, presentation over {P.field}")
        names = P.gens.names()
        self.presentation = P
        self.algebra = A
        self.images = {n: images[n] for n in names}
        self._key = tuple(self.images[n] for n in names)
        self._hom = None
        self._monos = None
        if check:
            check_well_defined(self.hom)

    @property
    def hom(self) -> GenHom:
        if self._hom is None:
            self._hom = GenHom(self.presentation.gens, self.presentation.field, self.algebra, self.images)
        return self._hom

    def monomial(self, m):
        if self._monos is None:
            self._monos = _MonomialImages(self.hom)
        return self._monos(m)

    def __getitem__(self, name: str) -> GrassmannElement:
        return self.images[name]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Point):
            return NotImplemented
        return (
            self._key == other._key
            and self.algebra == other.algebra
            and (self.presentation is other.presentation or self.presentation == other.presentation)
        )

    def __hash__(self) -> int:
        return hash(self._key)

    def __str__(self) -> str:
        return "(" + ", ".join(f"{g.name}: {self.images[g.name]}" for g in self.presentation.gens) + ")"

    __repr__ = __str__

    def to_dict(self) -> dict[str, str]:
        return {n: str(self.images[n]) for n in self.presentation.gens.names()}


def _same_context(*pts: Point) -> None:
    p0 = pts[0]
    for q in pts[1:]:
        if q.algebra != p0.algebra or not (q.presentation is p0.presentation or q.presentation == p0.presentation):
            raise AmbientMismatch("points belong to different presentations or test algebras")


def evaluate(points: Sequence[Point], t: TensorElement) -> GrassmannElement:
    """``m^(k) o (s1 # ... # sk)`` applied to ``t``; no crossing signs since points are even maps."""
    A = points[0].algebra
    out = A.zero()
    for key, c in t.terms.items():
        acc = points[0].monomial(key[0])
        for p, m in zip(points[1:], key[1:]):
            acc = acc * p.monomial(m)
        out = out + acc.scale(c)
    return out


def point_mul(s: Point, t: Point) -> Point:
    _same_context(s, t)
    d2 = s.presentation.delta2
    return Point(s.presentation, s.algebra, {n: evaluate((s, t), d2.images[n]) for n in d2.images}, check=False)


def point_heap(s: Point, t: Point, u: Point) -> Point:
    _same_context(s, t, u)
    d3 = s.presentation.delta3
    return Point(s.presentation, s.algebra, {n: evaluate((s, t, u), d3.images[n]) for n in d3.images}, check=False)


def _character_point(P: CotrussPresentation, A: GrassmannAlgebra, h: GenHom | None, label: str) -> Point:
    if h is None:
        raise MissingMap(f"{P.name or 'presentation'} has no {label}")
    return Point(P, A, {n: A.scalar(h.images[n].to_scalar()) for n in P.gens.names()}, check=False)


def unit_point(P: CotrussPresentation, A: GrassmannAlgebra) -> Point:
    """``e = !_A o counit``."""
    return _character_point(P, A, P.counit, "counit")


def zero_point(P: CotrussPresentation, A: GrassmannAlgebra) -> Point:
    """``z = !_A o cozero``."""
    return _character_point(P, A, P.cozero, "cozero")


def brace_add(t: Point, u: Point) -> Point:
    """``t +_e u = [t, e, u]``."""
    return point_heap(t, unit_point(t.presentation, t.algebra), u)


def brace_neg(t: Point) -> Point:
    """``-_e t = [e, t, e]``."""
    e = unit_point(t.presentation, t.algebra)
    return point_heap(e, t, e)


def brace_sub(t: Point, u: Point) -> Point:
    return brace_add(t, brace_neg(u))


def scale_odd(s: Point, q) -> Point:
    """Multiply every odd-generator image by ``q`` (``q = -1`` is the parity involution)."""
    P = s.presentation
    imgs = dict(s.images)
    for g in P.gens.odd:
        imgs[g.name] = imgs[g.name].scale(q)
    return Point(P, s.algebra, imgs, check=False)


def parity_involution(s: Point) -> Point:
    return scale_odd(s, -1)


# ---------------------------------------------------------------------------
# enumeration and sampling


def _choices(P: CotrussPresentation, A: GrassmannAlgebra) -> list[list[tuple[GrassmannElement, ...]]]:
    out = []
    for g in P.gens.gens:
        if g.parity == ODD:
            out.append([(a,) for a in A.enumerate(ODD)])
        elif g.invertible:
            out.append([(a, grassmann_inverse(a)) for a in A.enumerate(EVEN) if a.scalar_part()])
        else:
            out.append([(a,) for a in A.enumerate(EVEN)])
    return out


def count_points(P: CotrussPresentation, A: GrassmannAlgebra) -> int:
    if not A.field.finite:
        raise InfiniteBase("point sets over QQ are infinite")
    p = A.field.p
    n_even = len(A.basis(EVEN))
    n_odd = len(A.basis(ODD))
    total = 1
    for g in P.gens.gens:
        if g.parity == ODD:
            total *= p**n_odd
        elif g.invertible:
            total *= (p - 1) * p ** (n_even - 1)
        else:
            total *= p**n_even
    return total


def enumerate_points(P: CotrussPresentation, A: GrassmannAlgebra) -> list[Point]:
    """All points over a finite field, in lexicographic order of generator choices."""
    if not A.field.finite:
        raise InfiniteBase("enumerate_points needs a finite base field")
    if A.field != P.field:
        raise AmbientMismatch(f"test algebra over {A.field}, presentation over {P.field}")
    out = []
    gens = P.gens.gens
    for combo in itertools.product(*_choices(P, A)):
        imgs = {}
        for g, vals in zip(gens, combo):
            imgs[g.name] = vals[0]
            if g.invertible:
                imgs[g.inverse] = vals[1]
        out.append(Point(P, A, imgs, check=False))
    return out


def sample_point(P: CotrussPresentation, A: GrassmannAlgebra, seed: int | random.Random = 0, bound: int = 3) -> Point:
    """A pseudorandom point with integer coefficients in ``[-bound, bound]`` (uniform over GF(p))."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    imgs = {}
    for g in P.gens.gens:
        a = A.random(rng, g.parity, bound)
        while g.invertible and not a.scalar_part():
            a = A.random(rng, g.parity, bound)
        imgs[g.name] = a
        if g.invertible:
            imgs[g.inverse] = grassmann_inverse(a)
    return Point(P, A, imgs)


# ---------------------------------------------------------------------------
# test-algebra homomorphisms


@dataclass(frozen=True)
class TestAlgebraHom:
    """``psi: Lambda_m -> Lambda_n`` fixed by odd images of ``xi1 .. xim``."""

    __test__ = False  # not a pytest class

    source: GrassmannAlgebra
    target: GrassmannAlgebra
    images: tuple[GrassmannElement, ...]

    def __post_init__(self):
        if self.source.field != self.target.field:
            raise AmbientMismatch("test-algebra map between different base fields")
        if len(self.images) != self.source.n:
            raise ValueError(f"need {self.source.n} images, got {len(self.images)}")
        for i, img in enumerate(self.images, 1):
            if img.algebra != self.target:
                raise AmbientMismatch(f"image of xi{i} is not in {self.target}")
            if not img.is_homogeneous(ODD):
                raise ValueError(f"image of xi{i} is not odd")
            if not (img * img).is_zero():
                raise ValueError(f"image of xi{i} does not square to zero")

    def __call__(self, a: GrassmannElement) -> GrassmannElement:
        if a.algebra != self.source:
            raise AmbientMismatch("element not in the source test algebra")
        out = self.target.zero()
        for mask, c in a.terms.items():
            acc = self.target.one()
            i = 0
            m = mask
            while m:
                if m & 1:
                    acc = acc * self.images[i]
                m >>= 1
                i += 1
            out = out + acc.scale(c)
        return out

    @classmethod
    def identity(cls, A: GrassmannAlgebra) -> "TestAlgebraHom":
        return cls(A, A, tuple(A.xi(i) for i in range(1, A.n + 1)))

    @classmethod
    def random(cls, source: GrassmannAlgebra, target: GrassmannAlgebra, rng: random.Random, bound: int = 3) -> "TestAlgebraHom":
        return cls(source, target, tuple(target.random(rng, ODD, bound) for _ in range(source.n)))


def pushforward(psi: TestAlgebraHom, s: Point) -> Point:
    """``T(psi)(s) = psi o s``."""
    if s.algebra != psi.source:
        raise AmbientMismatch("point does not live over the source of psi")
    return Point(s.presentation, psi.target, {n: psi(v) for n, v in s.images.items()}, check=False)


# ---------------------------------------------------------------------------
# operation interfaces shared by the symbolic and the table back ends


class SymbolicOps:
    """Truss and brace operations on :class:`Point` objects."""

    def __init__(self, P: CotrussPresentation, A: GrassmannAlgebra):
        self.P, self.A = P, A
        self.e = unit_point(P, A) if P.counit is not None else None
        self.z = zero_point(P, A) if P.cozero is not None else None

    def mul(self, a, b):
        return point_mul(a, b)

    def heap(self, a, b, c):
        return point_heap(a, b, c)

    def add(self, a, b):
        return point_heap(a, self.e, b)

    def neg(self, a):
        return point_heap(self.e, a, self.e)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def scale_odd(self, a, q):
        return scale_odd(a, q)

    def equal(self, a, b) -> bool:
        return a == b


def _struct_constants(n: int) -> list[tuple[int, int, int, int]]:
    out = []
    from .superalg import _grassmann_table

    table = _grassmann_table(n)
    for i in range(1 << n):
        for j in range(1 << n):
            r = table[i][j]
            if r is not None:
                out.append((i, j, r[0], r[1]))
    return out


class PointTable:
    """Enumerated points plus lazily compiled operation tables (indices into ``points``).

    The tables are produced by a vectorised evaluator that works on dense
    coefficient arrays, independent of the symbolic :func:`point_mul`/:func:`point_heap`.
    """

    def __init__(self, P: CotrussPresentation, A: GrassmannAlgebra, points: list[Point] | None = None):
        if not A.field.finite:
            raise InfiniteBase("operation tables need a finite base field")
        self.P, self.A = P, A
        self.p = A.field.p
        self.points = points if points is not None else enumerate_points(P, A)
        self.N = len(self.points)
        self.names = P.gens.names()
        self.index = {pt: i for i, pt in enumerate(self.points)}
        self._sc = _struct_constants(A.n)
        self._values: dict = {}
        self._keys_sorted, self._key_order = self._encode_points()
        self.evaluations = 0
        self._cache: dict = {}

    # encoding --------------------------------------------------------------

    def _digits(self) -> int:
        return len(self.names) * self.A.dim

    def _encode(self, arrs: list[np.ndarray], shape: tuple):
        """Encode per-name coefficient arrays (..., D) as integer keys (...)."""
        if not arrs:
            return np.zeros(shape, dtype=np.int64)
        stacked = np.concatenate(arrs, axis=-1)
        if self.p ** self._digits() < 2**62:
            weights = self.p ** np.arange(self._digits(), dtype=np.int64)
            return stacked @ weights
        return np.apply_along_axis(lambda v: hash(tuple(int(x) for x in v)), -1, stacked)

    def _point_dense(self, pt: Point, name: str) -> np.ndarray:
        return np.array([int(c) for c in pt.images[name].dense()], dtype=np.int64)

    def _encode_points(self):
        arrs = [np.stack([self._point_dense(pt, n) for pt in self.points]) if self.points else np.zeros((0, self.A.dim), np.int64) for n in self.names]
        keys = self._encode(arrs, (self.N,))
        order = np.argsort(keys, kind="stable")
        return keys[order], order

    def lookup(self, keys: np.ndarray) -> np.ndarray:
        """Point indices for encoded keys; -1 where the value is not a point."""
        pos = np.searchsorted(self._keys_sorted, keys)
        pos = np.clip(pos, 0, max(self.N - 1, 0))
        found = self._keys_sorted[pos] == keys
        return np.where(found, self._key_order[pos], -1)

    # vectorised evaluation -------------------------------------------------

    def _monomial_values(self, m) -> np.ndarray:
        got = self._values.get(m)
        if got is None:
            got = np.stack([np.array([int(c) for c in pt.monomial(m).dense()], dtype=np.int64) for pt in self.points])
            self._values[m] = got
        return got

    def _gmul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        shape = np.broadcast_shapes(x.shape, y.shape)
        out = np.zeros(shape, dtype=np.int64)
        for i, j, sign, k in self._sc:
            out[..., k] += sign * x[..., i] * y[..., j]
        return out % self.p

    def evaluate(self, delta: GenHom, args: Sequence[np.ndarray]) -> np.ndarray:
        """Indices of ``m o (a1 # ... # ak) o delta`` for broadcast index arrays ``args``."""
        shape = np.broadcast_shapes(*(np.shape(a) for a in args))
        per_name = []
        for n in self.names:
            acc = np.zeros(shape + (self.A.dim,), dtype=np.int64)
            for key, c in delta.images[n].terms.items():
                prod = None
                for m, a in zip(key, args):
                    v = self._monomial_values(m)[a]
                    prod = v if prod is None else self._gmul(prod, v)
                if prod is None:  # arity 0
                    prod = np.zeros(shape + (self.A.dim,), dtype=np.int64)
                    prod[..., 0] = 1
                acc = (acc + int(c) * prod) % self.p
            per_name.append(np.broadcast_to(acc, shape + (self.A.dim,)))
        self.evaluations += int(np.prod(shape)) if shape else 1
        return self.lookup(self._encode(per_name, shape))

    # tables ------------------------------------------------------------------

    def _arange(self, axis: int, ndim: int) -> np.ndarray:
        sh = [1] * ndim
        sh[axis] = self.N
        return np.arange(self.N).reshape(sh)

    def _memo(self, key, build):
        got = self._cache.get(key)
        if got is None:
            got = build()
            self._cache[key] = got
        return got

    @property
    def e(self) -> int:
        return self._memo("e", lambda: self.index[unit_point(self.P, self.A)])

    @property
    def z(self) -> int:
        return self._memo("z", lambda: self.index[zero_point(self.P, self.A)])

    @property
    def has_unit(self) -> bool:
        return self.P.counit is not None

    @property
    def has_zero(self) -> bool:
        return self.P.cozero is not None

    @property
    def mul_table(self) -> np.ndarray:
        return self._memo("mul", lambda: self.evaluate(self.P.delta2, [self._arange(0, 2), self._arange(1, 2)]))

    @property
    def heap_table(self) -> np.ndarray:
        return self._memo("heap", lambda: self.evaluate(self.P.delta3, [self._arange(i, 3) for i in range(3)]))

    def heap_with_middle(self, b: int) -> np.ndarray:
        """``[a, b, c]`` for all ``a, c`` with ``b`` fixed (an N x N table)."""
        if "heap" in self._cache:
            return self._cache["heap"][:, b, :]
        return self._memo(("heapmid", b), lambda: self.evaluate(
            self.P.delta3, [self._arange(0, 2), np.array(b).reshape(1, 1), self._arange(1, 2)]))

    def heap_outer(self, b: int) -> np.ndarray:
        """``[b, a, b]`` for all ``a``."""
        if "heap" in self._cache:
            return self._cache["heap"][b, :, b]
        return self._memo(("heapout", b), lambda: self.evaluate(
            self.P.delta3, [np.array([b]), np.arange(self.N), np.array([b])]))

    def scale_table(self, q) -> np.ndarray:
        def build():
            return np.array([self.index.get(scale_odd(pt, q), -1) for pt in self.points], dtype=np.int64)

        return self._memo(("scale", q), build)

    def closed(self) -> bool:
        return all(not (np.asarray(t) < 0).any() for k, t in self._cache.items() if not isinstance(t, int))


class TableOps:
    """Truss and brace operations on integer point indices (numpy arrays broadcast)."""

    def __init__(self, table: PointTable, base: int | None = None):
        self.t = table
        self.e = table.e if table.has_unit else None
        self.z = table.z if table.has_zero else None
        self.base = self.e if base is None and self.e is not None else (base or 0)

    def mul(self, a, b):
        return self.t.mul_table[a, b]

    def heap(self, a, b, c):
        return self.t.heap_table[a, b, c]

    def add(self, a, b):
        return self.t.heap_with_middle(self.e)[a, b]

    def neg(self, a):
        return self.t.heap_outer(self.e)[a]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def gadd(self, a, b):
        """Group law at the certificate base point."""
        return self.t.heap_with_middle(self.base)[a, b]

    def gneg(self, a):
        return self.t.heap_outer(self.base)[a]

    def scale_odd(self, a, q):
        return self.t.scale_table(q)[a]


# ---------------------------------------------------------------------------
# the identity suite


@dataclass(frozen=True)
class Identity:
    name: str
    arity: int
    fn: Callable
    needs: str | None = None  # "unit" | "zero"
    certificate: str | None = None  # "heap" | "left" | "right"


def _id(name, arity, needs=None, certificate=None):
    def deco(fn):
        return Identity(name, arity, fn, needs, certificate)

    return deco


@_id("heap-cancel-right", 2)
def _heap_right(o, a, b):
    return o.heap(a, b, b), a


@_id("heap-cancel-left", 2)
def _heap_left(o, a, b):
    return o.heap(b, b, a), a


@_id("heap-associativity", 5, certificate="heap")
def _heap_assoc(o, a, b, c, d, e):
    return o.heap(o.heap(a, b, c), d, e), o.heap(a, b, o.heap(c, d, e))


@_id("para-associativity", 5, certificate="heap")
def _para_assoc(o, a, b, c, d, e):
    return o.heap(o.heap(a, b, c), d, e), o.heap(a, o.heap(d, c, b), e)


@_id("abelian", 3)
def _abelian(o, a, b, c):
    return o.heap(a, b, c), o.heap(c, b, a)


@_id("transposition", 9, certificate="heap")
def _transposition(o, a1, a2, a3, b1, b2, b3, c1, c2, c3):
    lhs = o.heap(o.heap(a1, a2, a3), o.heap(b1, b2, b3), o.heap(c1, c2, c3))
    rhs = o.heap(o.heap(a1, b1, c1), o.heap(a2, b2, c2), o.heap(a3, b3, c3))
    return lhs, rhs


@_id("mul-associativity", 3)
def _mul_assoc(o, a, b, c):
    return o.mul(o.mul(a, b), c), o.mul(a, o.mul(b, c))


@_id("left-distributivity", 4, certificate="left")
def _left_dist(o, s, t1, t2, t3):
    return o.mul(s, o.heap(t1, t2, t3)), o.heap(o.mul(s, t1), o.mul(s, t2), o.mul(s, t3))


@_id("right-distributivity", 4, certificate="right")
def _right_dist(o, s, t1, t2, t3):
    return o.mul(o.heap(t1, t2, t3), s), o.heap(o.mul(t1, s), o.mul(t2, s), o.mul(t3, s))


@_id("unit-left", 1, needs="unit")
def _unit_left(o, t):
    return o.mul(o.e, t), t


@_id("unit-right", 1, needs="unit")
def _unit_right(o, t):
    return o.mul(t, o.e), t


@_id("absorber-left", 1, needs="zero")
def _absorber_left(o, t):
    return o.mul(o.z, t), o.z


@_id("absorber-right", 1, needs="zero")
def _absorber_right(o, t):
    return o.mul(t, o.z), o.z


@_id("semi-brace-left", 3, needs="unit")
def _brace_left(o, s, t, u):
    return o.mul(s, o.add(t, u)), o.add(o.sub(o.mul(s, t), s), o.mul(s, u))


@_id("semi-brace-right", 3, needs="unit")
def _brace_right(o, s, t, u):
    return o.mul(o.add(t, u), s), o.add(o.sub(o.mul(t, s), s), o.mul(u, s))


IDENTITIES: tuple[Identity, ...] = (
    _heap_right, _heap_left, _heap_assoc, _para_assoc, _abelian, _transposition,
    _mul_assoc, _left_dist, _right_dist, _unit_left, _unit_right,
    _absorber_left, _absorber_right, _brace_left, _brace_right,
)

# Certificate identities: they say the heap is the heap of an abelian group
# (a + c := [a, b0, c]) and that left/right multiplications are affine maps of
# that group.  Together they imply every certificate-marked identity above.


@_id("cert:group-associativity", 3)
def _c_assoc(o, a, b, c):
    return o.gadd(o.gadd(a, b), c), o.gadd(a, o.gadd(b, c))


@_id("cert:group-commutativity", 2)
def _c_comm(o, a, b):
    return o.gadd(a, b), o.gadd(b, a)


@_id("cert:group-neutral", 1)
def _c_neutral(o, a):
    return o.gadd(a, o.base), a


@_id("cert:group-inverse", 1)
def _c_inverse(o, a):
    return o.gadd(a, o.gneg(a)), o.base


@_id("cert:heap-is-group-heap", 3)
def _c_heap(o, a, b, c):
    return o.heap(a, b, c), o.gadd(o.gadd(a, o.gneg(b)), c)


@_id("cert:left-affine", 3)
def _c_left(o, s, a, c):
    return o.gadd(o.mul(s, o.gadd(a, c)), o.mul(s, o.base)), o.gadd(o.mul(s, a), o.mul(s, c))


@_id("cert:right-affine", 3)
def _c_right(o, s, a, c):
    return o.gadd(o.mul(o.gadd(a, c), s), o.mul(o.base, s)), o.gadd(o.mul(a, s), o.mul(c, s))


CERTIFICATES = {
    "heap": (_c_assoc, _c_comm, _c_neutral, _c_inverse, _c_heap),
    "left": (_c_left,),
    "right": (_c_right,),
}


@dataclass
class IdentityResult:
    name: str
    passed: bool
    method: str
    tuples: int
    witness: list[dict[str, str]] | None = None
    note: str | None = None
    decided: bool = True

    @property
    def status(self) -> str:
        if not self.decided:
            return "undecided"
        return "pass" if self.passed else "fail"

    def to_dict(self) -> dict:
        d = {"name": self.name, "status": self.status, "passed": self.passed, "method": self.method, "tuples": self.tuples}
        if self.witness is not None:
            d["witness"] = self.witness
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class TrussReport:
    presentation: str
    algebra: str
    mode: str
    points: int | None
    results: list[IdentityResult] = dc_field(default_factory=list)
    evaluations: int = 0
    notes: list[str] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def __getitem__(self, name: str) -> IdentityResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "presentation": self.presentation,
            "algebra": self.algebra,
            "mode": self.mode,
            "points": self.points,
            "evaluations": self.evaluations,
            "passed": self.passed,
            "identities": [r.to_dict() for r in self.results],
            "notes": list(self.notes),
        }


def _grids(N: int, k: int) -> list[np.ndarray]:
    out = []
    for i in range(k):
        sh = [1] * k
        sh[i] = N
        out.append(np.arange(N).reshape(sh))
    return out


def _table_check(ident: Identity, ops: TableOps, N: int, limit: int | None = None):
    """Literal check over all tuples in lexicographic order.

    Returns ``(ok, witness_tuple, tuples_checked)``; with ``limit`` the search
    stops after that many tuples (``ok`` is then ``None`` if nothing failed).
    """
    k = ident.arity
    total = N**k
    # chunk over leading variables so each slab stays near LITERAL_CAP
    lead = 0
    while lead < k and N ** (k - lead) > LITERAL_CAP:
        lead += 1
    tail = _grids(N, k - lead)
    checked = 0
    for prefix in itertools.product(range(N), repeat=lead):
        args = [np.array(v) for v in prefix] + tail
        lhs, rhs = ident.fn(ops, *args)
        bad = np.asarray(lhs) != np.asarray(rhs)
        bad = np.broadcast_to(bad, (N,) * (k - lead))
        slab = N ** (k - lead)
        if bad.any():
            pos = np.unravel_index(int(np.argmax(bad.reshape(-1))), bad.shape)
            return False, tuple(prefix) + tuple(int(x) for x in pos), checked + slab
        checked += slab
        if limit is not None and checked >= limit and checked < total:
            return None, None, checked
    return True, None, checked


def _plan(ident: Identity, N: int, literal_cap: int) -> str:
    if ident.certificate is None or N**ident.arity <= literal_cap:
        return "literal"
    return "certificate"


def check_truss_at_points(
    P: CotrussPresentation,
    A: GrassmannAlgebra,
    mode: str = "exhaustive",
    samples: int = 100,
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
    literal_cap: int = LITERAL_CAP,
    identities: Iterable[str] | None = None,
    table: PointTable | None = None,
) -> TrussReport:
    """Check the truss, unit/absorber and semi-brace identities on points of ``P`` in ``A``.

    ``mode="exhaustive"`` decides every identity over all tuples of the (finite)
    point set; ``mode="samples"`` evaluates ``samples`` random tuples exactly.
    """
    wanted = [i for i in IDENTITIES if identities is None or i.name in set(identities)]
    wanted = [
        i for i in wanted
        if not (i.needs == "unit" and P.counit is None) and not (i.needs == "zero" and P.cozero is None)
    ]
    if mode == "exhaustive":
        return _exhaustive(P, A, wanted, budget, literal_cap, table)
    if mode == "samples":
        return _sampled(P, A, wanted, samples, seed)
    raise ValueError("mode must be 'exhaustive' or 'samples'")


def _witness(table: PointTable, tup) -> list[dict[str, str]]:
    return [table.points[i].to_dict() for i in tup]


def _exhaustive(P, A, wanted, budget, literal_cap, table) -> TrussReport:
    if not A.field.finite:
        raise InfiniteBase("exhaustive mode needs a finite base field; use samples mode over QQ")
    N = count_points(P, A)
    plans = {i.name: _plan(i, N, literal_cap) for i in wanted}
    certs = []
    for i in wanted:
        if plans[i.name] == "certificate":
            extra = CERTIFICATES[i.certificate] if i.certificate != "heap" else ()
            for c in CERTIFICATES["heap"] + extra:
                if c not in certs:
                    certs.append(c)
    cost = N**2 + N**3
    cost += sum(N**i.arity for i in wanted if plans[i.name] == "literal")
    cost += sum(N**c.arity for c in certs)
    if cost > budget:
        raise BudgetExceeded(
            f"exhaustive check over {N} points needs about {cost:,} tuple evaluations (budget {budget:,})"
        )
    table = table or PointTable(P, A)
    ops = TableOps(table)
    report = TrussReport(P.name, str(A), "exhaustive", N)
    report.evaluations = N**2 + N**3
    _ = table.mul_table, table.heap_table
    if not table.closed():
        report.results.append(IdentityResult("closure", False, "literal", N**3, note="an operation left the point set"))
        return report

    cert_ok: dict[str, tuple] = {}
    for c in certs:
        ok, wit, n = _table_check(c, ops, N)
        report.evaluations += n
        cert_ok[c.name] = (ok, wit)
    if certs:
        base = ops.base
        report.notes.append(
            f"certificate base point #{base}: {table.points[base]}; "
            + ", ".join(f"{k}={'ok' if v[0] else 'FAIL'}" for k, v in cert_ok.items())
        )

    for ident in wanted:
        if plans[ident.name] == "literal":
            ok, wit, n = _table_check(ident, ops, N)
            report.evaluations += n
            report.results.append(IdentityResult(
                ident.name, bool(ok), "literal", N**ident.arity,
                None if ok else _witness(table, wit)))
            continue
        needed = CERTIFICATES["heap"] + (CERTIFICATES[ident.certificate] if ident.certificate != "heap" else ())
        failed = [c.name for c in needed if not cert_ok[c.name][0]]
        if not failed:
            report.results.append(IdentityResult(ident.name, True, "certificate", N**ident.arity))
            continue
        # certificate broken: look for a literal counterexample within the remaining budget
        remaining = max(budget - report.evaluations, 0)
        ok, wit, n = _table_check(ident, ops, N, limit=remaining)
        report.evaluations += n
        note = "certificate failed: " + ", ".join(failed)
        if ok is None:
            note += f"; no counterexample among the first {n:,} tuples (undecided within budget)"
        report.results.append(IdentityResult(
            ident.name, bool(ok), "certificate+search", N**ident.arity,
            None if not wit else _witness(table, wit), note, decided=ok is not None))
    return report


def _sampled(P, A, wanted, samples, seed) -> TrussReport:
    ops = SymbolicOps(P, A)
    rng = random.Random(seed)
    report = TrussReport(P.name, str(A), f"samples(N={samples}, seed={seed})", None)
    report.notes.append("sampled points: a pass is evidence, not proof")
    for ident in wanted:
        res = IdentityResult(ident.name, True, "sampled", 0)
        for _ in range(samples):
            args = [sample_point(P, A, rng) for _ in range(ident.arity)]
            lhs, rhs = ident.fn(ops, *args)
            res.tuples += 1
            report.evaluations += 1
            if lhs != rhs:
                res.passed = False
                res.witness = [a.to_dict() for a in args]
                break
        report.results.append(res)
    return report
