"""Yang-Baxter maps ``r(s, t) = (lambda_s(t), rho_t(s))`` on point sets of a superbrace.

Every map in the catalogue is written once against the small operation
interface shared by :class:`~supertruss.points.SymbolicOps` (points) and
:class:`~supertruss.points.TableOps` (point indices), so exhaustive checks run
on integer tables while sampled checks evaluate exactly on points.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import Callable

import numpy as np

from .cotruss import CotrussPresentation, reduce
from .errors import BudgetExceeded, InfiniteBase, InfinitePointSet, MissingCounit, NotGroupLike, NotMultiplicative
from .homs import GenHom, TensorTarget, apply, tensor_hom
from .superalg import GrassmannAlgebra, SuperPoly
from .tensor import TensorElement
from .points import (
    DEFAULT_BUDGET,
    Point,
    PointTable,
    SymbolicOps,
    TableOps,
    count_points,
    sample_point,
)

KINDS = ("flip", "superflip", "left_action", "inverse_map", "odd_scaling", "composed")


# ---------------------------------------------------------------------------
# map definitions


def _flip(o, s, t):
    return t, s


def _superflip(o, s, t):
    return o.scale_odd(t, -1), o.scale_odd(s, -1)


def _left_action(o, s, t):
    return o.add(o.sub(o.mul(s, t), o.mul(s, o.e)), o.e), s


def _inverse_map(o, s, t):
    return o.neg(t), o.neg(s)


@dataclass(frozen=True)
class YBMap:
    """A catalogued Yang-Baxter map on the points of ``P`` in ``A``.

    ``outer`` is only used by ``composed``: ``"parity"`` applies the parity
    involution to both components, ``"scale"`` applies ``sigma_q`` to the first
    and ``sigma_{1/q}`` to the second.
    """

    kind: str
    presentation: CotrussPresentation
    algebra: GrassmannAlgebra
    q: object = None
    outer: str | None = None
    inner: "YBMap | None" = None
    custom: Callable | None = dc_field(default=None, compare=False)
    label: str = ""

    @property
    def name(self) -> str:
        if self.label:
            return self.label
        if self.kind == "odd_scaling":
            return f"odd_scaling(q={self.q})"
        if self.kind == "composed":
            out = "alpha" if self.outer == "parity" else f"sigma_{self.q}"
            return f"composed({out}, {self.inner.name})"
        return self.kind

    def components(self, o, s, t):
        """``(lambda_s(t), rho_t(s))`` through the operation interface ``o``."""
        k = self.kind
        if k == "flip":
            return _flip(o, s, t)
        if k == "superflip":
            return _superflip(o, s, t)
        if k == "left_action":
            return _left_action(o, s, t)
        if k == "inverse_map":
            return _inverse_map(o, s, t)
        if k == "odd_scaling":
            return o.scale_odd(t, self.q), o.scale_odd(s, self.presentation.field.inv(self.q))
        if k == "composed":
            lam, rho = self.inner.components(o, s, t)
            if self.outer == "parity":
                return o.scale_odd(lam, -1), o.scale_odd(rho, -1)
            return o.scale_odd(lam, self.q), o.scale_odd(rho, self.presentation.field.inv(self.q))
        if k == "custom":
            return self.custom(o, s, t)
        raise ValueError(f"unknown map kind {k!r}")

    def __call__(self, s: Point, t: Point) -> tuple[Point, Point]:
        return self.components(SymbolicOps(self.presentation, self.algebra), s, t)

    def lam(self, s: Point, t: Point) -> Point:
        return self(s, t)[0]

    def rho(self, t: Point, s: Point) -> Point:
        return self(s, t)[1]


def _field_inv(P: CotrussPresentation, q):
    f = P.field
    c = f.coerce(q)
    if not c:
        raise ValueError(f"q = {q} is not invertible in {f}")
    return c, f.inv(c)


_TABLES: dict = {}


def point_table(P: CotrussPresentation, A: GrassmannAlgebra) -> PointTable:
    """A cached :class:`PointTable` (enumerating points is the expensive part)."""
    key = (P, A)
    got = _TABLES.get(key)
    if got is None or got.P.name != P.name:
        if len(_TABLES) > 16:
            _TABLES.clear()
        got = _TABLES[key] = PointTable(P, A)
    return got


def _scaling_hom(P: CotrussPresentation, q) -> GenHom:
    gens, f = P.gens, P.field
    imgs = {}
    for n in gens.names():
        p = SuperPoly.gen(gens, f, n)
        imgs[n] = TensorElement.from_poly(p.scale(q) if gens.parity_of(n) else p)
    return GenHom(gens, f, TensorTarget(gens, f, 1), imgs)


def _check_scaling(P: CotrussPresentation, A: GrassmannAlgebra, q, budget: int) -> None:
    """``sigma_q`` must respect the product: exactly on ``X`` and again on the point set."""
    sig = _scaling_hom(P, q)
    d2 = P.delta2
    # sigma_q is an algebra map X -> X; multiplicativity at all points <=> Delta2 o sigma = (sigma # sigma) o Delta2
    left = _apply_tensor_target(d2, sig)
    right = tensor_hom(sig, sig)
    for n in P.gens.names():
        a = left[n]
        b = right(d2.images[n])
        if a != b:
            raise NotMultiplicative(
                f"sigma_{q} does not respect the product of {P.name or 'the presentation'}: "
                f"on {n}, Delta2(sigma(g)) = {a} but (sigma # sigma)(Delta2(g)) = {b}"
            )
    if A.field.finite and count_points(P, A) ** 2 <= budget:
        t = point_table(P, A)
        o = TableOps(t)
        N = t.N
        s_, t_ = np.arange(N)[:, None], np.arange(N)[None, :]
        bad = o.scale_odd(o.mul(s_, t_), q) != o.mul(o.scale_odd(s_, q), o.scale_odd(t_, q))
        if bad.any():
            i, j = np.argwhere(bad)[0]
            raise NotMultiplicative(f"sigma_{q}(st) != sigma_{q}(s) sigma_{q}(t) at s={t.points[i]}, t={t.points[j]}")


def _apply_tensor_target(d2: GenHom, sig: GenHom) -> dict:
    """``Delta2 o sigma`` on generators."""
    return {n: apply(d2, sig.images[n].to_poly()) for n in sig.source.names()}


def _check_group_like(P: CotrussPresentation, A: GrassmannAlgebra, budget: int, samples: int = 20, seed: int = 0) -> None:
    if A.field.finite and count_points(P, A) <= budget:
        t = point_table(P, A)
        o = TableOps(t)
        s = np.arange(t.N)
        for side, val in (("left", o.mul(o.neg(s), s)), ("right", o.mul(s, o.neg(s)))):
            bad = val != o.e
            if bad.any():
                i = int(np.argmax(bad))
                raise NotGroupLike(f"-_e s is not a {side} multiplicative inverse of s = {t.points[i]}")
        return
    o = SymbolicOps(P, A)
    rng = random.Random(seed)
    for _ in range(samples):
        s = sample_point(P, A, rng)
        if o.mul(o.neg(s), s) != o.e or o.mul(s, o.neg(s)) != o.e:
            raise NotGroupLike(f"-_e s is not a multiplicative inverse of s = {s}")


def make_map(
    kind: str,
    P: CotrussPresentation,
    A: GrassmannAlgebra,
    q=None,
    inner: YBMap | str | None = None,
    outer: str = "parity",
    budget: int = DEFAULT_BUDGET,
) -> YBMap:
    """Build a catalogued map, verifying its preconditions on ``P`` and ``A``."""
    kind = kind.replace("-", "_")
    if kind not in KINDS:
        raise ValueError(f"unknown map kind {kind!r}; expected one of {', '.join(KINDS)}")
    if P.counit is None:
        raise MissingCounit(f"{P.name or 'presentation'} has no counit, so there is no superbrace")
    if kind == "odd_scaling":
        if q is None:
            raise ValueError("odd_scaling needs q")
        qn, _ = _field_inv(P, q)
        _check_scaling(P, A, qn, budget)
        return YBMap(kind, P, A, q=qn)
    if kind == "inverse_map":
        _check_group_like(P, A, budget)
        return YBMap(kind, P, A)
    if kind == "composed":
        if isinstance(inner, str) or inner is None:
            inner = make_map(inner or "flip", P, A, budget=budget)
        if outer == "parity":
            return YBMap(kind, P, A, outer="parity", inner=inner)
        if outer == "scale":
            if q is None:
                raise ValueError("composed with outer=scale needs q")
            qn, _ = _field_inv(P, q)
            _check_scaling(P, A, qn, budget)
            return YBMap(kind, P, A, q=qn, outer="scale", inner=inner)
        raise ValueError("outer must be 'parity' or 'scale'")
    return YBMap(kind, P, A)


def custom_map(P: CotrussPresentation, A: GrassmannAlgebra, fn: Callable, label: str = "custom") -> YBMap:
    """An uncatalogued map ``fn(ops, s, t) -> (lambda, rho)``, for negative controls in tests."""
    return YBMap("custom", P, A, custom=fn, label=label)


def _rebuild(r: YBMap, P: CotrussPresentation, A: GrassmannAlgebra) -> YBMap:
    inner = _rebuild(r.inner, P, A) if r.inner is not None else None
    if r.kind == "inverse_map":
        _check_group_like(P, A, DEFAULT_BUDGET)
    return YBMap(r.kind, P, A, q=r.q, outer=r.outer, inner=inner, custom=r.custom, label=r.label)


def reduced_map(r: YBMap) -> YBMap:
    """The same construction over ``reduce(P)`` (points with the odd images dropped)."""
    return _rebuild(r, reduce(r.presentation), r.algebra)


# ---------------------------------------------------------------------------
# reports


@dataclass
class BraidReport:
    map: str
    mode: str
    points: int | None
    triples: int
    passed: bool
    witness: list[dict[str, str]] | None = None
    lhs: list[dict[str, str]] | None = None
    rhs: list[dict[str, str]] | None = None

    def to_dict(self) -> dict:
        d = {"check": "braid", "map": self.map, "mode": self.mode, "points": self.points,
             "triples": self.triples, "passed": self.passed}
        if self.witness is not None:
            d.update(witness=self.witness, lhs=self.lhs, rhs=self.rhs)
        return d


@dataclass
class ComponentReport:
    map: str
    mode: str
    points: int | None
    triples: int
    results: dict[str, bool]
    witnesses: dict[str, list[dict[str, str]]]
    braid_passed: bool
    notes: list[str] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.results.values())

    @property
    def agrees_with_braid(self) -> bool:
        return self.passed == self.braid_passed

    def to_dict(self) -> dict:
        return {"check": "components", "map": self.map, "mode": self.mode, "points": self.points,
                "triples": self.triples, "passed": self.passed, "results": dict(self.results),
                "witnesses": dict(self.witnesses), "braid_passed": self.braid_passed,
                "agrees_with_braid": self.agrees_with_braid, "notes": list(self.notes)}


@dataclass
class NondegeneracyReport:
    map: str
    points: int
    left_bijective: bool
    right_bijective: bool
    left_witness: list[dict[str, str]] | None = None
    right_witness: list[dict[str, str]] | None = None

    @property
    def passed(self) -> bool:
        return self.left_bijective and self.right_bijective

    def to_dict(self) -> dict:
        d = {"check": "nondegenerate", "map": self.map, "points": self.points, "passed": self.passed,
             "left_bijective": self.left_bijective, "right_bijective": self.right_bijective}
        if self.left_witness is not None:
            d["left_witness"] = self.left_witness
        if self.right_witness is not None:
            d["right_witness"] = self.right_witness
        return d


# ---------------------------------------------------------------------------
# exhaustive tables


def map_tables(r: YBMap, budget: int = DEFAULT_BUDGET) -> tuple[PointTable, np.ndarray, np.ndarray]:
    """``L[s, t] = lambda_s(t)`` and ``R[s, t] = rho_t(s)`` as point indices."""
    P, A = r.presentation, r.algebra
    if not A.field.finite:
        raise InfinitePointSet("exhaustive map tables need a finite base field")
    N = count_points(P, A)
    if N**2 > budget:
        raise BudgetExceeded(f"{N} points: map tables need {N**2:,} evaluations (budget {budget:,})")
    t = point_table(P, A)
    o = TableOps(t)
    L, R = r.components(o, np.arange(N)[:, None], np.arange(N)[None, :])
    L = np.broadcast_to(L, (N, N))
    R = np.broadcast_to(R, (N, N))
    if (L < 0).any() or (R < 0).any():
        raise ValueError(f"{r.name} leaves the point set")
    return t, L, R


def _triples(N: int):
    return np.arange(N)[:, None, None], np.arange(N)[None, :, None], np.arange(N)[None, None, :]


def _braid_arrays(L, R, s, t, u):
    # (r x 1)(1 x r)(r x 1)
    a, b = L[s, t], R[s, t]
    b2, u2 = L[b, u], R[b, u]
    lhs = (L[a, b2], R[a, b2], u2)
    # (1 x r)(r x 1)(1 x r)
    t1, u1 = L[t, u], R[t, u]
    s2, t2 = L[s, t1], R[s, t1]
    t3, u3 = L[t2, u1], R[t2, u1]
    rhs = (s2, t3, u3)
    return lhs, rhs


def _render(table: PointTable, idx) -> list[dict[str, str]]:
    return [table.points[int(i)].to_dict() for i in idx]


def _least(bad: np.ndarray):
    return tuple(int(x) for x in np.unravel_index(int(np.argmax(bad.reshape(-1))), bad.shape))


def _budget_triples(N: int, budget: int) -> None:
    if N**3 + N**2 > budget:
        raise BudgetExceeded(f"{N} points: {N**3:,} triples exceed the budget of {budget:,} evaluations")


def check_braid(r: YBMap, mode: str = "exhaustive", samples: int = 100, seed: int = 0, budget: int = DEFAULT_BUDGET) -> BraidReport:
    """Compare ``(r x 1)(1 x r)(r x 1)`` with ``(1 x r)(r x 1)(1 x r)`` on triples of points."""
    if mode == "samples":
        return _braid_sampled(r, samples, seed)
    if mode != "exhaustive":
        raise ValueError("mode must be 'exhaustive' or 'samples'")
    if not r.algebra.field.finite:
        raise InfiniteBase("exhaustive braid check needs a finite base field")
    _budget_triples(count_points(r.presentation, r.algebra), budget)
    t, L, R = map_tables(r, budget)
    N = t.N
    lhs, rhs = _braid_arrays(L, R, *_triples(N))
    bad = np.zeros((N, N, N), dtype=bool)
    for x, y in zip(lhs, rhs):
        bad |= np.broadcast_to(x != y, (N, N, N))
    rep = BraidReport(r.name, "exhaustive", N, N**3, not bad.any())
    if bad.any():
        w = _least(bad)
        rep.witness = _render(t, w)
        rep.lhs = _render(t, [np.broadcast_to(x, (N, N, N))[w] for x in lhs])
        rep.rhs = _render(t, [np.broadcast_to(x, (N, N, N))[w] for x in rhs])
    return rep


def _sym_braid(r: YBMap, s, t, u):
    o = SymbolicOps(r.presentation, r.algebra)
    rr = lambda a, b: r.components(o, a, b)  # noqa: E731
    a, b = rr(s, t)
    b2, u2 = rr(b, u)
    a3, b3 = rr(a, b2)
    t1, u1 = rr(t, u)
    s2, t2 = rr(s, t1)
    t3, u3 = rr(t2, u1)
    return (a3, b3, u2), (s2, t3, u3)


def _sample_triples(r: YBMap, samples: int, seed: int):
    rng = random.Random(seed)
    P, A = r.presentation, r.algebra
    for _ in range(samples):
        yield tuple(sample_point(P, A, rng) for _ in range(3))


def _braid_sampled(r: YBMap, samples: int, seed: int) -> BraidReport:
    rep = BraidReport(r.name, f"samples(N={samples}, seed={seed})", None, 0, True)
    for trip in _sample_triples(r, samples, seed):
        rep.triples += 1
        lhs, rhs = _sym_braid(r, *trip)
        if lhs != rhs:
            rep.passed = False
            rep.witness = [p.to_dict() for p in trip]
            rep.lhs = [p.to_dict() for p in lhs]
            rep.rhs = [p.to_dict() for p in rhs]
            break
    return rep


def _component_arrays(L, R, s, t, u):
    """Both sides of YB1, YB2, YB3 (standard form) with ``L[s,t] = lambda_s(t)``, ``R[s,t] = rho_t(s)``."""
    lam = lambda a, b: L[a, b]  # noqa: E731  lambda_a(b)
    rho = lambda a, b: R[b, a]  # noqa: E731  rho_a(b)
    yb1 = (lam(s, lam(t, u)), lam(lam(s, t), lam(rho(t, s), u)))
    yb2 = (rho(u, rho(t, s)), rho(rho(u, t), rho(lam(t, u), s)))
    yb3 = (lam(rho(lam(t, u), s), rho(u, t)), rho(lam(rho(t, s), u), lam(s, t)))
    return {"YB1": yb1, "YB2": yb2, "YB3": yb3}


def check_components(r: YBMap, mode: str = "exhaustive", samples: int = 100, seed: int = 0, budget: int = DEFAULT_BUDGET) -> ComponentReport:
    """Check YB1-YB3 separately and compare the verdict with :func:`check_braid`."""
    braid = check_braid(r, mode, samples, seed, budget)
    note = "YB1-YB3 are the three components of the braid relation; both verdicts are computed independently"
    if mode == "exhaustive":
        t, L, R = map_tables(r, budget)
        N = t.N
        comps = _component_arrays(L, R, *_triples(N))
        results, wits = {}, {}
        for name, (x, y) in comps.items():
            bad = np.broadcast_to(x != y, (N, N, N))
            results[name] = not bad.any()
            if bad.any():
                wits[name] = _render(t, _least(bad))
        return ComponentReport(r.name, "exhaustive", N, N**3, results, wits, braid.passed, [note])
    o = SymbolicOps(r.presentation, r.algebra)
    lam = lambda a, b: r.components(o, a, b)[0]  # noqa: E731
    rho = lambda a, b: r.components(o, b, a)[1]  # noqa: E731
    results = {"YB1": True, "YB2": True, "YB3": True}
    wits: dict = {}
    n = 0
    for s, t, u in _sample_triples(r, samples, seed):
        n += 1
        sides = {
            "YB1": (lam(s, lam(t, u)), lam(lam(s, t), lam(rho(t, s), u))),
            "YB2": (rho(u, rho(t, s)), rho(rho(u, t), rho(lam(t, u), s))),
            "YB3": (lam(rho(lam(t, u), s), rho(u, t)), rho(lam(rho(t, s), u), lam(s, t))),
        }
        for name, (x, y) in sides.items():
            if results[name] and x != y:
                results[name] = False
                wits[name] = [p.to_dict() for p in (s, t, u)]
    return ComponentReport(r.name, f"samples(N={samples}, seed={seed})", None, n, results, wits, braid.passed, [note])


def check_nondegenerate(r: YBMap, budget: int = DEFAULT_BUDGET) -> NondegeneracyReport:
    """Decide whether every ``lambda_s`` and every ``rho_t`` is a bijection of the point set."""
    if not r.algebra.field.finite:
        raise InfinitePointSet("non-degeneracy is decided on finite point sets only")
    t, L, R = map_tables(r, budget)
    N = t.N
    rep = NondegeneracyReport(r.name, N, True, True)
    for s in range(N):
        row = L[s]
        if len(np.unique(row)) < N:
            rep.left_bijective = False
            a, b = _collision(row)
            rep.left_witness = _render(t, (s, a, b))
            break
    for u in range(N):
        col = R[:, u]
        if len(np.unique(col)) < N:
            rep.right_bijective = False
            a, b = _collision(col)
            rep.right_witness = _render(t, (u, a, b))
            break
    return rep


def _collision(vals: np.ndarray) -> tuple[int, int]:
    seen: dict[int, int] = {}
    for i, v in enumerate(vals.tolist()):
        if v in seen:
            return seen[v], i
        seen[v] = i
    raise AssertionError("no collision")


def same_map(r1: YBMap, r2: YBMap, budget: int = DEFAULT_BUDGET) -> bool:
    """Exhaustive equality of two maps on the same point set."""
    _, L1, R1 = map_tables(r1, budget)
    _, L2, R2 = map_tables(r2, budget)
    return bool((L1 == L2).all() and (R1 == R2).all())


__all__ = [
    "KINDS",
    "BraidReport",
    "ComponentReport",
    "NondegeneracyReport",
    "YBMap",
    "check_braid",
    "check_components",
    "check_nondegenerate",
    "custom_map",
    "make_map",
    "map_tables",
    "point_table",
    "reduced_map",
    "same_map",
]
