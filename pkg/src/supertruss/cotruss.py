"""Supercotruss presentations and their axiom verifier.

A presentation is a free supercommutative algebra together with a binary
comultiplication ``delta2: X -> X#X`` and a ternary one ``delta3: X -> X#X#X``
(plus optional counit and cozero characters ``X -> K``).  Every structure map
and every composite appearing in the axioms is a superalgebra homomorphism, so
two composites agree everywhere as soon as they agree on the generators; the
checker therefore compares normal forms generator by generator.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import Callable, Iterator

from .errors import MissingMap, WellDefinednessError
from .homs import (
    GenHom,
    TensorTarget,
    apply,
    check_well_defined,
    identity,
    scalar_hom,
    tensor_hom,
)
from .superalg import EVEN, ODD, QQ, Field, Generator, GeneratorSet, SuperPoly
from .tensor import TensorElement, collapse, m135, m246, outer, project_even, sigma13

AXIOMS = ("Con1", "Con2", "Con3", "Con4", "Con5", "Con6", "Con7")
COUNIT_CHECKS = ("counit-left", "counit-right")
COZERO_CHECKS = ("cozero-left", "cozero-right")


class CotrussPresentation:
    """Generators plus structure maps; validated for well-definedness on construction."""

    __slots__ = ("gens", "field", "delta2", "delta3", "counit", "cozero", "name")

    def __init__(
        self,
        gens: GeneratorSet,
        field: Field,
        delta2: GenHom,
        delta3: GenHom,
        counit: GenHom | None = None,
        cozero: GenHom | None = None,
        name: str = "",
    ):
        for label, h, arity in (("delta2", delta2, 2), ("delta3", delta3, 3), ("counit", counit, 0), ("cozero", cozero, 0)):
            if h is None:
                continue
            want = TensorTarget(gens, field, arity)
            if h.source != gens or h.target != want:
                raise ValueError(f"{label} must map the presentation into {want}")
            check_well_defined(h)
        self.gens = gens
        self.field = field
        self.delta2 = delta2
        self.delta3 = delta3
        self.counit = counit
        self.cozero = cozero
        self.name = name

    def _key(self):
        return (self.gens, self.field, self.delta2, self.delta3, self.counit, self.cozero)

    def __eq__(self, other) -> bool:
        return isinstance(other, CotrussPresentation) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"CotrussPresentation({self.name or '?'}: {', '.join(g.name for g in self.gens)} over {self.field})"

    def element(self, name: str, power: int = 1) -> SuperPoly:
        return SuperPoly.gen(self.gens, self.field, name, power)

    def one(self) -> SuperPoly:
        return SuperPoly.constant(self.gens, self.field, 1)

    def maps(self) -> dict[str, GenHom]:
        out = {"delta2": self.delta2, "delta3": self.delta3}
        if self.counit is not None:
            out["counit"] = self.counit
        if self.cozero is not None:
            out["cozero"] = self.cozero
        return out

    def replace(self, **changes) -> "CotrussPresentation":
        kw = dict(
            gens=self.gens, field=self.field, delta2=self.delta2, delta3=self.delta3,
            counit=self.counit, cozero=self.cozero, name=self.name,
        )
        kw.update(changes)
        return CotrussPresentation(**kw)


# ---------------------------------------------------------------------------
# reports


@dataclass
class CheckResult:
    name: str
    passed: bool = True
    checked: int = 0
    witness: str | None = None
    lhs: str | None = None
    rhs: str | None = None

    def to_dict(self) -> dict:
        d = {"name": self.name, "passed": self.passed, "checked": self.checked}
        if not self.passed:
            d["witness"] = {"element": self.witness, "lhs": self.lhs, "rhs": self.rhs}
        return d


@dataclass
class AxiomReport:
    presentation: str
    results: list[CheckResult] = dc_field(default_factory=list)
    notes: list[str] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def __getitem__(self, name: str) -> CheckResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def names(self) -> list[str]:
        return [r.name for r in self.results]

    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if not r.passed]

    def to_dict(self) -> dict:
        return {
            "presentation": self.presentation,
            "passed": self.passed,
            "checks": [r.to_dict() for r in self.results],
            "notes": list(self.notes),
        }


def _record(res: CheckResult, label: str, lhs, rhs) -> None:
    res.checked += 1
    if res.passed and lhs != rhs:
        res.passed = False
        res.witness, res.lhs, res.rhs = label, str(lhs), str(rhs)


# ---------------------------------------------------------------------------
# axiom composites


class _Maps:
    """The composites of the axiom system, as functions of an element of X."""

    def __init__(self, P: CotrussPresentation, graded_sigma13: bool = True):
        self.P = P
        self.graded = graded_sigma13
        self.id = identity(P.gens, P.field)
        d2, d3, i = P.delta2, P.delta3, self.id
        self.id_id_d3 = tensor_hom(i, i, d3)
        self.d3_id_id = tensor_hom(d3, i, i)
        self.d2_id = tensor_hom(d2, i)
        self.id_d2 = tensor_hom(i, d2)
        self.id_d3 = tensor_hom(i, d3)
        self.d3_id = tensor_hom(d3, i)
        self.d2_d2_d2 = tensor_hom(d2, d2, d2)
        self.unit1 = TensorElement.unit(P.gens, P.field, 1)

    def axioms(self, a: SuperPoly) -> dict[str, tuple[TensorElement, TensorElement]]:
        P = self.P
        A = TensorElement.from_poly(a)
        D2 = apply(P.delta2, a)
        D3 = apply(P.delta3, a)
        spread = self.d2_d2_d2(D3)
        return {
            "Con1": (self.id_id_d3(D3), self.d3_id_id(D3)),
            "Con2": (collapse(D3, (1, 2)), outer(A, self.unit1)),
            "Con3": (collapse(D3, (2, 1)), outer(self.unit1, A)),
            "Con4": (D3, sigma13(D3, self.graded)),
            "Con5": (self.d2_id(D2), self.id_d2(D2)),
            "Con6": (self.id_d3(D2), m135(spread)),
            "Con7": (self.d3_id(D2), m246(spread)),
        }

    def counit(self, a: SuperPoly) -> dict[str, tuple[TensorElement, TensorElement]]:
        e = self.P.counit
        D2 = apply(self.P.delta2, a)
        A = TensorElement.from_poly(a)
        return {
            "counit-left": (tensor_hom(e, self.id)(D2), A),
            "counit-right": (tensor_hom(self.id, e)(D2), A),
        }

    def cozero(self, a: SuperPoly) -> dict[str, tuple[TensorElement, TensorElement]]:
        z = self.P.cozero
        D2 = apply(self.P.delta2, a)
        za = self.unit1.scale(apply(z, a).to_scalar())
        return {
            "cozero-left": (tensor_hom(self.id, z)(D2), za),
            "cozero-right": (tensor_hom(z, self.id)(D2), za),
        }


def _test_elements(P: CotrussPresentation, slow: bool, seed: int, samples: int) -> list[tuple[str, SuperPoly]]:
    out = [(n, P.element(n)) for n in P.gens.names()]
    out.append(("1", P.one()))
    if slow and P.gens.names():
        rng = random.Random(seed)
        names = P.gens.names()
        for _ in range(samples):
            el = P.one().scale(0)
            for _ in range(rng.randint(1, 3)):
                mono = P.one().scale(rng.choice([c for c in range(-3, 4) if c]))
                for _ in range(rng.randint(1, 3)):
                    mono = mono * P.element(rng.choice(names))
                el = el + mono
            out.append((str(el), el))
    return out


def _run(P, groups: list[tuple[tuple[str, ...], Callable]], slow: bool, seed: int, samples: int) -> AxiomReport:
    report = AxiomReport(P.name)
    results = {}
    for names, _ in groups:
        for n in names:
            results[n] = CheckResult(n)
            report.results.append(results[n])
    for label, a in _test_elements(P, slow, seed, samples):
        for _, fn in groups:
            for n, (lhs, rhs) in fn(a).items():
                _record(results[n], label, lhs, rhs)
    if P.field.sign_blind:
        report.notes.append("characteristic 2: Koszul signs are invisible (sign-blind check)")
    if slow:
        report.notes.append(f"slow mode: {samples} random products re-checked (seed {seed})")
    return report


def check_axioms(
    P: CotrussPresentation,
    sigma13_mode: str = "graded",
    slow: bool = False,
    seed: int = 0,
    samples: int = 20,
    include_optional: bool = True,
) -> AxiomReport:
    """Evaluate both sides of Con1..Con7 (and counit/cozero, when present) on generators.

    ``sigma13_mode`` selects the graded (Koszul) or the plain swap in Con4.
    ``slow=True`` additionally compares both sides on random products.
    """
    if sigma13_mode not in ("graded", "plain"):
        raise ValueError("sigma13_mode must be 'graded' or 'plain'")
    maps = _Maps(P, sigma13_mode == "graded")
    groups: list = [(AXIOMS, maps.axioms)]
    if include_optional and P.counit is not None:
        groups.append((COUNIT_CHECKS, maps.counit))
    if include_optional and P.cozero is not None:
        groups.append((COZERO_CHECKS, maps.cozero))
    report = _run(P, groups, slow, seed, samples)
    if sigma13_mode == "plain":
        report.notes.append("Con4 checked with the plain (unsigned) swap")
    return report


def check_counit(P: CotrussPresentation) -> AxiomReport:
    if P.counit is None:
        raise MissingMap(f"{P.name or 'presentation'} has no counit")
    return _run(P, [(COUNIT_CHECKS, _Maps(P).counit)], False, 0, 0)


def check_cozero(P: CotrussPresentation) -> AxiomReport:
    if P.cozero is None:
        raise MissingMap(f"{P.name or 'presentation'} has no cozero")
    return _run(P, [(COZERO_CHECKS, _Maps(P).cozero)], False, 0, 0)


# ---------------------------------------------------------------------------
# reduction, trussification, morphisms


def _project_hom(h: GenHom | None, gens: GeneratorSet) -> GenHom | None:
    if h is None:
        return None
    images = {n: project_even(h.images[n], gens) for n in gens.names()}
    return GenHom(gens, h.field, TensorTarget(gens, h.field, h.target.arity), images)


def reduce(P: CotrussPresentation) -> CotrussPresentation:
    """Quotient by the ideal of odd elements: drop odd generators, set them to zero."""
    red = P.gens.without_odd()
    name = P.name if not P.gens.odd or P.name.endswith("_red") else f"{P.name}_red"
    return CotrussPresentation(
        red, P.field,
        _project_hom(P.delta2, red), _project_hom(P.delta3, red),
        _project_hom(P.counit, red), _project_hom(P.cozero, red),
        name=name,
    )


def trussify_hopf(
    gens: GeneratorSet,
    field: Field,
    delta: GenHom,
    antipode: GenHom,
    counit: GenHom | None = None,
    bracketing: str = "left",
    name: str = "",
) -> CotrussPresentation:
    """Cotruss of an abelian Hopf superalgebra: ``delta3 = (1 # S # 1) o delta_2``.

    ``delta_2`` is the iterated coproduct ``(delta # 1) o delta`` (``bracketing="left"``)
    or ``(1 # delta) o delta`` (``"right"``); the two agree when ``delta`` is coassociative.
    """
    check_well_defined(delta)
    check_well_defined(antipode)
    i = identity(gens, field)
    if bracketing == "left":
        iterate = tensor_hom(delta, i)
    elif bracketing == "right":
        iterate = tensor_hom(i, delta)
    else:
        raise ValueError("bracketing must be 'left' or 'right'")
    twist = tensor_hom(i, antipode, i)
    images = {n: twist(iterate(apply(delta, SuperPoly.gen(gens, field, n)))) for n in gens.names()}
    delta3 = GenHom(gens, field, TensorTarget(gens, field, 3), images)
    return CotrussPresentation(gens, field, delta, delta3, counit=counit, name=name)


def check_morphism(phi: GenHom, P: CotrussPresentation, Q: CotrussPresentation) -> AxiomReport:
    """Check that ``phi: X_P -> X_Q`` intertwines delta2, delta3 and the characters."""
    if not (phi.source == P.gens and phi.target == TensorTarget(Q.gens, Q.field, 1)):
        raise ValueError("phi must map the generators of P into X_Q")
    check_well_defined(phi)
    report = AxiomReport(f"{P.name} -> {Q.name}")
    pp2 = tensor_hom(phi, phi)
    pp3 = tensor_hom(phi, phi, phi)
    checks = [
        ("delta2", lambda a: (apply(Q.delta2, apply(phi, a)), pp2(apply(P.delta2, a)))),
        ("delta3", lambda a: (apply(Q.delta3, apply(phi, a)), pp3(apply(P.delta3, a)))),
    ]
    if P.counit is not None and Q.counit is not None:
        checks.append(("counit", lambda a: (apply(Q.counit, apply(phi, a)).to_scalar(), apply(P.counit, a).to_scalar())))
    elif P.counit is not None or Q.counit is not None:
        report.notes.append("counit present on one side only; not compared")
    if P.cozero is not None and Q.cozero is not None:
        checks.append(("cozero", lambda a: (apply(Q.cozero, apply(phi, a)).to_scalar(), apply(P.cozero, a).to_scalar())))
    elif P.cozero is not None or Q.cozero is not None:
        report.notes.append("cozero present on one side only; not compared")
    for name, _ in checks:
        report.results.append(CheckResult(name))
    for n in P.gens.names():
        a = P.element(n)
        for res, (_, fn) in zip(report.results, checks):
            lhs, rhs = fn(a)
            _record(res, n, lhs, rhs)
    return report


# ---------------------------------------------------------------------------
# built-in presentations


def _maps_for(gens: GeneratorSet, field: Field, arity: int, images: dict) -> GenHom:
    return GenHom(gens, field, TensorTarget(gens, field, arity), images)


def _trivial(field: Field) -> CotrussPresentation:
    g = GeneratorSet([])
    return CotrussPresentation(
        g, field, _maps_for(g, field, 2, {}), _maps_for(g, field, 3, {}),
        counit=scalar_hom(g, field, {}), name="trivial",
    )


def _poly_theta(field: Field) -> CotrussPresentation:
    g = GeneratorSet([Generator("x", EVEN), Generator("theta", ODD)])
    x, th = SuperPoly.gen(g, field, "x"), SuperPoly.gen(g, field, "theta")
    one = SuperPoly.constant(g, field, 1)
    T = TensorElement.pure
    d2 = {"x": T(x, x) + T(th, th), "theta": T(x, th) + T(th, x)}
    d3 = {
        "x": T(x, one, one) - T(one, x, one) + T(one, one, x),
        "theta": T(th, one, one) - T(one, th, one) + T(one, one, th),
    }
    return CotrussPresentation(
        g, field, _maps_for(g, field, 2, d2), _maps_for(g, field, 3, d3),
        counit=scalar_hom(g, field, {"x": 1, "theta": 0}),
        cozero=scalar_hom(g, field, {"x": 0, "theta": 0}),
        name="poly_theta",
    )


def _laurent_gens() -> GeneratorSet:
    return GeneratorSet([Generator("x", EVEN, "xinv"), Generator("theta", ODD)])


def _laurent_theta(field: Field) -> CotrussPresentation:
    g = _laurent_gens()
    x, xi, th = (SuperPoly.gen(g, field, n) for n in ("x", "xinv", "theta"))
    T = TensorElement.pure
    d2 = {"x": T(x, x), "xinv": T(xi, xi), "theta": T(x, th) + T(th, x)}
    d3 = {
        "x": T(x, xi, x),
        "xinv": T(xi, x, xi),
        "theta": T(x, xi, th) - T(x, xi * xi * th, x) + T(th, xi, x),
    }
    return CotrussPresentation(
        g, field, _maps_for(g, field, 2, d2), _maps_for(g, field, 3, d3),
        counit=scalar_hom(g, field, {"x": 1, "xinv": 1, "theta": 0}),
        name="laurent_theta",
    )


def laurent_hopf_data(field: Field = QQ) -> tuple[GeneratorSet, GenHom, GenHom, GenHom]:
    """Coproduct, antipode and counit of the multiplicative supergroup on ``K[x, x^-1, theta]``."""
    g = _laurent_gens()
    x, xi, th = (SuperPoly.gen(g, field, n) for n in ("x", "xinv", "theta"))
    T = TensorElement.pure
    delta = _maps_for(g, field, 2, {"x": T(x, x), "xinv": T(xi, xi), "theta": T(x, th) + T(th, x)})
    antipode = _maps_for(g, field, 1, {
        "x": TensorElement.from_poly(xi),
        "xinv": TensorElement.from_poly(x),
        "theta": TensorElement.from_poly(-(xi * xi * th)),
    })
    counit = scalar_hom(g, field, {"x": 1, "xinv": 1, "theta": 0})
    return g, delta, antipode, counit


def _laurent_theta_via_hopf(field: Field) -> CotrussPresentation:
    g, delta, antipode, counit = laurent_hopf_data(field)
    return trussify_hopf(g, field, delta, antipode, counit, name="laurent_theta_via_hopf")


BUILTINS: dict[str, Callable[[Field], CotrussPresentation]] = {
    "trivial": _trivial,
    "poly_theta": _poly_theta,
    "laurent_theta": _laurent_theta,
    "laurent_theta_via_hopf": _laurent_theta_via_hopf,
}


def builtin(name: str, field: Field = QQ) -> CotrussPresentation:
    try:
        make = BUILTINS[name]
    except KeyError:
        raise KeyError(f"unknown built-in {name!r}; choose from {', '.join(BUILTINS)}") from None
    return make(field)


# ---------------------------------------------------------------------------
# mutation fuzzing


@dataclass
class Mutation:
    map_name: str
    generator: str
    term: str
    presentation: CotrussPresentation | None
    error: WellDefinednessError | None

    def describe(self) -> str:
        return f"{self.map_name}({self.generator}): flipped sign of term {self.term}"


def sign_mutations(P: CotrussPresentation, maps: tuple[str, ...] = ("delta2", "delta3")) -> Iterator[Mutation]:
    """Every presentation obtained by negating exactly one term of one structure-map image.

    Mutants that are not well defined are yielded with ``error`` set instead.
    """
    for map_name in maps:
        h: GenHom = getattr(P, map_name)
        for n in P.gens.names():
            img: TensorElement = h.images[n]
            for key, _ in img.sorted_terms():
                terms = dict(img.terms)
                terms[key] = P.field.norm(-terms[key])
                new_img = TensorElement(img.gens, img.field, img.arity, terms)
                images = dict(h.images)
                images[n] = new_img
                label = " # ".join(m.render(P.gens) for m in key)
                try:
                    mutant_map = GenHom(h.source, h.field, h.target, images)
                    mutant = P.replace(**{map_name: mutant_map}, name=f"{P.name}~{map_name}:{n}:{label}")
                except WellDefinednessError as exc:
                    yield Mutation(map_name, n, label, None, exc)
                    continue
                yield Mutation(map_name, n, label, mutant, None)
