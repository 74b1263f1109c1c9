from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from supertruss import GF, QQ, GeneratorSet, GrassmannAlgebra, SuperPoly, TensorElement, builtin

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# x invertible, y plain even, two odd generators
GENS = GeneratorSet.of("x:inv=xi", "y", "t1:odd", "t2:odd")
NAMES = ["x", "xi", "y", "t1", "t2"]


def gen(name: str, gens=GENS, field=QQ, power: int = 1) -> SuperPoly:
    return SuperPoly.gen(gens, field, name, power)


def const(c, gens=GENS, field=QQ) -> SuperPoly:
    return SuperPoly.constant(gens, field, c)


@st.composite
def monomials(draw, gens=GENS, field=QQ):
    acc = const(draw(st.integers(-3, 3).filter(bool)), gens, field)
    for name in draw(st.lists(st.sampled_from(NAMES), max_size=3)):
        acc = acc * gen(name, gens, field)
    return acc


@st.composite
def polys(draw, gens=GENS, field=QQ, max_terms=4):
    out = const(0, gens, field)
    for m in draw(st.lists(monomials(gens, field), max_size=max_terms)):
        out = out + m
    return out


@st.composite
def homogeneous_polys(draw, parity: int):
    p = draw(polys())
    return p.parity_parts()[parity]


@st.composite
def tensors(draw, arity: int, homogeneous: bool = False):
    out = TensorElement.zero(GENS, QQ, arity)
    for _ in range(draw(st.integers(1, 3))):
        factors = []
        for _ in range(arity):
            m = draw(monomials())
            factors.append(m)
        out = out + TensorElement.pure(*factors)
    if homogeneous:
        # keep a single basis tensor: homogeneous by construction
        k, c = next(iter(out.terms.items()), (None, None))
        if k is None:
            return TensorElement.unit(GENS, QQ, arity)
        return TensorElement(GENS, QQ, arity, {k: c})
    return out


@st.composite
def grassmann(draw, A: GrassmannAlgebra, parity: int | None = None):
    masks = A.basis(parity)
    lo, hi = (-3, 3) if not A.field.finite else (0, A.field.p - 1)
    return A.element({m: draw(st.integers(lo, hi)) for m in masks})


@pytest.fixture(scope="session")
def poly_theta():
    return builtin("poly_theta")


@pytest.fixture(scope="session")
def laurent_theta():
    return builtin("laurent_theta")


@pytest.fixture
def rng():
    return random.Random(20260419)


def frac(a, b=1):
    return Fraction(a, b)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
