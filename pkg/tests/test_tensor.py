import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from supertruss import QQ, AmbientMismatch, GeneratorSet, SuperPoly, TensorElement
from supertruss.tensor import collapse, koszul_permute, m135, m246, mult_collapse, outer, project_even, sigma13

from conftest import GENS, tensors

G = GeneratorSet.of("x", "theta:odd", "tp:odd")


def g(name):
    return SuperPoly.gen(G, QQ, name)


ONE = SuperPoly.constant(G, QQ, 1)


def T(*factors):
    return TensorElement.pure(*factors)


def bubble_permute(perm, t):
    """Oracle: realise the permutation by adjacent swaps, each costing (-1)^{|a||b|}."""
    out = TensorElement.zero(t.gens, t.field, t.arity)
    target = [i - 1 for i in perm]
    for key, c in t.terms.items():
        order = list(range(t.arity))  # order[slot] = input index currently there
        factors = list(key)
        sign = 1
        # insertion-sort the current arrangement into the target arrangement
        for slot in range(t.arity):
            j = order.index(target[slot], slot)
            while j > slot:
                if factors[j].parity and factors[j - 1].parity:
                    sign = -sign
                factors[j], factors[j - 1] = factors[j - 1], factors[j]
                order[j], order[j - 1] = order[j - 1], order[j]
                j -= 1
        out = out + TensorElement(t.gens, t.field, t.arity, {tuple(factors): sign * c})
    return out


class TestProducts:
    def test_one_crossing(self):
        assert T(ONE, g("theta")) * T(g("theta"), ONE) == -T(g("theta"), g("theta"))

    def test_no_crossing(self):
        assert T(g("theta"), ONE) * T(ONE, g("theta")) == T(g("theta"), g("theta"))

    def test_delta2_theta_squares_to_zero(self):
        d = T(g("x"), g("theta")) + T(g("theta"), g("x"))
        assert (d * d).is_zero()

    def test_rendering(self):
        assert str(T(g("x"), g("theta")) - T(ONE, g("x") * g("tp"))) == "x # theta - 1 # x*tp"

    def test_arity_mismatch(self):
        with pytest.raises(AmbientMismatch):
            T(g("x")) * T(g("x"), g("x"))

    @given(tensors(2), tensors(2), tensors(2))
    def test_associative(self, a, b, c):
        assert (a * b) * c == a * (b * c)

    @given(tensors(3), tensors(3))
    def test_unit(self, a, _):
        one = TensorElement.unit(GENS, QQ, 3)
        assert one * a == a == a * one


class TestPermutations:
    def test_sigma13_examples(self):
        assert sigma13(T(g("theta"), ONE, ONE)) == T(ONE, ONE, g("theta"))
        assert sigma13(T(g("theta"), g("tp"), ONE)) == -T(ONE, g("tp"), g("theta"))
        assert sigma13(T(g("theta"), g("tp"), ONE), graded=False) == T(ONE, g("tp"), g("theta"))

    def test_all_even_monomial(self):
        t = T(g("x"), g("x") * g("x"), ONE)
        for perm in itertools.permutations((1, 2, 3)):
            assert set(koszul_permute(perm, t).terms.values()) == {1}

    def test_bad_permutation(self):
        with pytest.raises(AmbientMismatch):
            koszul_permute((1, 1, 2), T(ONE, ONE, ONE))

    @given(tensors(4), st.permutations([1, 2, 3, 4]))
    def test_matches_adjacent_swap_oracle(self, t, perm):
        assert koszul_permute(perm, t) == bubble_permute(perm, t)

    @given(tensors(3), st.permutations([1, 2, 3]), st.permutations([1, 2, 3]))
    def test_group_action(self, t, p, q):
        composite = tuple(q[p[k] - 1] for k in range(3))
        assert koszul_permute(p, koszul_permute(q, t)) == koszul_permute(composite, t)

    @given(tensors(3))
    def test_sigma13_involution(self, t):
        assert sigma13(sigma13(t)) == t
        assert sigma13(sigma13(t, graded=False), graded=False) == t


class TestCollapse:
    def test_examples(self):
        assert mult_collapse(2, T(g("x"), g("x"))).terms == (g("x") ** 2).terms
        assert mult_collapse(3, T(g("theta"), ONE, g("tp"))) == g("theta") * g("tp")
        assert mult_collapse(2, T(g("theta"), g("theta"))).is_zero()

    def test_collapse_blocks(self):
        t = T(g("x"), g("theta"), g("tp"))
        assert collapse(t, (1, 2)) == T(g("x"), g("theta") * g("tp"))


def oracle135(t):
    return collapse(koszul_permute((1, 3, 5, 2, 4, 6), t), (3, 1, 1, 1))


def oracle246(t):
    return collapse(koszul_permute((1, 3, 5, 2, 4, 6), t), (1, 1, 1, 3))


class TestM135M246:
    def test_m135_examples(self):
        x = g("x")
        assert m135(T(x, x, x, x, x, x)) == T(x ** 3, x, x, x)
        assert m135(T(x, g("theta"), g("tp"), x, ONE, ONE)) == -T(x * g("tp"), g("theta"), x, ONE)
        assert m135(T(g("theta"), ONE, ONE, ONE, ONE, ONE)) == T(g("theta"), ONE, ONE, ONE)

    def test_m246_examples(self):
        x = g("x")
        assert m246(T(x, x, x, x, x, x)) == T(x, x, x, x ** 3)
        assert m246(T(ONE, g("theta"), g("tp"), ONE, ONE, ONE)) == -T(ONE, g("tp"), ONE, g("theta"))
        assert m246(T(ONE, ONE, ONE, ONE, g("theta"), ONE)) == T(ONE, ONE, g("theta"), ONE)

    @given(tensors(6, homogeneous=True))
    def test_m135_matches_permute_then_multiply(self, t):
        assert m135(t) == oracle135(t)

    @given(tensors(6, homogeneous=True))
    def test_m246_matches_permute_then_multiply(self, t):
        assert m246(t) == oracle246(t)


def test_project_even():
    red = G.without_odd()
    t = T(g("x"), g("x")) + T(g("theta"), g("tp"))
    xr = SuperPoly.gen(red, QQ, "x")
    assert project_even(t, red) == TensorElement.pure(xr, xr)
    assert outer(T(g("x")), T(ONE)).arity == 2
