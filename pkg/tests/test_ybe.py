import random

import pytest

from supertruss import GF, QQ, GrassmannAlgebra, builtin, grassmann_inverse
from supertruss.cotruss import reduce
from supertruss.errors import InfinitePointSet, MissingCounit, NotGroupLike, NotMultiplicative
from supertruss.points import (
    brace_add,
    enumerate_points,
    parity_involution,
    point_mul,
    sample_point,
)
from supertruss.ybe import (
    check_braid,
    check_components,
    check_nondegenerate,
    custom_map,
    make_map,
    reduced_map,
    same_map,
)

F2, F3 = GF(2), GF(3)
A1 = GrassmannAlgebra(F3, 1)


@pytest.fixture(scope="module")
def pt3():
    return builtin("poly_theta", F3)


@pytest.fixture(scope="module")
def lt3():
    return builtin("laurent_theta", F3)


def wrong(P, A):
    return custom_map(P, A, lambda o, s, t: (o.mul(s, t), s), "wrong")


class TestFormulas:
    A = GrassmannAlgebra(QQ, 4)

    def two(self, P, seed=3):
        rng = random.Random(seed)
        return sample_point(P, self.A, rng), sample_point(P, self.A, rng)

    def test_left_action(self, poly_theta):
        s, t = self.two(poly_theta)
        lam, rho = make_map("left_action", poly_theta, self.A)(s, t)
        x1, x2, th1, th2 = s["x"], t["x"], s["theta"], t["theta"]
        assert lam["x"] == x1 * x2 + th1 * th2 - x1 + self.A.one()
        assert lam["theta"] == x1 * th2 + th1 * x2 - th1
        assert rho == s

    def test_composed_alpha(self, poly_theta):
        s, t = self.two(poly_theta)
        lam, rho = make_map("composed", poly_theta, self.A, inner="left_action")(s, t)
        x1, x2, th1, th2 = s["x"], t["x"], s["theta"], t["theta"]
        assert lam["x"] == x1 * x2 + th1 * th2 - x1 + self.A.one()
        assert lam["theta"] == -(x1 * th2) - th1 * x2 + th1
        assert rho["x"] == x1 and rho["theta"] == -th1

    def test_superflip(self, poly_theta):
        s, t = self.two(poly_theta)
        lam, rho = make_map("superflip", poly_theta, self.A)(s, t)
        assert (lam["x"], lam["theta"]) == (t["x"], -t["theta"])
        assert (rho["x"], rho["theta"]) == (s["x"], -s["theta"])

    def test_odd_scaling_and_inverse(self, laurent_theta):
        s, t = self.two(laurent_theta)
        lam, rho = make_map("odd_scaling", laurent_theta, self.A, q=3)(s, t)
        assert (lam["x"], lam["theta"]) == (t["x"], t["theta"].scale(3))
        assert (rho["x"], rho["theta"]) == (s["x"], s["theta"].scale(QQ.coerce("1/3")))
        lam, rho = make_map("inverse_map", laurent_theta, self.A)(s, t)
        ti = grassmann_inverse(t["x"])
        assert (lam["x"], lam["theta"]) == (ti, -(ti * ti * t["theta"]))


class TestPreconditions:
    def test_missing_counit(self):
        P = builtin("poly_theta").replace(counit=None, cozero=None)
        with pytest.raises(MissingCounit):
            make_map("flip", P, A1)

    def test_inverse_needs_group(self, pt3):
        with pytest.raises(NotGroupLike):
            make_map("inverse_map", pt3, A1)

    def test_scaling_multiplicativity(self, pt3):
        # q^2 = 1 is forced by the theta # theta term of Delta2(x)
        with pytest.raises(NotMultiplicative):
            make_map("odd_scaling", builtin("poly_theta", GF(5)), GrassmannAlgebra(GF(5), 1), q=2)
        assert make_map("odd_scaling", pt3, A1, q=2).name == "odd_scaling(q=2)"

    def test_bad_q_and_kind(self, lt3):
        with pytest.raises(ValueError):
            make_map("odd_scaling", lt3, A1, q=3)
        with pytest.raises(ValueError):
            make_map("shuffle", lt3, A1)

    def test_hyphenated_kind(self, lt3):
        assert make_map("inverse-map", lt3, A1).kind == "inverse_map"


class TestBraid:
    @pytest.mark.parametrize("kind,q", [("flip", None), ("superflip", None), ("odd_scaling", 2)])
    def test_poly_theta_maps_pass(self, pt3, kind, q):
        r = make_map(kind, pt3, A1, q=q)
        b, c = check_braid(r), check_components(r)
        assert b.passed and b.triples == 9**3
        assert c.passed and c.agrees_with_braid

    @pytest.mark.parametrize("kind,q", [
        ("flip", None), ("superflip", None), ("left_action", None), ("inverse_map", None), ("odd_scaling", 2),
    ])
    def test_laurent_maps_pass(self, lt3, kind, q):
        r = make_map(kind, lt3, A1, q=q)
        assert check_braid(r).passed and check_components(r).agrees_with_braid

    def test_composed_scale(self, lt3):
        r = make_map("composed", lt3, A1, q=2, outer="scale", inner="inverse_map")
        assert r.name == "composed(sigma_2, inverse_map)"
        assert check_braid(r).passed

    def test_left_action_on_poly_theta_fails_yb1(self, pt3):
        # with rho_t(s) = s, YB1 reads stu - st = (st - s + 1)(su - s) on even points
        r = make_map("left_action", pt3, GrassmannAlgebra(F3, 0))
        b = check_braid(r)
        assert not b.passed
        zero = {"x": "0", "theta": "0"}
        assert b.witness == [{"x": "2", "theta": "0"}, zero, zero]
        c = check_components(r)
        assert c.results == {"YB1": False, "YB2": True, "YB3": True}
        assert c.witnesses["YB1"] == b.witness

    def test_wrong_map_witness_shared(self, pt3):
        r = wrong(pt3, A1)
        b, c = check_braid(r), check_components(r)
        assert not b.passed and b.lhs != b.rhs
        assert not c.passed and c.agrees_with_braid
        assert b.witness in c.witnesses.values()

    def test_sampled_over_qq(self, laurent_theta, poly_theta):
        A = GrassmannAlgebra(QQ, 2)
        assert check_braid(make_map("inverse_map", laurent_theta, A), "samples", samples=20).passed
        assert not check_components(wrong(poly_theta, A), "samples", samples=20).passed


class TestNondegeneracy:
    def test_superflip(self, pt3):
        assert check_nondegenerate(make_map("superflip", pt3, A1)).passed

    def test_left_action_degenerate(self):
        P, A = builtin("poly_theta", F2), GrassmannAlgebra(F2, 1)
        rep = check_nondegenerate(make_map("left_action", P, A))
        assert not rep.left_bijective and rep.right_bijective
        # lambda_s collapses when the x-image of s is 0
        assert rep.left_witness[0]["x"] == "0"

    def test_inverse_map(self, lt3):
        assert check_nondegenerate(make_map("inverse_map", lt3, A1)).passed

    def test_infinite(self, poly_theta):
        with pytest.raises(InfinitePointSet):
            check_nondegenerate(make_map("flip", poly_theta, GrassmannAlgebra(QQ, 1)))


class TestReduced:
    def test_superflip_reduces_to_flip(self, pt3):
        r = reduced_map(make_map("superflip", pt3, A1))
        R = reduce(pt3)
        assert r.presentation == R
        assert same_map(r, make_map("flip", R, A1))

    def test_scaling_reduces_to_flip(self, lt3):
        r = reduced_map(make_map("odd_scaling", lt3, A1, q=2))
        assert same_map(r, make_map("flip", reduce(lt3), A1))

    def test_superflip_differs_before_reduction(self, pt3):
        assert not same_map(make_map("superflip", pt3, A1), make_map("flip", pt3, A1))


def test_alpha_is_brace_automorphism():
    for name in ("poly_theta", "laurent_theta"):
        P = builtin(name, F3)
        pts = enumerate_points(P, A1)
        for s in pts:
            assert parity_involution(parity_involution(s)) == s
            for t in pts:
                a = parity_involution
                assert a(point_mul(s, t)) == point_mul(a(s), a(t))
                assert a(brace_add(s, t)) == brace_add(a(s), a(t))
