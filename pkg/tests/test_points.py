import random

import pytest

from supertruss import GF, QQ, GrassmannAlgebra, builtin, grassmann_inverse
from supertruss.cli.app import shipped_file
from supertruss.cli.stx import parse_stx
from supertruss.cotruss import reduce
from supertruss.errors import BudgetExceeded, InfiniteBase, MissingMap
from supertruss.points import (
    IDENTITIES,
    Point,
    PointTable,
    TestAlgebraHom,
    brace_add,
    brace_neg,
    check_truss_at_points,
    count_points,
    enumerate_points,
    parity_involution,
    point_heap,
    point_mul,
    pushforward,
    sample_point,
    scale_odd,
    unit_point,
    zero_point,
)

F2, F3, F5 = GF(2), GF(3), GF(5)


def test_identity_catalogue():
    assert [i.name for i in IDENTITIES] == [
        "heap-cancel-right", "heap-cancel-left", "heap-associativity", "para-associativity",
        "abelian", "transposition", "mul-associativity", "left-distributivity",
        "right-distributivity", "unit-left", "unit-right", "absorber-left", "absorber-right",
        "semi-brace-left", "semi-brace-right",
    ]


class TestEnumeration:
    @pytest.mark.parametrize("name,field,n,count", [
        ("trivial", F3, 2, 1),
        ("poly_theta", F2, 1, 4),
        ("poly_theta", F3, 2, 81),
        ("laurent_theta", F3, 0, 2),
        ("laurent_theta", F3, 1, 6),
        ("laurent_theta", F5, 0, 4),
    ])
    def test_counts(self, name, field, n, count):
        P, A = builtin(name, field), GrassmannAlgebra(field, n)
        pts = enumerate_points(P, A)
        assert len(pts) == count == count_points(P, A) == len(set(pts))

    def test_order_and_values(self):
        pts = enumerate_points(builtin("poly_theta", F2), GrassmannAlgebra(F2, 1))
        assert [str(p) for p in pts] == [
            "(x: 0, theta: 0)", "(x: 0, theta: xi1)", "(x: 1, theta: 0)", "(x: 1, theta: xi1)",
        ]

    def test_laurent_inverse_images(self):
        A = GrassmannAlgebra(F3, 2)
        for p in enumerate_points(builtin("laurent_theta", F3), A):
            assert p["x"] * p["xinv"] == A.one()

    def test_infinite(self, poly_theta):
        with pytest.raises(InfiniteBase):
            enumerate_points(poly_theta, GrassmannAlgebra(QQ, 1))

    def test_sampling_is_deterministic(self, laurent_theta):
        A = GrassmannAlgebra(QQ, 3)
        a, b = sample_point(laurent_theta, A, 7), sample_point(laurent_theta, A, 7)
        assert a == b
        assert a["x"].scalar_part() != 0
        assert sample_point(builtin("trivial"), A, 3) == sample_point(builtin("trivial"), A, 11)

    def test_invalid_point_rejected(self, laurent_theta):
        A = GrassmannAlgebra(QQ, 1)
        with pytest.raises(Exception):
            Point(laurent_theta, A, {"x": A.scalar(2), "xinv": A.scalar(2), "theta": A.zero()})


class TestOperations:
    A = GrassmannAlgebra(QQ, 4)

    def pts(self, P, k, seed=1):
        rng = random.Random(seed)
        return [sample_point(P, self.A, rng) for _ in range(k)]

    def test_poly_theta_product_and_heap(self, poly_theta):
        s, t, u = self.pts(poly_theta, 3)
        st = point_mul(s, t)
        assert st["x"] == s["x"] * t["x"] + s["theta"] * t["theta"]
        assert st["theta"] == s["x"] * t["theta"] + s["theta"] * t["x"]
        h = point_heap(s, t, u)
        assert h["x"] == s["x"] - t["x"] + u["x"]
        assert h["theta"] == s["theta"] - t["theta"] + u["theta"]

    def test_poly_theta_unit_zero_brace(self, poly_theta):
        A = self.A
        e, z = unit_point(poly_theta, A), zero_point(poly_theta, A)
        assert (e["x"], e["theta"]) == (A.one(), A.zero())
        assert (z["x"], z["theta"]) == (A.zero(), A.zero())
        t, u = self.pts(poly_theta, 2)
        assert brace_add(t, u)["x"] == t["x"] - A.one() + u["x"]
        assert brace_neg(u)["x"] == A.scalar(2) - u["x"]
        assert brace_neg(u)["theta"] == -u["theta"]

    def test_laurent_heap(self, laurent_theta):
        s, t, u = self.pts(laurent_theta, 3)
        ti = grassmann_inverse(t["x"])
        h = point_heap(s, t, u)
        assert h["x"] == s["x"] * ti * u["x"]
        assert h["theta"] == s["x"] * ti * u["theta"] - s["x"] * ti * ti * t["theta"] * u["x"] + s["theta"] * ti * u["x"]

    def test_group_recovery(self, laurent_theta):
        e = unit_point(laurent_theta, self.A)
        for s in self.pts(laurent_theta, 10):
            inv = brace_neg(s)
            xi = grassmann_inverse(s["x"])
            # the group inverse carries x^-2 on the odd coordinate
            assert inv["theta"] == -(xi * xi * s["theta"])
            assert point_mul(inv, s) == e == point_mul(s, inv)

    def test_missing_cozero(self, laurent_theta):
        with pytest.raises(MissingMap):
            zero_point(laurent_theta, self.A)

    def test_parity_involution_and_scaling(self, poly_theta):
        s, t = self.pts(poly_theta, 2)
        a = parity_involution
        assert a(a(s)) == s
        assert a(point_mul(s, t)) == point_mul(a(s), a(t))
        assert a(brace_add(s, t)) == brace_add(a(s), a(t))
        assert scale_odd(s, -1) == a(s)
        assert scale_odd(scale_odd(s, 2), QQ.coerce("1/2")) == s


class TestNaturality:
    def test_random_maps(self, rng):
        P = builtin("poly_theta", F3)
        A2, A1 = GrassmannAlgebra(F3, 2), GrassmannAlgebra(F3, 1)
        pts = enumerate_points(P, A2)
        some = rng.sample(pts, 12)
        e2, e1 = unit_point(P, A2), unit_point(P, A1)
        for _ in range(5):
            psi = TestAlgebraHom.random(A2, A1, rng)
            f = lambda s: pushforward(psi, s)
            assert f(e2) == e1
            for s, t, u in zip(some, some[1:], some[2:]):
                assert f(point_mul(s, t)) == point_mul(f(s), f(t))
                assert f(point_heap(s, t, u)) == point_heap(f(s), f(t), f(u))
                assert f(brace_add(s, t)) == brace_add(f(s), f(t))
                assert f(brace_neg(s)) == brace_neg(f(s))

    def test_identity_and_projection(self, poly_theta):
        A2, A1 = GrassmannAlgebra(QQ, 2), GrassmannAlgebra(QQ, 1)
        s = sample_point(poly_theta, A2, 3)
        assert pushforward(TestAlgebraHom.identity(A2), s) == s
        proj = TestAlgebraHom(A2, A1, (A1.xi(1), A1.zero()))
        p = pushforward(proj, s)
        assert p["theta"] == A1.xi(1).scale(s["theta"].terms.get(1, 0))

    def test_bad_image(self):
        A = GrassmannAlgebra(QQ, 1)
        with pytest.raises(ValueError):
            TestAlgebraHom(A, A, (A.one(),))


def test_reduced_consistency(poly_theta):
    """Killing every xi and then multiplying in reduce(P) agrees with multiplying first."""
    A2, A0 = GrassmannAlgebra(QQ, 2), GrassmannAlgebra(QQ, 0)
    kill = TestAlgebraHom(A2, A0, (A0.zero(), A0.zero()))
    R = reduce(poly_theta)
    rng = random.Random(5)

    def red(s):
        p = pushforward(kill, s)
        return Point(R, A0, {"x": p["x"]})

    for _ in range(20):
        s, t, u = (sample_point(poly_theta, A2, rng) for _ in range(3))
        assert red(point_mul(s, t)) == point_mul(red(s), red(t))
        assert red(point_heap(s, t, u)) == point_heap(red(s), red(t), red(u))


class TestTrussCheck:
    @pytest.mark.parametrize("name,field,n", [
        ("poly_theta", F2, 1),
        ("poly_theta", F3, 1),
        ("laurent_theta", F3, 1),
        ("laurent_theta", F5, 0),
        ("laurent_theta", F3, 0),
        ("trivial", F3, 1),
    ])
    def test_exhaustive_pass(self, name, field, n):
        rep = check_truss_at_points(builtin(name, field), GrassmannAlgebra(field, n))
        assert rep.passed, [r.to_dict() for r in rep.results if not r.passed]
        assert all(r.decided for r in rep.results)

    def test_identity_selection(self):
        rep = check_truss_at_points(builtin("laurent_theta", F3), GrassmannAlgebra(F3, 1))
        names = [r.name for r in rep.results]
        assert "absorber-left" not in names and "unit-left" in names

    def test_certificate_agrees_with_literal(self):
        P, A = builtin("poly_theta", F2), GrassmannAlgebra(F2, 1)
        lit = check_truss_at_points(P, A, literal_cap=10**9)
        cert = check_truss_at_points(P, A, literal_cap=10)
        assert {r.method for r in lit.results} == {"literal"}
        assert "certificate" in {r.method for r in cert.results}
        assert [r.passed for r in lit.results] == [r.passed for r in cert.results]

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            check_truss_at_points(builtin("poly_theta", F3), GrassmannAlgebra(F3, 2), budget=1000)

    def test_qq_exhaustive_refused(self, poly_theta):
        with pytest.raises(InfiniteBase):
            check_truss_at_points(poly_theta, GrassmannAlgebra(QQ, 1))

    def test_samples_over_qq(self, laurent_theta):
        rep = check_truss_at_points(laurent_theta, GrassmannAlgebra(QQ, 2), mode="samples", samples=10, seed=4)
        assert rep.passed and rep.mode == "samples(N=10, seed=4)"
        assert "evidence" in rep.notes[0]

    def test_mutated_distributivity_witness(self):
        P = parse_stx(shipped_file("poly_theta_mutated"), field=F3)
        rep = check_truss_at_points(P, GrassmannAlgebra(F3, 1))
        res = rep["left-distributivity"]
        assert not res.passed and res.status == "fail"
        s, t1, t2, t3 = res.witness
        # the odd coordinate picks up theta_s * x_2 with the wrong sign
        assert s == {"x": "0", "theta": "xi1"} and t2["x"] == "1"
        assert rep["heap-cancel-right"].status == "fail"


def test_point_table_matches_symbolic():
    P, A = builtin("laurent_theta", F3), GrassmannAlgebra(F3, 1)
    table = PointTable(P, A)
    pts = table.points
    mul, heap = table.mul_table, table.heap_table
    for i, s in enumerate(pts):
        for j, t in enumerate(pts):
            assert pts[mul[i, j]] == point_mul(s, t)
            for k, u in enumerate(pts):
                assert pts[heap[i, j, k]] == point_heap(s, t, u)
