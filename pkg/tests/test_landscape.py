import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modorient import landscape as L
from modorient.certificate import B_STAR_EXPECTED, expected_char_poly
from modorient.seeding import make_rng


def interior_points(count, seed, margin=1e-3):
    rng = make_rng(seed)
    out = []
    while len(out) < count:
        p = L.sample_J(1, rng)[0]
        if L.groups(p).min() > margin and margin < L.b_of(p) < 4.5 - margin:
            out.append(p)
    return out


def swap(p):
    z, z211, z111, z210, z110, z201, z101, z200, z100 = p
    return np.array([z, z200, z100, z201, z101, z210, z110, z211, z111])


def test_value_at_zhat():
    assert L.f_of(L.ZHAT) == pytest.approx(math.log(81 / 8), abs=1e-12)
    assert np.linalg.norm(L.grad_f(L.ZHAT)) < 1e-12


def test_zhat_coordinate_identities():
    z = dict(zip(L.COORDS, L.ZHAT))
    assert z["z"] == Fraction(1, 4)
    assert z["z211"] == z["z200"] == z["z210"] == z["z201"] == Fraction(1, 144)
    assert z["z111"] == z["z100"] == z["z110"] == z["z101"] == Fraction(7, 72)
    assert L.b_of([float(x) for x in L.ZHAT]) == pytest.approx(2.25)


def test_gradient_matches_finite_differences():
    h = 1e-6
    for p in interior_points(100, 1):
        g = L.grad_f(p)
        for i in range(9):
            e = np.zeros(9)
            e[i] = h
            fd = (L.f_of(p + e) - L.f_of(p - e)) / (2 * h)
            assert fd == pytest.approx(g[i], rel=1e-5, abs=1e-7)


def test_hessian_matches_finite_differences():
    h = 1e-5
    for p in interior_points(10, 2, margin=1e-2):
        H = L.hessian_at(tuple(p)).B
        idx = list(L.TAYLOR_ORDER)
        for a, i in enumerate(idx):
            e = np.zeros(9)
            e[i] = h
            col = (L.grad_f(p + e) - L.grad_f(p - e)) / (2 * h)
            np.testing.assert_allclose(np.asarray(H)[:, a], col[idx], rtol=1e-5, atol=1e-5)


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32))
def test_orientation_swap_symmetry(seed):
    p = L.sample_J(1, make_rng(seed))[0]
    assert L.f_of(swap(p)) == pytest.approx(L.f_of(p), abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32), t=st.floats(0, 1))
def test_b_is_affine(seed, t):
    p, q = L.sample_J(2, make_rng(seed))
    mid = t * p + (1 - t) * q
    assert L.b_of(mid) == pytest.approx(t * L.b_of(p) + (1 - t) * L.b_of(q), abs=1e-12)


def test_f_vectorized_matches_scalar():
    pts = L.sample_J(50, make_rng(3))
    vals = L.f_of(pts)
    assert np.allclose(vals, [L.f_of(p) for p in pts])


def test_f_rejects_outside():
    p = np.array([float(x) for x in L.ZHAT])
    p[1] = -0.1
    with pytest.raises(ValueError):
        L.f_of(p)
    with pytest.raises(ValueError):
        L.LandscapePoint((0.0,) * 8)


def test_prefactor_matches_stirling():
    # full Stirling on every factorial of a weight gives log g + n f exactly;
    # checked at lattice points near n zhat, where every group is positive
    from modorient.moments import ConfigVector

    def s(x):
        return x * math.log(x) - x + 0.5 * math.log(2 * math.pi * x)

    n = 720
    m = s(9 * n) - s(4.5 * n) - 4.5 * n * math.log(2)
    base = [int(x * n) for x in L.ZHAT]
    rng = make_rng(6)
    checked = 0
    while checked < 200:
        k = [b + int(d) for b, d in zip(base, rng.integers(-20, 21, 9))]
        c = ConfigVector(n, *k)
        if not c.is_valid() or min(c.groups()) == 0:
            continue
        two = c.k211 + c.k210 + c.k201 + c.k200
        one = c.k111 + c.k110 + c.k101 + c.k100
        val = (s(n) - sum(s(x) for x in c.groups())
               + two * math.log(36) + one * math.log(504) + (n - two - one) * math.log(756)
               + s(c.inin) + s(c.inout) - m)
        z = [float(x) for x in c.as_z()]
        assert val == pytest.approx(n * L.f_of(z) + math.log(L.g_of(z, n)), abs=1e-8)
        checked += 1


def test_critical_points():
    rep = L.critical_points()
    bs = [b for b, _, _ in rep.roots]
    assert bs == pytest.approx([0.8065779289, 2.25, 3.693422071], abs=1e-8)
    feas = [(b, c2) for b, c2, ok in rep.roots if ok]
    assert len(feas) == 1
    assert feas[0][0] == pytest.approx(2.25, abs=1e-12)
    assert feas[0][1] == pytest.approx(1 / 144, abs=1e-12)
    assert np.allclose(rep.zhat.z, [float(x) for x in L.ZHAT], atol=1e-12)
    # the outer roots fail the feasibility filter for opposite reasons
    (b1, c1, _), _, (b3, c3, _) = rep.roots
    assert c1 < 0
    assert c3 > L.feasibility_bound(b3)


def test_bisect():
    assert L.bisect(lambda x: x * x - 2, 0, 2) == pytest.approx(math.sqrt(2), abs=1e-11)
    with pytest.raises(ValueError):
        L.bisect(lambda x: x * x + 1, 0, 1)


@pytest.mark.parametrize("case", ["z=0", "z=1/2"])
def test_boundary_segment(case):
    br = L.boundary_max(case)
    assert br.u == pytest.approx(19 / 52, abs=1e-10)
    assert br.value == pytest.approx(1.672261141, abs=1e-8)
    assert br.value < L.F_ZHAT
    # closed form of the maximum value
    u = 19 / 52
    closed = (19 / 26 * math.log(133 / 26) + 49 / 13 * math.log(98 / 13) - 7 * math.log(3)
              - 19 / 26 * math.log(u) - 27 / 26 * math.log(2) - 7 / 26 * math.log(7 / 52))
    assert br.value == pytest.approx(closed, abs=1e-12)
    for v in np.linspace(0.001, 0.499, 200):
        assert L.f_of(L._boundary_point(case, v)) <= br.value + 1e-12


def test_boundary_rejects_unknown_case():
    with pytest.raises(ValueError):
        L.boundary_max("z=1")


@pytest.mark.parametrize("face", ["z=0", "z=1/2"])
def test_face_samples_below_face_max(face):
    fm = L.face_max(face)
    assert fm.value < L.F_ZHAT
    assert fm.value >= L.boundary_max(face).value
    t = L.tail_dominance_check(100_000, seed=4, face=face)
    assert t["max_f"] <= fm.value + 1e-12
    assert t["violations"] == 0


def test_tail_dominance():
    t = L.tail_dominance_check(100_000, seed=0)
    assert t["violations"] == 0
    assert t["max_f"] < L.F_ZHAT
    assert t["kept"] <= t["samples"]


def test_tail_filter_excludes_near_points():
    t = L.tail_dominance_check(1000, seed=0, min_dist=10.0)
    assert t["kept"] == 0 and t["violations"] == 0
    t = L.tail_dominance_check(1000, seed=0, min_dist=0.0)
    assert t["kept"] == 1000


def test_exact_hessian():
    h = L.hessian_at(L.ZHAT)
    assert h.exact
    assert all(isinstance(x, Fraction) for row in h.B for x in row)
    assert [[x * 63 for x in row] for row in h.B] == [list(r) for r in B_STAR_EXPECTED]
    assert h.det == Fraction(-23665185138564661248, 117649)
    assert h.char_poly_Bstar == expected_char_poly()
    assert np.all(h.eigenvalues < 0)
    # product of eigenvalues of 63B equals the constant term of its char poly
    prod = np.prod(np.asarray(h.eigenvalues, dtype=float) * 63)
    assert prod == pytest.approx(-h.char_poly_Bstar[-1], rel=1e-9)
    assert h.det * 63**9 == -h.char_poly_Bstar[-1]


def test_float_hessian_matches_exact():
    exact = np.array(L.hessian_at(L.ZHAT).B, dtype=float)
    approx = np.asarray(L.hessian_at(tuple(float(x) for x in L.ZHAT)).B)
    np.testing.assert_allclose(approx, exact, rtol=1e-12, atol=1e-12)


def test_char_poly_small():
    assert L.char_poly([[2, 0], [0, 3]]) == [1, -5, 6]
    assert L.char_poly([[0, 1], [-1, 0]]) == [1, 0, 1]


def test_laplace_constant():
    for n in (2, 100, 10**6):
        assert L.laplace_constant(n) == pytest.approx(81 / 7, abs=1e-8)
    assert L.laplace_second_moment(10) == pytest.approx(81 / 7 * (81 / 8) ** 10, rel=1e-12)


def test_outer_root_values():
    (b1, c1, _), _, (b3, c3, _) = L.critical_points().roots
    assert c1 == pytest.approx(-0.0001175309606, abs=1e-12)
    assert c3 == pytest.approx(0.1105793451, abs=1e-9)
    assert L.feasibility_bound(b3) == pytest.approx(0.09883651395, abs=1e-9)


def test_stationarity_identities_at_zhat():
    z = dict(zip(L.COORDS, L.ZHAT))
    b = Fraction(9, 4)
    assert z["z211"] * z["z100"] == z["z200"] * z["z111"]
    assert z["z111"] / z["z211"] == 14 * (Fraction(9, 2) - b) / b


def test_zero_vertex():
    p = np.zeros(9)
    assert L.b_of(p) == 2.0
    assert math.isfinite(L.f_of(p))


def test_prefactor_scaling():
    z = [float(x) for x in L.ZHAT]
    c = [L.g_of(z, n) * n**4.5 for n in (10, 100, 1000, 10**5)]
    assert c == pytest.approx([c[0]] * 4, rel=1e-12)
    for p in interior_points(20, 9):
        assert L.g_of(p, 50) > 0


def test_hessian_corner_entry():
    assert L.hessian_at(L.ZHAT).B[0][0] == Fraction(-1672, 63)
    assert L.laplace_constant(10) / 9 == pytest.approx(9 / 7, abs=1e-9)


@pytest.mark.slow
def test_tail_dominance_million():
    t = L.tail_dominance_check(10**6, seed=1)
    assert t["violations"] == 0
    assert t["max_f"] < L.F_ZHAT
