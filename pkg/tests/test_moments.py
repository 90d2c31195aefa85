import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modorient.landscape import f_of
from modorient.moments import (
    ConfigVector,
    asymptotic_first_moment,
    config_weight,
    delta_k,
    exact_cycle_mean,
    exact_first_moment,
    exact_second_factorial_moment,
    exact_second_moment,
    finite_n_joint_moment_ratio,
    first_moment_terms,
    iter_configs,
    lambda_delta_tail_bound,
    lambda_k,
    matchings,
    moment_report,
    mu_k,
    sum_lambda_delta_sq,
)

from oracles import n2_expect, n2_Y


def test_matchings():
    assert [matchings(m) for m in (0, 2, 4, 6, 18)] == [1, 1, 3, 15, 34459425]
    with pytest.raises(ValueError):
        matchings(3)


def test_first_moment_n2():
    assert first_moment_terms(2) == (940584960, 34459425)
    assert exact_first_moment(2) == Fraction(940584960, 34459425)
    assert exact_first_moment(2) == n2_expect(n2_Y)


def test_second_moment_n2_closed_form():
    assert exact_second_moment(2) == n2_expect(lambda l: n2_Y(l) ** 2)
    assert exact_second_factorial_moment(2) == n2_expect(lambda l: n2_Y(l) * (n2_Y(l) - 1))


def test_first_moment_asymptotics():
    r = exact_first_moment(200) / Fraction(1)
    ratio = float(r / Fraction(asymptotic_first_moment(200)))
    assert 0.99 <= ratio <= 1.01


@pytest.mark.parametrize("n", [1, 3, 0])
def test_odd_n_rejected(n):
    with pytest.raises(ValueError):
        exact_first_moment(n)


def test_second_moment_limit():
    with pytest.raises(ValueError):
        exact_second_moment(14)


def test_ratio_trend():
    ratios = [moment_report(n).ratio for n in (2, 4, 6, 8, 10, 12)]
    assert all(a > b for a, b in zip(ratios, ratios[1:]))
    assert ratios[-1] > 9 / 7


def test_config_weight_sums_match_fast_sum():
    n = 4
    total = sum(config_weight(n, c) for c in iter_configs(n))
    assert Fraction(total, matchings(9 * n)) == exact_second_moment(n)


def test_configs_satisfy_point_balance():
    for c in iter_configs(6):
        assert c.inin + c.inout == 9 * c.n // 2
        assert c.is_valid()


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_config_swap_symmetry(data):
    n = data.draw(st.sampled_from([2, 4, 6]))
    configs = list(iter_configs(n))
    c = data.draw(st.sampled_from(configs))
    s = c.swapped()
    assert s.is_valid()
    assert config_weight(n, c) == config_weight(n, s)
    assert s.swapped() == c


def test_invalid_config_rejected():
    bad = ConfigVector(2, 2, 0, 0, 0, 0, 0, 0, 0, 0)
    assert not bad.is_valid()
    with pytest.raises(ValueError):
        config_weight(2, bad)


def _s(x):
    return x * math.log(x) - x if x > 0 else 0.0


def test_stirling_consistency_n12():
    # leading-order Stirling applied to every factorial of the weight gives n f(k/n)
    n = 12
    m = _s(9 * n) - _s(9 * n / 2) - 4.5 * n * math.log(2)
    checked = 0
    for c in iter_configs(n):
        two = c.k211 + c.k210 + c.k201 + c.k200
        one = c.k111 + c.k110 + c.k101 + c.k100
        val = (_s(n) - sum(_s(x) for x in c.groups())
               + two * math.log(36) + one * math.log(504) + (n - two - one) * math.log(756)
               + _s(c.inin) + _s(c.inout) - m)
        z = [float(x) for x in c.as_z()]
        assert val / n == pytest.approx(f_of(z), abs=1e-12)
        checked += 1
    assert checked > 30000


def test_cycle_constants():
    assert lambda_k(1) == 4 and lambda_k(2) == 16 and lambda_k(3) == Fraction(256, 3)
    for k in range(1, 8):
        assert delta_k(k) == Fraction(-2, 9) ** k
        assert mu_k(k) == lambda_k(k) * (1 + delta_k(k))
    with pytest.raises(ValueError):
        lambda_k(0)


def test_nine_sevenths_series():
    assert math.exp(sum_lambda_delta_sq(60)) == pytest.approx(9 / 7, abs=1e-12)
    assert lambda_delta_tail_bound(60) < 1e-20
    # partial sums increase to log(9/7)
    assert sum_lambda_delta_sq(5) < sum_lambda_delta_sq(6) < math.log(9 / 7)


def test_joint_ratio_n2_closed_form():
    ey = n2_expect(n2_Y)
    loops = n2_expect(lambda l: n2_Y(l) * 2 * l) / ey
    pairs = n2_expect(lambda l: n2_Y(l) * math.comb(9 - 2 * l, 2)) / ey
    assert finite_n_joint_moment_ratio(2, 1) == loops
    assert finite_n_joint_moment_ratio(2, 2) == pairs


def test_cycle_mean_n2_closed_form():
    assert exact_cycle_mean(2, 1) == n2_expect(lambda l: 2 * l)
    assert exact_cycle_mean(2, 2) == n2_expect(lambda l: math.comb(9 - 2 * l, 2))


def test_joint_ratio_converges():
    for k in (1, 2):
        assert abs(float(finite_n_joint_moment_ratio(2000, k)) - float(mu_k(k))) < 1e-2
    # the k=1 ratio is 28/9 at every n
    for n in (2, 4, 6, 50, 100, 400, 1600):
        assert finite_n_joint_moment_ratio(n, 1) == Fraction(28, 9)


def test_cycle_mean_converges():
    for k in (1, 2, 3):
        assert float(exact_cycle_mean(10**6, k)) == pytest.approx(float(lambda_k(k)), rel=1e-4)


def test_matchings_recurrence_oracle():
    from oracles import matchings_recursive

    for m in range(0, 41, 2):
        assert matchings(m) == matchings_recursive(m)


def test_single_config_weight_n2():
    c = ConfigVector(2, 1, 1, 0, 0, 0, 0, 0, 1, 0)
    assert c.is_valid()
    assert config_weight(2, c) == 2 * 1296 * 362880


def test_first_moment_ratio_tends_to_one():
    gaps = [abs(float(exact_first_moment(n) / Fraction(asymptotic_first_moment(n))) - 1)
            for n in range(10, 201, 10)]
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 0.01


def test_config_groups_sum_to_n():
    for n in (2, 6, 12):
        for c in iter_configs(n):
            assert sum(c.groups()) == n


def test_delta_identity_extended():
    for k in range(1, 65):
        assert delta_k(k) == Fraction(-2, 9) ** k
        assert mu_k(k) == lambda_k(k) * (1 + delta_k(k))
    # first term: lambda_1 delta_1^2
    assert Fraction(sum_lambda_delta_sq(1)).limit_denominator(1000) == Fraction(32, 162)
    assert sum_lambda_delta_sq(200) == pytest.approx(math.log(9 / 7), abs=1e-9)


def test_laplace_over_exact_second_moment_increases():
    from modorient.landscape import laplace_second_moment

    r = [laplace_second_moment(n) / float(exact_second_moment(n)) for n in (4, 8, 12)]
    assert r[0] < r[1] < r[2] < 1
    assert r[2] > 0.97


def _weight_over_laplace(n, k):
    from modorient.landscape import g_of

    c = ConfigVector(n, *k)
    assert c.is_valid()
    w = Fraction(config_weight(n, c), matchings(9 * n))
    z = [float(x) for x in c.as_z()]
    log_w = math.log(w.numerator) - math.log(w.denominator)
    return math.exp(log_w - n * f_of(z) - math.log(g_of(z, n)))


def test_weight_over_laplace_density_trend():
    # lattice points closest to n zhat; the small groups (k211 etc.) keep the
    # Stirling error large until n is in the hundreds
    pts = {
        12: (3, 1, 1, 1, 1, 1, 1, 1, 1),
        48: (12, 1, 5, 1, 5, 1, 5, 1, 5),
        192: (48, 1, 19, 1, 19, 1, 19, 1, 19),
        384: (96, 3, 37, 3, 37, 3, 37, 3, 37),
    }
    r = [_weight_over_laplace(n, k) for n, k in pts.items()]
    assert r[0] == pytest.approx(0.3833332305, abs=1e-9)
    assert all(a < b for a, b in zip(r, r[1:]))
    assert r[-1] > 0.85
