"""Exact moments of the number Y of valid orientations in the pairing model.

Everything here is integer or ``Fraction`` arithmetic; floats appear only in
the reporting helpers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "matchings",
    "exact_first_moment",
    "first_moment_terms",
    "asymptotic_first_moment",
    "ConfigVector",
    "iter_configs",
    "config_weight",
    "exact_second_moment",
    "exact_second_factorial_moment",
    "exact_cycle_mean",
    "SECOND_MOMENT_LIMIT",
    "lambda_k",
    "mu_k",
    "delta_k",
    "sum_lambda_delta_sq",
    "lambda_delta_tail_bound",
    "finite_n_joint_moment_ratio",
    "MomentReport",
    "moment_report",
    "format_fraction",
]

SECOND_MOMENT_LIMIT = 12


@lru_cache(maxsize=None)
def _fact(k):
    return math.factorial(k)


def _falling(x, k):
    out = 1
    for i in range(k):
        out *= x - i
    return out


def matchings(m_points):
    """Number of perfect matchings on ``m_points`` labelled points."""
    if m_points < 0 or m_points % 2:
        raise ValueError(f"need an even number of points, got {m_points}")
    h = m_points // 2
    return _fact(m_points) // (_fact(h) * 2**h)


def _check_even(n):
    if n < 2 or n % 2:
        raise ValueError(f"n must be an even integer >= 2, got {n}")


def first_moment_terms(n, d=9):
    """Unreduced (numerator, denominator) of E[Y]:
    C(n, n/2) C(d, p)^n (dn/2)! over M(dn), with d = 4p+1."""
    _check_even(n)
    if (d - 1) % 4:
        raise ValueError(f"degree {d} is not of the form 4p+1")
    p = (d - 1) // 4
    num = math.comb(n, n // 2) * math.comb(d, p) ** n * _fact(d * n // 2)
    return num, matchings(d * n)


def exact_first_moment(n, d=9):
    return Fraction(*first_moment_terms(n, d))


def asymptotic_first_moment(n):
    return 3.0 * (81.0 / 8.0) ** (n / 2)


@dataclass(frozen=True)
class ConfigVector:
    """Lattice point of the two-orientation configuration region."""

    n: int
    k: int
    k211: int
    k111: int
    k210: int
    k110: int
    k201: int
    k101: int
    k200: int
    k100: int

    @property
    def k011(self):
        return self.k - self.k211 - self.k111

    @property
    def k000(self):
        return self.k - self.k200 - self.k100

    @property
    def k010(self):
        return self.n // 2 - self.k - self.k210 - self.k110

    @property
    def k001(self):
        return self.n // 2 - self.k - self.k201 - self.k101

    @property
    def _core(self):
        return (
            2 * self.k211 + 2 * self.k200 + self.k111 - self.k110 - self.k101
            + self.k100 + self.k - 2 * self.k210 - 2 * self.k201
        )

    @property
    def inin(self):
        """(in,in)-points, equal to the number of (out,out)-points."""
        return self._core + 2 * self.n

    @property
    def inout(self):
        """(in,out)-points, equal to the number of (out,in)-points."""
        return 5 * self.n // 2 - self._core

    def groups(self):
        return (
            self.k211, self.k111, self.k011, self.k200, self.k100, self.k000,
            self.k210, self.k110, self.k010, self.k201, self.k101, self.k001,
        )

    def is_valid(self):
        if self.n < 2 or self.n % 2:
            return False
        if self.k < 0 or self.k > self.n // 2:
            return False
        return min(self.groups()) >= 0 and self.inin >= 0 and self.inout >= 0

    def swapped(self):
        """Same configuration with the two orientations exchanged."""
        return ConfigVector(
            self.n, self.k, self.k211, self.k111, self.k201, self.k101,
            self.k210, self.k110, self.k200, self.k100,
        )

    def as_z(self):
        """Rescaled point ``k / n`` in landscape coordinate order."""
        return tuple(
            Fraction(x, self.n)
            for x in (self.k, self.k211, self.k111, self.k210, self.k110,
                      self.k201, self.k101, self.k200, self.k100)
        )


def iter_configs(n):
    """All valid lattice points for ``n``, pruned on every inequality."""
    _check_even(n)
    half = n // 2
    for k in range(half + 1):
        rest = half - k
        for k211 in range(k + 1):
            for k111 in range(k - k211 + 1):
                for k200 in range(k + 1):
                    for k100 in range(k - k200 + 1):
                        for k210 in range(rest + 1):
                            for k110 in range(rest - k210 + 1):
                                for k201 in range(rest + 1):
                                    for k101 in range(rest - k201 + 1):
                                        c = ConfigVector(
                                            n, k, k211, k111, k210, k110,
                                            k201, k101, k200, k100,
                                        )
                                        if c.inin >= 0 and c.inout >= 0:
                                            yield c


def config_weight(n, c):
    """Number of (pairing, first orientation, second orientation) triples
    realising the configuration ``c``.

    The product of the vertex-partition multinomial, the special-point
    choices and the two point-matching factorials.
    """
    if c.n != n or not c.is_valid():
        raise ValueError(f"invalid configuration vector {c}")
    g = c.groups()
    multinomial = _fact(n)
    for x in g:
        multinomial //= _fact(x)
    two = c.k211 + c.k210 + c.k201 + c.k200
    one = c.k111 + c.k110 + c.k101 + c.k100
    zero = c.k011 + c.k010 + c.k001 + c.k000
    special = 36**two * 504**one * 756**zero
    return multinomial * special * _fact(c.inin) * _fact(c.inout)


def _second_moment_sum(n):
    half = n // 2
    fact = [_fact(i) for i in range(9 * n // 2 + 1)]
    total = 0
    for k in range(half + 1):
        rest = half - k
        # weights for each (two, one, zero) block, summed over the block
        # members that leave the pair counts unchanged
        total += _partial_sum(n, k, rest, fact)
    return total


def _partial_sum(n, k, rest, fact):
    total = 0
    fn = fact[n]
    for k211 in range(k + 1):
        for k111 in range(k - k211 + 1):
            k011 = k - k211 - k111
            a = fact[k211] * fact[k111] * fact[k011]
            for k200 in range(k + 1):
                for k100 in range(k - k200 + 1):
                    k000 = k - k200 - k100
                    b = a * fact[k200] * fact[k100] * fact[k000]
                    core1 = 2 * k211 + 2 * k200 + k111 + k100 + k
                    two1 = k211 + k200
                    one1 = k111 + k100
                    for k210 in range(rest + 1):
                        for k110 in range(rest - k210 + 1):
                            k010 = rest - k210 - k110
                            c = b * fact[k210] * fact[k110] * fact[k010]
                            for k201 in range(rest + 1):
                                for k101 in range(rest - k201 + 1):
                                    k001 = rest - k201 - k101
                                    core = core1 - k110 - k101 - 2 * k210 - 2 * k201
                                    inin = core + 2 * n
                                    inout = 5 * n // 2 - core
                                    if inin < 0 or inout < 0:
                                        continue
                                    two = two1 + k210 + k201
                                    one = one1 + k110 + k101
                                    zero = n - two - one
                                    denom = c * fact[k201] * fact[k101] * fact[k001]
                                    total += (
                                        fn // denom
                                        * 36**two * 504**one * 756**zero
                                        * fact[inin] * fact[inout]
                                    )
    return total


def exact_second_moment(n, limit=SECOND_MOMENT_LIMIT):
    """Exact lattice sum of configuration weights divided by M(9n).

    Each ordered pair of valid orientations, equal pairs included, is counted
    once, so this is E[Y^2].
    """
    _check_even(n)
    if n > limit:
        raise ValueError(f"second-moment enumeration is limited to n <= {limit}, got {n}")
    return Fraction(_second_moment_sum(n), matchings(9 * n))


def exact_second_factorial_moment(n, limit=SECOND_MOMENT_LIMIT):
    """E[Y(Y-1)] = E[Y^2] - E[Y]."""
    return exact_second_moment(n, limit) - exact_first_moment(n)


# -- cycle moments -----------------------------------------------------------


def _check_k(k):
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")


def lambda_k(k):
    """Limiting mean number of k-cycles, 8^k / 2k."""
    _check_k(k)
    return Fraction(8**k, 2 * k)


def mu_k(k):
    """Limiting E[Y X_k] / E[Y] = (8^k + (-16/9)^k) / 2k."""
    _check_k(k)
    return (Fraction(8) ** k + Fraction(-16, 9) ** k) / (2 * k)


def delta_k(k):
    """mu_k / lambda_k - 1, which equals (-2/9)^k."""
    return mu_k(k) / lambda_k(k) - 1


def sum_lambda_delta_sq(kmax):
    """Partial sum of lambda_k delta_k^2 = (32/81)^k / 2k, for k <= kmax.

    The tail beyond ``kmax`` is below ``lambda_delta_tail_bound(kmax)``; the
    full series is log(9/7).
    """
    _check_k(kmax)
    x = 32.0 / 81.0
    return math.fsum(x**k / (2 * k) for k in range(1, kmax + 1))


def lambda_delta_tail_bound(kmax):
    x = 32.0 / 81.0
    return x ** (kmax + 1) / (1 - x)


def finite_n_joint_moment_ratio(n, k):
    """E[Y X_k] / E[Y] at finite n from the (pairing, cycle, orientation)
    triple count.

    The cycle uses ``k - 2i`` vertices entered and left once, ``i`` vertices
    entered twice (``b`` of them in-vertices) and ``i`` left twice (``c`` of
    them out-vertices); ``a_i = 2 C(k, 2i)`` orientations of the cycle realise
    a given ``i``.
    """
    _check_even(n)
    _check_k(k)
    if k > n:
        raise ValueError(f"need k <= n, got k={k}, n={n}")
    half = n // 2
    num = 0
    for i in range(k // 2 + 1):
        a_i = 2 * math.comb(k, 2 * i)
        inner = 0
        for b in range(i + 1):
            for c in range(i + 1):
                top = half - i - b + c
                if top < 0 or top > n - 2 * i:
                    continue
                inner += (
                    math.comb(i, b) * math.comb(i, c) * math.comb(n - 2 * i, top)
                    * 21 ** (2 * i - b - c)
                )
        num += a_i * 7 ** (k - 2 * i) * inner
    # [n]_k (72^k / 2k) 36^(n-k) (9n/2 - k)! over C(n, n/2) 36^n (9n/2)!
    num *= _falling(n, k) * 72**k
    den = 2 * k * 36**k * _falling(9 * n // 2, k) * math.comb(n, half)
    return Fraction(num, den)


def exact_cycle_mean(n, k, d=9):
    """Exact E[X_k] in the pairing model (k-cycles as in ``count_cycles``)."""
    _check_k(k)
    ways = Fraction(_falling(n, k) * (d * (d - 1)) ** k, 2 * k)
    prob = Fraction(1)
    for j in range(k):
        prob /= d * n - 1 - 2 * j
    return ways * prob


# -- reporting ---------------------------------------------------------------


def format_fraction(q):
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def _ratio_float(a, b):
    # big rationals overflow float() only when astronomically large
    q = Fraction(a) / Fraction(b)
    return q.numerator / q.denominator


@dataclass(frozen=True)
class MomentReport:
    n: int
    exact_EY: Fraction
    asymptotic_EY: float
    exact_EY2: Fraction | None
    ratio: float | None

    def to_json(self):
        return {
            "n": self.n,
            "exact_EY": format_fraction(self.exact_EY),
            "asymptotic_EY": self.asymptotic_EY,
            "exact_EY2": None if self.exact_EY2 is None else format_fraction(self.exact_EY2),
            "ratio": self.ratio,
        }


def moment_report(n, second=True, limit=SECOND_MOMENT_LIMIT):
    ey = exact_first_moment(n)
    ey2 = exact_second_moment(n, limit) if second else None
    ratio = None if ey2 is None else _ratio_float(ey2, ey * ey)
    return MomentReport(n, ey, asymptotic_first_moment(n), ey2, ratio)
