"""Exponential-rate landscape of the second moment.

A point of the polytope ``J`` is a 9-vector in the coordinate order

    (z, z211, z111, z210, z110, z201, z101, z200, z100)

where ``z`` is the fraction of vertices that are in-vertices in both
orientations and ``z_abc`` the rescaled configuration counts.  ``f`` is the
exponential growth rate of a configuration weight divided by the number of
matchings, ``g`` its polynomial prefactor, both obtained from Stirling's
formula applied to factorials of ``n z``.

Functions taking a point accept any sequence of 9 numbers; ``f_of`` and
``b_of`` also accept arrays of shape ``(..., 9)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .seeding import make_rng

__all__ = [
    "COORDS",
    "ZHAT",
    "F_ZHAT",
    "LandscapePoint",
    "groups",
    "b_of",
    "f_of",
    "grad_f",
    "g_of",
    "c2_star",
    "parameterized_point",
    "critical_residual",
    "bisect",
    "critical_points",
    "CriticalPointReport",
    "boundary_max",
    "face_max",
    "BoundaryReport",
    "hessian_at",
    "HessianReport",
    "char_poly",
    "eigenvalues_B",
    "laplace_constant",
    "laplace_second_moment",
    "tail_dominance_check",
    "sample_J",
]

COORDS = ("z", "z211", "z111", "z210", "z110", "z201", "z101", "z200", "z100")

# order used by the reference Hessian: (z, z211, z111, z200, z100, z210, z110, z201, z101)
TAYLOR_ORDER = (0, 1, 2, 7, 8, 3, 4, 5, 6)

ZHAT = (
    Fraction(1, 4), Fraction(1, 144), Fraction(7, 72), Fraction(1, 144),
    Fraction(7, 72), Fraction(1, 144), Fraction(7, 72), Fraction(1, 144),
    Fraction(7, 72),
)
F_ZHAT = math.log(81 / 8)

_LOG21 = math.log(21.0)
_LOG23 = math.log(2.0 / 3.0)
_CONST = math.log(756.0) - 4.5 * math.log(9.0)

# gradients of the affine maps z -> b and z -> group coordinates
_DB = np.array([1, 2, 1, -2, -1, -2, -1, 2, 1])
_DG = np.array([
    [0, 1, 0, 0, 0, 0, 0, 0, 0],     # z211
    [0, 0, 1, 0, 0, 0, 0, 0, 0],     # z111
    [1, -1, -1, 0, 0, 0, 0, 0, 0],   # z - z211 - z111
    [0, 0, 0, 0, 0, 0, 0, 1, 0],     # z200
    [0, 0, 0, 0, 0, 0, 0, 0, 1],     # z100
    [1, 0, 0, 0, 0, 0, 0, -1, -1],   # z - z200 - z100
    [0, 0, 0, 1, 0, 0, 0, 0, 0],     # z210
    [0, 0, 0, 0, 1, 0, 0, 0, 0],     # z110
    [-1, 0, 0, -1, -1, 0, 0, 0, 0],  # 1/2 - z - z210 - z110
    [0, 0, 0, 0, 0, 1, 0, 0, 0],     # z201
    [0, 0, 0, 0, 0, 0, 1, 0, 0],     # z101
    [-1, 0, 0, 0, 0, -1, -1, 0, 0],  # 1/2 - z - z201 - z101
])
_G0 = np.array([0, 0, 0, 0, 0, 0, 0, 0, 0.5, 0, 0, 0.5])
# coordinates whose vertices share both special points (weight 36 vs 756)
_TWO = np.array([0, 1, 0, 1, 0, 1, 0, 1, 0])
_ONE = np.array([0, 0, 1, 0, 1, 0, 1, 0, 1])


@dataclass(frozen=True)
class LandscapePoint:
    z: tuple

    def __post_init__(self):
        if len(self.z) != 9:
            raise ValueError(f"a landscape point has 9 coordinates, got {len(self.z)}")

    def __iter__(self):
        return iter(self.z)

    def __len__(self):
        return 9

    def __getitem__(self, i):
        return self.z[i]

    def in_closure(self, tol=1e-12):
        return bool(np.all(groups(self.z) >= -tol))


def _arr(p):
    return np.asarray(p.z if isinstance(p, LandscapePoint) else p, dtype=float)


def groups(p):
    """The twelve vertex-group densities; all are >= 0 exactly on ``J``."""
    x = _arr(p)
    return x @ _DG.T + _G0


def b_of(p):
    """Density of (in,in)-points, an affine function of the point."""
    x = _arr(p)
    return x @ _DB + 2.0


def _h(x):
    x = np.asarray(x, dtype=float)
    safe = np.where(x > 0, x, 1.0)
    return np.where(x > 0, x * np.log(safe), 0.0)


def f_of(p, tol=1e-12):
    """Exponential rate f; continuous up to the boundary with h(0) = 0."""
    x = _arr(p)
    b = b_of(x)
    if np.any(b < -tol) or np.any(b > 4.5 + tol):
        raise ValueError("b(z) outside [0, 9/2]")
    g = groups(x)
    if np.any(g < -tol):
        raise ValueError("point outside J")
    b = np.clip(b, 0.0, 4.5)
    g = np.clip(g, 0.0, None)
    val = (
        _h(b) + _h(4.5 - b) + _CONST
        - (x @ _TWO) * _LOG21 + (x @ _ONE) * _LOG23
        - _h(g).sum(axis=-1)
    )
    return float(val) if np.ndim(val) == 0 else val


def _interior(p):
    x = _arr(p)
    if x.shape != (9,):
        raise ValueError("expected a single 9-vector")
    g = groups(x)
    b = b_of(x)
    if np.any(g <= 0) or not 0 < b < 4.5:
        raise ValueError("point is not strictly inside J")
    return x, g, b


def grad_f(p):
    """Gradient of f at an interior point."""
    x, g, b = _interior(p)
    z211, z111, z210, z110, z201, z101, z200, z100 = x[1:]
    g011, g000, g010, g001 = g[2], g[5], g[8], g[11]
    c = 4.5 - b
    return np.array([
        math.log(b * g010 * g001 / (c * g011 * g000)),
        math.log(b * b * g011 / (21 * c * c * z211)),
        math.log(2 * b * g011 / (3 * c * z111)),
        math.log(c * c * g010 / (21 * b * b * z210)),
        math.log(2 * c * g010 / (3 * b * z110)),
        math.log(c * c * g001 / (21 * b * b * z201)),
        math.log(2 * c * g001 / (3 * b * z101)),
        math.log(b * b * g000 / (21 * c * c * z200)),
        math.log(2 * b * g000 / (3 * c * z100)),
    ])


def g_of(p, n):
    """Polynomial prefactor: weight / M(9n) ~ g(k/n) exp(n f(k/n)).

    ``g = sqrt(b (9/2 - b) / 2) / ((2 pi n)^(9/2) sqrt(prod of groups))``.
    """
    x, g, b = _interior(p)
    return math.sqrt(b * (4.5 - b) / 2) / (
        (2 * math.pi * n) ** 4.5 * math.sqrt(float(np.prod(g)))
    )


# -- critical points -----------------------------------------------------------


def c2_star(b):
    """Value of z211 = z200 making the parameterized point self-consistent in b."""
    den = 5120 * b**4 - 46080 * b**3 + 285120 * b**2 - 816480 * b - 688905
    if den == 0:
        raise ZeroDivisionError(f"c2_star has a pole at b={b}")
    return -4 * b**3 * (32 * b**2 + 104 * b - 171) / den


def _ratio(b):
    return (4.5 - b) / b


def parameterized_point(b, c2):
    """Point where the eight non-``z`` partials vanish, given b and c2.

    With ``t = (9/2 - b)/b``: z111 = z100 = 14 t c2, z = (21 t^2 + 14 t + 1) c2,
    z210 = z201 = (1/2 - z) / (21/t^2 + 14/t + 1) and z110 = z101 = 14 z210 / t.
    """
    t = _ratio(b)
    c1 = 14 * t * c2
    z = (21 * t * t + 14 * t + 1) * c2
    c4 = (0.5 - z) / (21 / (t * t) + 14 / t + 1)
    c3 = 14 / t * c4
    return (z, c2, c1, c4, c3, c4, c3, c2, c1)


def feasibility_bound(b):
    """Upper limit on c2 keeping the parameterized point inside J."""
    t = _ratio(b)
    return 0.5 / (21 * t * t + 14 * t + 1)


def critical_residual(b):
    """df/dz along the curve c2 = c2_star(b), squared inside the log.

    Equals ``log(c4^2 / (t^9 c2^2))``; it coincides with df/dz where the
    point lies in J and stays defined for c2 < 0.
    """
    t = _ratio(b)
    c2 = c2_star(b)
    c4 = parameterized_point(b, c2)[3]
    return math.log(c4 * c4 / (t**9 * c2 * c2))


def bisect(fun, lo, hi, tol=1e-12, max_iter=200):
    """Root of ``fun`` in ``[lo, hi]`` by bisection; needs a sign change."""
    flo, fhi = fun(lo), fun(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise ValueError(f"no sign change on [{lo}, {hi}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol:
            break
        fm = fun(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class CriticalPointReport:
    roots: list  # of (b, c2, feasible)
    zhat: LandscapePoint
    f_at_zhat: float
    bounds: list = field(default_factory=list)  # c2 feasibility bound per root


def _safe(fun, x):
    try:
        y = fun(x)
    except (ValueError, ZeroDivisionError, OverflowError):
        return math.nan
    return y if math.isfinite(y) else math.nan


def critical_points(step=1e-3, tol=1e-12, residual_tol=1e-6):
    """Scan (0, 9/2) for sign changes of the residual and bisect each one.

    A sign change is kept as a root only if the residual is small there, which
    discards jumps across singularities of the curve.
    """
    grid = np.arange(step, 4.5, step)
    vals = [_safe(critical_residual, float(b)) for b in grid]
    roots = []
    for a, c, fa, fc in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if math.isnan(fa) or math.isnan(fc):
            continue
        if fa == 0:
            cand = float(a)
        elif fc != 0 and (fa > 0) != (fc > 0):
            cand = bisect(critical_residual, float(a), float(c), tol=tol)
        else:
            continue
        if abs(_safe(critical_residual, cand)) < residual_tol:
            roots.append(cand)
    report, bounds, feasible = [], [], []
    for b in roots:
        c2 = c2_star(b)
        ub = feasibility_bound(b)
        ok = 0 < c2 < ub
        report.append((b, c2, ok))
        bounds.append(ub)
        if ok:
            feasible.append(b)
    if len(feasible) != 1:
        raise RuntimeError(f"expected exactly one feasible critical point, found {feasible}")
    zhat = LandscapePoint(parameterized_point(feasible[0], c2_star(feasible[0])))
    return CriticalPointReport(report, zhat, f_of(zhat), bounds)


# -- boundary ------------------------------------------------------------------


@dataclass(frozen=True)
class BoundaryReport:
    case: str
    u: float  # maximizing z110 (case z=0) or z111 (case z=1/2)
    point: LandscapePoint
    value: float


def _boundary_point(case, u):
    if case == "z=0":
        # z210 = z201 = 1/2 - u, z110 = z101 = u
        return (0.0, 0.0, 0.0, 0.5 - u, u, 0.5 - u, u, 0.0, 0.0)
    if case == "z=1/2":
        # z211 = z200 = 1/2 - u, z111 = z100 = u
        return (0.5, 0.5 - u, u, 0.0, 0.0, 0.0, 0.0, 0.5 - u, u)
    raise ValueError(f"case must be 'z=0' or 'z=1/2', got {case!r}")


def boundary_segment_derivative(u):
    """d/du of f along either boundary segment: 2 log(56 (1/2 - u) / (9 - 4u))."""
    return 2 * math.log(56 * (0.5 - u) / (9 - 4 * u))


def boundary_max(case, tol=1e-14):
    """Maximum of f on the boundary face ``z = 0`` or ``z = 1/2``.

    On either face the stationarity conditions force the paired coordinates
    to be equal and the maximum to sit on the segment where the remaining
    group coordinates vanish; there f is concave in ``u`` and its derivative
    is ``boundary_segment_derivative``.
    """
    _boundary_point(case, 0.25)  # validates case
    u = bisect(boundary_segment_derivative, 1e-9, 0.5 - 1e-9, tol=tol)
    point = LandscapePoint(_boundary_point(case, u))
    value = f_of(point)
    if not value < F_ZHAT:
        raise AssertionError(f"boundary value {value} is not below f(zhat)")
    return BoundaryReport(case, u, point, value)


def face_max(case, tol=1e-13):
    """Maximum of f over a whole boundary face, not just the segment.

    With the paired coordinates equal (x for the "two in common" pair, y for
    the "one in common" pair) stationarity on the face reduces to

        2 c g = 3 b y,    c^2 g = 21 b^2 x    (z = 0)

    with ``g = 1/2 - x - y``, ``b = 2 - 4x - 2y`` and ``c = 9/2 - b``.  On the
    face ``z = 1/2`` the (in,in) density is c rather than b, and the two
    roles swap in the equations as well, so the system is identical.  Solved
    by nested bisection: for fixed x the first equation is monotone in y.
    """
    if case not in ("z=0", "z=1/2"):
        raise ValueError(f"case must be 'z=0' or 'z=1/2', got {case!r}")

    def bc(x, y):
        b = 2 - 4 * x - 2 * y
        return b, 4.5 - b

    def y_of(x):
        def eq(y):
            b, c = bc(x, y)
            return math.log(2 * c * (0.5 - x - y) / (3 * b * y))
        return bisect(eq, 1e-15, 0.5 - x - 1e-15, tol=tol)

    def outer(x):
        y = y_of(x)
        b, c = bc(x, y)
        return math.log(c * c * (0.5 - x - y) / (21 * b * b * x))

    x = bisect(outer, 1e-12, 0.25, tol=tol)
    y = y_of(x)
    if case == "z=0":
        pt = (0.0, 0.0, 0.0, x, y, x, y, 0.0, 0.0)
    else:
        pt = (0.5, x, y, 0.0, 0.0, 0.0, 0.0, x, y)
    point = LandscapePoint(pt)
    return BoundaryReport(case, y, point, f_of(point))


# -- Hessian -------------------------------------------------------------------


def _hessian_rational(z):
    b = sum(int(c) * x for c, x in zip(_DB, z)) + 2
    g = [sum(int(c) * x for c, x in zip(row, z)) + Fraction(g0).limit_denominator()
         for row, g0 in zip(_DG, _G0)]
    if b <= 0 or b >= Fraction(9, 2) or min(g) <= 0:
        raise ValueError("point is not strictly inside J")
    wb = 1 / b + 1 / (Fraction(9, 2) - b)
    H = [[wb * int(_DB[i]) * int(_DB[j]) for j in range(9)] for i in range(9)]
    for row, gi in zip(_DG, g):
        nz = [i for i in range(9) if row[i]]
        for i in nz:
            for j in nz:
                H[i][j] -= Fraction(int(row[i]) * int(row[j])) / gi
    return H


def _hessian_float(z):
    x, g, b = _interior(z)
    wb = 1 / b + 1 / (4.5 - b)
    return wb * np.outer(_DB, _DB) - (_DG.T / g) @ _DG


def char_poly(M):
    """Characteristic polynomial det(xI - M), coefficients highest first.

    Faddeev-LeVerrier in exact arithmetic; entries may be ints or Fractions.
    """
    n = len(M)
    coeffs = [Fraction(1)]
    Mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # Mk = M (M_{k-1} + c_{k-1} I)
        prev = [[Mk[i][j] + (coeffs[-1] if i == j else 0) for j in range(n)] for i in range(n)]
        Mk = [[sum(M[i][t] * prev[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        tr = sum(Mk[i][i] for i in range(n))
        coeffs.append(-tr / k)
    return coeffs


def _det(M):
    n = len(M)
    A = [[Fraction(x) for x in row] for row in M]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            fct = A[r][c] / A[c][c]
            if fct:
                A[r] = [a - fct * bb for a, bb in zip(A[r], A[c])]
    return det


@dataclass(frozen=True)
class HessianReport:
    """Hessian of f, reported in the order (z, z211, z111, z200, z100, z210,
    z110, z201, z101).  ``exact`` is False when B holds floats."""

    B: list
    eigenvalues: np.ndarray
    det: object
    char_poly_Bstar: list | None
    exact: bool


def hessian_at(p=ZHAT):
    """Hessian of f at an interior point.

    Exact rational entries when every coordinate is a ``Fraction`` or int
    (the Hessian of f is rational in the point), float otherwise.
    """
    z = p.z if isinstance(p, LandscapePoint) else tuple(p)
    exact = all(isinstance(x, (int, Fraction)) for x in z)
    if exact:
        H = _hessian_rational([Fraction(x) for x in z])
        B = [[H[i][j] for j in TAYLOR_ORDER] for i in TAYLOR_ORDER]
        Bstar = [[x * 63 for x in row] for row in B]
        cp = None
        if all(x.denominator == 1 for row in Bstar for x in row):
            cp = [int(c) for c in char_poly([[int(x) for x in row] for row in Bstar])]
        det = _det(B)
        eig = np.linalg.eigvalsh(np.array(B, dtype=float))
    else:
        H = _hessian_float(z)
        idx = list(TAYLOR_ORDER)
        B = H[np.ix_(idx, idx)]
        cp = None
        det = float(np.linalg.det(B))
        eig = np.linalg.eigvalsh(B)
    return HessianReport(B, eig, det, cp, exact)


def eigenvalues_B():
    """Eigenvalues of the Hessian at the critical point, ascending."""
    return hessian_at(ZHAT).eigenvalues


# -- Laplace -------------------------------------------------------------------


def laplace_constant(n=1):
    """g(zhat) (2 pi n)^(9/2) / sqrt|det B|; independent of n."""
    det = hessian_at(ZHAT).det
    return g_of([float(x) for x in ZHAT], n) * (2 * math.pi * n) ** 4.5 / math.sqrt(abs(float(det)))


def laplace_second_moment(n):
    """Laplace approximation of the configuration sum around zhat."""
    if n < 2 or n % 2:
        raise ValueError(f"n must be an even integer >= 2, got {n}")
    return math.exp(n * F_ZHAT) * laplace_constant(n)


# -- sampling J ----------------------------------------------------------------


def sample_J(size, rng, face=None):
    """Random points of J.

    ``z`` is uniform on [0, 1/2] (or fixed to the face) and each of the four
    triples of group coordinates is a flat Dirichlet draw scaled to its total.
    """
    if face is None:
        z = rng.uniform(0.0, 0.5, size)
    elif face == "z=0":
        z = np.zeros(size)
    elif face == "z=1/2":
        z = np.full(size, 0.5)
    else:
        raise ValueError(f"unknown face {face!r}")
    tri = rng.dirichlet(np.ones(3), size=(size, 4))
    tot = np.stack([z, z, 0.5 - z, 0.5 - z], axis=1)[..., None]
    t = tri * tot
    # t[:, 0] -> (z211, z111), t[:, 1] -> (z200, z100), t[:, 2] -> (z210, z110),
    # t[:, 3] -> (z201, z101)
    return np.stack(
        [z, t[:, 0, 0], t[:, 0, 1], t[:, 2, 0], t[:, 2, 1],
         t[:, 3, 0], t[:, 3, 1], t[:, 1, 0], t[:, 1, 1]],
        axis=1,
    )


def tail_dominance_check(samples, seed=0, min_dist=1e-2, face=None, chunk=200_000):
    """Sample J away from zhat and confirm f stays below f(zhat).

    Points within ``min_dist`` (Euclidean) of zhat are discarded.  Returns a
    dict with the number of points kept, the largest f found, where it was,
    and the number of violations of ``f < f(zhat)``.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = make_rng(seed)
    zhat = np.array([float(x) for x in ZHAT])
    kept, best, arg, violations = 0, -math.inf, None, 0
    left = samples
    while left > 0:
        m = min(chunk, left)
        left -= m
        pts = sample_J(m, rng, face)
        far = np.linalg.norm(pts - zhat, axis=1) > min_dist
        pts = pts[far]
        if not len(pts):
            continue
        vals = f_of(pts)
        kept += len(pts)
        violations += int(np.sum(vals >= F_ZHAT))
        i = int(np.argmax(vals))
        if vals[i] > best:
            best, arg = float(vals[i]), pts[i].tolist()
    return {
        "samples": samples,
        "kept": kept,
        "max_f": best,
        "argmax": arg,
        "f_zhat": F_ZHAT,
        "violations": violations,
        "face": face,
    }
