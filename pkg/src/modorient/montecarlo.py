"""Seeded Monte Carlo experiments over the pairing model.

Every trial draws its pairing from its own generator ``make_rng(seed, t)``,
so trials are independent of execution order.  Per-trial observations are
integers and are aggregated as exact integer sums (first and second
moments), which makes the result independent of how trials are chunked or
parallelised.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import __version__
from .graph_core import count_cycles, pairing_to_multigraph, sample_pairing
from .moments import (
    exact_first_moment,
    exact_second_moment,
    finite_n_joint_moment_ratio,
    lambda_k,
)
from .orientation import (
    EXACT_COUNT_LIMIT,
    count_pairing_orientations,
    find_valid_orientation,
)
from .seeding import PRNG_NAME, make_rng

__all__ = [
    "ExperimentConfig",
    "Stat",
    "ExperimentResult",
    "estimate_moments",
    "cycle_poisson_experiment",
    "joint_moment_experiment",
    "orientation_success_rate",
]

MODES = ("exact-Y", "solver-only")


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    trials: int
    seed: int = 0
    kmax: int = 3
    mode: str = "exact-Y"
    workers: int = 1
    max_restarts: int = 50
    max_flips: int | None = None

    def __post_init__(self):
        if self.n < 2 or self.n % 2:
            raise ValueError(f"n must be an even integer >= 2, got {self.n}")
        if self.trials < 1:
            raise ValueError(f"trials must be positive, got {self.trials}")
        if self.kmax < 1:
            raise ValueError(f"kmax must be >= 1, got {self.kmax}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.mode == "exact-Y" and self.n > EXACT_COUNT_LIMIT:
            raise ValueError(
                f"exact-Y mode needs n <= {EXACT_COUNT_LIMIT}, got n={self.n}"
            )


@dataclass(frozen=True)
class Stat:
    name: str
    mean: float
    variance: float
    stderr: float
    trials: int
    target: float | None = None

    @property
    def z_score(self):
        if self.target is None or self.stderr == 0:
            return None
        return (self.mean - self.target) / self.stderr


@dataclass
class ExperimentResult:
    experiment: str
    stats: dict
    metadata: dict
    extra: dict = field(default_factory=dict)

    def __getitem__(self, name):
        return self.stats[name]

    def to_json_lines(self):
        rows = []
        for st in self.stats.values():
            row = {"experiment": self.experiment, **asdict(st), "metadata": self.metadata}
            rows.append(json.dumps(row, sort_keys=True, default=str))
        if self.extra:
            rows.append(json.dumps(
                {"experiment": self.experiment, "statistic": "extra", **self.extra,
                 "metadata": self.metadata},
                sort_keys=True, default=str,
            ))
        return "\n".join(rows) + "\n"

    def to_csv(self):
        buf = io.StringIO()
        cols = ["experiment", "name", "mean", "variance", "stderr", "trials", "target"]
        w = csv.writer(buf)
        w.writerow(cols + ["seed", "prng"])
        for st in self.stats.values():
            d = asdict(st)
            w.writerow([self.experiment] + [d[c] for c in cols[1:]]
                       + [self.metadata["seed"], self.metadata["prng"]])
        return buf.getvalue()


# -- per-trial observations ----------------------------------------------------


@lru_cache(maxsize=1 << 16)
def _exact_y(n, edges):
    from .graph_core import MultiGraph

    return count_pairing_orientations(MultiGraph(n, 9, edges))


def _trial_graph(cfg, t):
    rng = make_rng(cfg.seed, t)
    g = pairing_to_multigraph(sample_pairing(cfg.n, 9, rng))
    return g, rng


def _obs_moments(cfg, t):
    g, _ = _trial_graph(cfg, t)
    y = _exact_y(cfg.n, g.edges)
    return (y, y * y, y * (y - 1))


def _obs_cycles(cfg, t):
    g, _ = _trial_graph(cfg, t)
    c = count_cycles(g, cfg.kmax).counts
    return tuple(c[k] for k in range(1, cfg.kmax + 1))


def _obs_joint(cfg, t):
    g, _ = _trial_graph(cfg, t)
    y = _exact_y(cfg.n, g.edges)
    c = count_cycles(g, cfg.kmax).counts
    return (y,) + tuple(y * c[k] for k in range(1, cfg.kmax + 1))


def _obs_success(cfg, t):
    g, rng = _trial_graph(cfg, t)
    found = find_valid_orientation(g, rng, cfg.max_restarts, cfg.max_flips) is not None
    if cfg.n <= EXACT_COUNT_LIMIT:
        positive = _exact_y(cfg.n, g.edges) > 0
    else:
        positive = found
    return (int(found), int(positive), int(found != positive))


_OBSERVERS = {
    "moments": _obs_moments,
    "cycles": _obs_cycles,
    "joint": _obs_joint,
    "success": _obs_success,
}


def _accumulate(kind, cfg, start, stop):
    obs = _OBSERVERS[kind]
    s1 = s2 = None
    for t in range(start, stop):
        x = obs(cfg, t)
        if s1 is None:
            s1 = [0] * len(x)
            s2 = [[0] * len(x) for _ in x]
        for i, a in enumerate(x):
            s1[i] += a
            row = s2[i]
            for j, bb in enumerate(x):
                row[j] += a * bb
    return s1, s2


def _run(kind, cfg):
    """Exact integer sums sum(x_i) and sum(x_i x_j) over all trials."""
    if cfg.workers <= 1:
        return _accumulate(kind, cfg, 0, cfg.trials)
    bounds = [cfg.trials * i // cfg.workers for i in range(cfg.workers + 1)]
    with ProcessPoolExecutor(cfg.workers) as ex:
        parts = list(ex.map(_accumulate, [kind] * cfg.workers, [cfg] * cfg.workers,
                            bounds[:-1], bounds[1:]))
    s1, s2 = parts[0]
    for p1, p2 in parts[1:]:
        s1 = [a + b for a, b in zip(s1, p1)]
        s2 = [[a + b for a, b in zip(r, q)] for r, q in zip(s2, p2)]
    return s1, s2


def _to_float(q):
    q = Fraction(q)
    return q.numerator / q.denominator


def _stat(name, total, total_sq, trials, target=None):
    mean = Fraction(total, trials)
    var = Fraction(total_sq * trials - total * total, trials * (trials - 1)) if trials > 1 else Fraction(0)
    var_f = _to_float(var)
    return Stat(name, _to_float(mean), var_f, math.sqrt(var_f / trials), trials,
                None if target is None else _to_float(target))


def _ratio_stat(name, s_num, s_den, s_nn, s_dd, s_nd, trials, target=None):
    """Ratio-of-means estimator sum(num)/sum(den) with delta-method stderr."""
    r = Fraction(s_num, s_den)
    mean_den = Fraction(s_den, trials)
    # variance of num - r*den per trial
    resid = (s_nn - 2 * r * s_nd + r * r * s_dd) - Fraction(1, trials) * (s_num - r * s_den) ** 2
    var = resid / (trials - 1) if trials > 1 else Fraction(0)
    se = math.sqrt(_to_float(var) / trials) / _to_float(mean_den)
    return Stat(name, _to_float(r), _to_float(var), se, trials,
                None if target is None else _to_float(target))


def _metadata(cfg, experiment, **more):
    out = {
        "experiment": experiment,
        "n": cfg.n,
        "trials": cfg.trials,
        "seed": cfg.seed,
        "prng": PRNG_NAME,
        "trial_seed": "SeedSequence([seed, trial_index])",
        "mode": cfg.mode,
        "kmax": cfg.kmax,
        "version": f"modorient {__version__}",
    }
    out.update(more)
    return out


def _require_exact(cfg):
    if cfg.mode != "exact-Y":
        raise ValueError("this experiment needs mode='exact-Y'")


# -- experiments -----------------------------------------------------------------


def estimate_moments(cfg, exact_second=True):
    """Ê[Y], Ê[Y^2] and Ê[Y(Y-1)] with their exact values as targets."""
    _require_exact(cfg)
    s1, s2 = _run("moments", cfg)
    ey = exact_first_moment(cfg.n)
    ey2 = exact_second_moment(cfg.n) if exact_second else None
    targets = (ey, ey2, None if ey2 is None else ey2 - ey)
    names = ("Y", "Y^2", "Y(Y-1)")
    stats = {
        nm: _stat(nm, s1[i], s2[i][i], cfg.trials, tg)
        for i, (nm, tg) in enumerate(zip(names, targets))
    }
    return ExperimentResult("moments", stats, _metadata(cfg, "moments"))


def cycle_poisson_experiment(cfg):
    """Means, variances and pairwise correlations of the cycle counts X_k."""
    s1, s2 = _run("cycles", cfg)
    stats, ratios = {}, {}
    for i in range(cfg.kmax):
        k = i + 1
        st = _stat(f"X_{k}", s1[i], s2[i][i], cfg.trials, lambda_k(k))
        stats[st.name] = st
        ratios[st.name] = st.mean / st.variance if st.variance else None
    corr = {}
    N = cfg.trials
    for i in range(cfg.kmax):
        for j in range(i + 1, cfg.kmax):
            cov = (s2[i][j] - s1[i] * s1[j] / N) / (N - 1)
            vi = stats[f"X_{i + 1}"].variance
            vj = stats[f"X_{j + 1}"].variance
            corr[f"X_{i + 1},X_{j + 1}"] = cov / math.sqrt(vi * vj) if vi and vj else None
    extra = {"mean_over_variance": ratios, "correlations": corr}
    return ExperimentResult("cycles", stats, _metadata(cfg, "cycles"), extra)


def joint_moment_experiment(cfg, k=None):
    """Σ Y X_k / Σ Y against the exact finite-n ratio."""
    _require_exact(cfg)
    ks = range(1, cfg.kmax + 1) if k is None else [k]
    if k is not None and k > cfg.kmax:
        cfg = ExperimentConfig(**{**asdict(cfg), "kmax": k})
    s1, s2 = _run("joint", cfg)
    stats = {}
    for kk in ks:
        if kk > cfg.n:
            continue
        i = kk
        stats[f"YX_{kk}/Y"] = _ratio_stat(
            f"YX_{kk}/Y", s1[i], s1[0], s2[i][i], s2[0][0], s2[i][0],
            cfg.trials, finite_n_joint_moment_ratio(cfg.n, kk),
        )
    return ExperimentResult("joint", stats, _metadata(cfg, "joint"))


def orientation_success_rate(cfg):
    """Fraction of pairings on which the local search finds a valid orientation.

    For ``n`` within the exact-counting limit every trial is also checked
    against the exact count; ``disagreements`` counts trials where the solver
    and the exact count differ on existence.
    """
    s1, s2 = _run("success", cfg)
    stats = {
        "success": _stat("success", s1[0], s2[0][0], cfg.trials),
        "exists": _stat("exists", s1[1], s2[1][1], cfg.trials),
    }
    extra = {
        "disagreements": s1[2],
        "checked_exactly": cfg.n <= EXACT_COUNT_LIMIT,
        "threshold_note": "success-rate floors at finite n are engineering targets",
    }
    meta = _metadata(cfg, "success", max_restarts=cfg.max_restarts,
                     max_flips=cfg.max_flips if cfg.max_flips is not None else 10 * cfg.n)
    return ExperimentResult("success", stats, meta, extra)
