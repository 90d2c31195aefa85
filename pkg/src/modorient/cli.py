"""Command-line entry point.

Exit codes: 0 success, 1 valid but negative result (no orientation found,
zero count, failed check), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .certificate import certificate, run_checks
from .graph_core import (
    FormatError,
    format_graph,
    format_pairing,
    pairing_to_multigraph,
    parse_graph,
    sample_pairing,
)
from .moments import (
    SECOND_MOMENT_LIMIT,
    exact_first_moment,
    first_moment_terms,
    moment_report,
)
from .montecarlo import (
    ExperimentConfig,
    cycle_poisson_experiment,
    estimate_moments,
    joint_moment_experiment,
    orientation_success_rate,
)
from .orientation import (
    EXACT_COUNT_LIMIT,
    TooLargeError,
    count_valid_orientations,
    find_valid_orientation,
    format_orientation,
    verify_orientation,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2
SEED_ENV = "MODORIENT_SEED"


class UsageError(Exception):
    pass


def _default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={raw!r} is not an integer") from None


def _emit(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _read_graph(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read graph file: {exc}") from None
    return parse_graph(text)


# -- commands ------------------------------------------------------------------


def cmd_sample(args):
    p = sample_pairing(args.n, args.d, args.seed)
    g = pairing_to_multigraph(p)
    if args.out is None:
        sys.stdout.write(format_graph(g))
        return EXIT_OK
    Path(args.out).write_text(format_graph(g))
    Path(args.out + ".pairing").write_text(format_pairing(p))
    print(f"wrote {args.out} ({g.m} edges) and {args.out}.pairing")
    return EXIT_OK


def cmd_orient(args):
    g = _read_graph(args.graph)
    o = find_valid_orientation(g, args.seed, args.max_restarts)
    if o is None:
        print("no valid orientation found", file=sys.stderr)
        return EXIT_NEGATIVE
    if not verify_orientation(g, o):  # defensive, the solver verifies its output
        print("solver returned an invalid orientation", file=sys.stderr)
        return EXIT_NEGATIVE
    _emit(format_orientation(g, o), args.out)
    return EXIT_OK


def cmd_count(args):
    g = _read_graph(args.graph)
    c = count_valid_orientations(g, limit=args.limit).value
    _emit(f"{c}\n", args.out)
    return EXIT_OK if c > 0 else EXIT_NEGATIVE


def cmd_moments(args):
    second = args.second if args.second is not None else args.n <= SECOND_MOMENT_LIMIT
    rep = moment_report(args.n, second=second)
    if args.format == "json":
        _emit(json.dumps(rep.to_json(), indent=2) + "\n", args.out)
        return EXIT_OK
    num, den = first_moment_terms(args.n)
    ey = exact_first_moment(args.n)
    lines = [
        f"n = {args.n}",
        f"E[Y] = {num}/{den} = {ey.numerator}/{ey.denominator}",
        f"E[Y] ~ {float(ey):.10g}",
        f"3 (81/8)^(n/2) = {rep.asymptotic_EY:.10g}",
    ]
    if rep.exact_EY2 is not None:
        q = rep.exact_EY2
        lines += [
            f"E[Y^2] = {q.numerator}/{q.denominator}",
            f"E[Y^2] ~ {float(q):.10g}",
            f"E[Y^2]/E[Y]^2 = {rep.ratio:.10g}",
        ]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_verify_paper(args):
    checks = run_checks(tolerance=args.tolerance, samples=args.samples, seed=args.seed,
                        root_tol=args.root_tol)
    failed = [c for c in checks if not c.passed]
    if args.format == "json":
        cert = certificate(root_tol=args.root_tol)
        cert["checks"] = [
            {"name": c.name, "passed": c.passed, "expected": c.expected,
             "observed": c.observed, "error": c.error, "tolerance": c.tolerance}
            for c in checks
        ]
        _emit(json.dumps(cert, indent=2) + "\n", args.out)
    else:
        w = max(len(c.name) for c in checks)
        rows = [f"{'check':<{w}}  result  error       tol"]
        for c in checks:
            err = "exact" if c.error is None else f"{c.error:.2e}"
            tol = "-" if c.tolerance is None else f"{c.tolerance:.0e}"
            rows.append(f"{c.name:<{w}}  {'PASS' if c.passed else 'FAIL'}    {err:<10}  {tol}")
        rows.append(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
        _emit("\n".join(rows) + "\n", args.out)
    if failed:
        print("failed: " + "; ".join(
            f"{c.name} (expected {c.expected}, got {c.observed})" for c in failed
        ), file=sys.stderr)
        return EXIT_NEGATIVE
    return EXIT_OK


_EXPERIMENTS = {
    "moments": estimate_moments,
    "cycles": cycle_poisson_experiment,
    "joint": joint_moment_experiment,
    "success": orientation_success_rate,
}


def cmd_experiment(args):
    mode = args.mode
    if mode is None:
        mode = "exact-Y" if args.n <= EXACT_COUNT_LIMIT else "solver-only"
    cfg = ExperimentConfig(n=args.n, trials=args.trials, seed=args.seed, kmax=args.kmax,
                           mode=mode, workers=args.workers)
    if args.which == "joint":
        res = joint_moment_experiment(cfg, args.k)
    else:
        res = _EXPERIMENTS[args.which](cfg)
    if args.format == "csv":
        text = res.to_csv()
    elif args.format == "json":
        text = res.to_json_lines()
    else:
        rows = [f"{res.experiment}: n={cfg.n} trials={cfg.trials} seed={cfg.seed}"]
        for st in res.stats.values():
            tgt = "" if st.target is None else f"  target {st.target:.6g}  z {st.z_score:+.2f}"
            rows.append(f"  {st.name:<10} mean {st.mean:.6g}  se {st.stderr:.3g}{tgt}")
        for key, val in res.extra.items():
            rows.append(f"  {key}: {val}")
        text = "\n".join(rows) + "\n"
    _emit(text, args.out)
    return EXIT_OK


# -- parser -----------------------------------------------------------------------


def _common(p, n_required=False, seed=True):
    p.add_argument("--n", type=int, required=n_required, help="number of vertices (even)")
    p.add_argument("--d", type=int, default=9, help="degree (default: 9)")
    if seed:
        p.add_argument("--seed", type=int, default=None,
                       help=f"master seed (default: ${SEED_ENV} or 0)")
    p.add_argument("--out", default=None, help="output path (default: stdout)")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="modorient",
        description="Random 9-regular graphs and orientations with every in-degree 2 or 7.",
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="sample a pairing; write graph and pairing files")
    _common(p, n_required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("orient", help="search for a valid orientation of a graph file")
    p.add_argument("--graph", required=True, help="graph file ('n d' header, 'u v' lines)")
    p.add_argument("--seed", type=int, default=None, help=f"solver seed (default: ${SEED_ENV} or 0)")
    p.add_argument("--max-restarts", type=int, default=50, help="restart budget (default: 50)")
    p.add_argument("--out", default=None, help="orientation output path (default: stdout)")
    p.set_defaults(func=cmd_orient)

    p = sub.add_parser("count", help="exact number of valid orientations of a graph file")
    p.add_argument("--graph", required=True)
    p.add_argument("--limit", type=int, default=EXACT_COUNT_LIMIT,
                   help=f"largest n counted exactly (default: {EXACT_COUNT_LIMIT})")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("moments", help="exact first (and second) moment of Y")
    p.add_argument("--n", type=int, required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--second", dest="second", action="store_true", default=None,
                   help=f"force the second-moment lattice sum (default: if n <= {SECOND_MOMENT_LIMIT})")
    g.add_argument("--no-second", dest="second", action="store_false")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("verify-paper", help="check all reference constants")
    p.add_argument("--tolerance", type=float, default=None,
                   help="override every float tolerance (default: per-constant)")
    p.add_argument("--samples", type=int, default=0,
                   help="tail-sampling points in J (default: 0, skip)")
    p.add_argument("--root-tol", type=float, default=1e-12, help="bisection tolerance (default: 1e-12)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_verify_paper)

    p = sub.add_parser("experiment", help="seeded Monte Carlo experiments")
    p.add_argument("which", choices=sorted(_EXPERIMENTS))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=1000, help="number of trials (default: 1000)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--kmax", type=int, default=3, help="longest cycle length (default: 3)")
    p.add_argument("--k", type=int, default=None, help="joint: single cycle length")
    p.add_argument("--mode", choices=("exact-Y", "solver-only"), default=None,
                   help=f"default: exact-Y if n <= {EXACT_COUNT_LIMIT}, else solver-only")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_experiment)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if getattr(args, "seed", 0) is None:
            args.seed = _default_seed()
        return args.func(args)
    except (UsageError, FormatError, TooLargeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
