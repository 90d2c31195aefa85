"""Monte Carlo E[Y X_k] / E[Y] at small n against the exact finite-n ratio
and the limit mu_k = (8^k + (-16/9)^k) / 2k."""

import argparse

from modorient.moments import mu_k
from modorient.montecarlo import ExperimentConfig, joint_moment_experiment


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ns", type=int, nargs="+", default=[2, 4, 6])
    ap.add_argument("--trials", type=int, default=20000)
    ap.add_argument("--kmax", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'n':>3} {'k':>2} {'estimate':>10} {'se':>8} {'exact':>10} {'mu_k':>10}")
    for n in args.ns:
        res = joint_moment_experiment(
            ExperimentConfig(n=n, trials=args.trials, seed=args.seed, kmax=min(args.kmax, n))
        )
        for name, st in res.stats.items():
            k = int(name.split("_")[1].split("/")[0])
            print(f"{n:>3} {k:>2} {st.mean:>10.4f} {st.stderr:>8.4f} {st.target:>10.4f} "
                  f"{float(mu_k(k)):>10.4f}")


if __name__ == "__main__":
    main()
