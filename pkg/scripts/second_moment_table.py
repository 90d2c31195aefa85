"""Exact E[Y], E[Y^2] and their ratio for small n, against the limit 9/7."""

import argparse
import json
import time

from modorient.moments import SECOND_MOMENT_LIMIT, moment_report


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nmax", type=int, default=SECOND_MOMENT_LIMIT)
    ap.add_argument("--json", action="store_true", help="one JSON object per line")
    args = ap.parse_args()

    if not args.json:
        print(f"{'n':>3} {'E[Y]':>14} {'E[Y^2]':>14} {'ratio':>9} {'ratio-9/7':>10} {'sec':>6}")
    for n in range(2, args.nmax + 1, 2):
        t = time.time()
        rep = moment_report(n)
        dt = time.time() - t
        if args.json:
            print(json.dumps(rep.to_json()))
            continue
        print(f"{n:>3} {float(rep.exact_EY):>14.6g} {float(rep.exact_EY2):>14.6g} "
              f"{rep.ratio:>9.5f} {rep.ratio - 9 / 7:>10.5f} {dt:>6.2f}")


if __name__ == "__main__":
    main()
