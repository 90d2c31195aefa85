"""Enumerate every loop-free 9-regular multigraph on n labelled vertices and
count those without a valid orientation, split by edge connectivity."""

import argparse
import time
from collections import Counter
from itertools import combinations

from modorient.graph_core import MultiGraph, edge_connectivity
from modorient.orientation import feasible_with_inset


def multiplicity_vectors(n, d):
    pairs = list(combinations(range(n), 2))
    # index of the last pair touching each vertex: its degree is fixed there
    last = {u: max(i for i, p in enumerate(pairs) if u in p) for u in range(n)}
    deg, mult = [0] * n, []

    def rec(i):
        if i == len(pairs):
            if deg == [d] * n:
                yield pairs, tuple(mult)
            return
        u, v = pairs[i]
        hi = min(d - deg[u], d - deg[v])
        lo = 0
        if last[u] == i:
            if d - deg[u] > hi:
                return
            lo = hi = d - deg[u]
        for k in range(lo, hi + 1):
            deg[u] += k
            deg[v] += k
            mult.append(k)
            yield from rec(i + 1)
            deg[u] -= k
            deg[v] -= k
            mult.pop()

    yield from rec(0)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=6)
    a = ap.parse_args()
    t0 = time.time()
    total, bad = 0, Counter()
    for pairs, mult in multiplicity_vectors(a.n, 9):
        total += 1
        g = MultiGraph.from_edges(a.n, 9, [e for e, k in zip(pairs, mult) for _ in range(k)])
        if not any(feasible_with_inset(g, set(s)) is not None
                   for s in combinations(range(a.n), a.n // 2)):
            bad[edge_connectivity(g)] += 1
    print(f"n={a.n}: {total} loop-free multigraphs, {sum(bad.values())} without a valid orientation")
    for lam, c in sorted(bad.items()):
        print(f"  edge connectivity {lam}: {c}")
    print(f"{time.time() - t0:.1f}s")


if __name__ == "__main__":
    main()
