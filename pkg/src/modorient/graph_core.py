"""Pairing model, multigraph projection, short-cycle census, edge connectivity.

A point is a ``(vertex, slot)`` pair with ``0 <= vertex < n`` and
``0 <= slot < d``.  A pairing is a perfect matching on the ``n*d`` points; its
projection onto vertices is a ``d``-regular multigraph in which loops and
parallel edges are kept.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .seeding import make_rng

__all__ = [
    "FormatError",
    "Pairing",
    "MultiGraph",
    "CycleCensus",
    "sample_pairing",
    "pairing_to_multigraph",
    "count_cycles",
    "edge_connectivity",
    "is_simple",
    "banana",
    "complete_graph",
    "format_graph",
    "parse_graph",
    "format_pairing",
    "parse_pairing",
]


class FormatError(ValueError):
    """Raised when a graph, pairing or orientation file cannot be parsed."""


@dataclass(frozen=True)
class Pairing:
    n: int
    d: int
    pairs: tuple  # of ((u, i), (v, j)) with (u, i) < (v, j), sorted

    def validate(self):
        if len(self.pairs) * 2 != self.n * self.d:
            raise ValueError(f"expected {self.n * self.d // 2} pairs, got {len(self.pairs)}")
        seen = set()
        for pair in self.pairs:
            for u, i in pair:
                if not (0 <= u < self.n and 0 <= i < self.d):
                    raise ValueError(f"point {u}:{i} out of range")
                if (u, i) in seen:
                    raise ValueError(f"point {u}:{i} appears twice")
                seen.add((u, i))
        return self


@dataclass(frozen=True)
class MultiGraph:
    n: int
    d: int
    edges: tuple  # of (u, v), u <= v; loops as (u, u); parallel edges repeated

    @property
    def m(self):
        return len(self.edges)

    def degrees(self):
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def loops(self):
        """Loop count per vertex."""
        cnt = [0] * self.n
        for u, v in self.edges:
            if u == v:
                cnt[u] += 1
        return cnt

    def multiplicities(self):
        """Counter over vertex pairs ``(u, v)`` with ``u < v``; loops excluded."""
        return Counter(e for e in self.edges if e[0] != e[1])

    def validate(self, regular=True):
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={self.n}")
        if regular:
            bad = [v for v, k in enumerate(self.degrees()) if k != self.d]
            if bad:
                raise ValueError(f"vertices {bad[:5]} do not have degree {self.d}")
        return self

    @classmethod
    def from_edges(cls, n, d, edges, regular=True):
        norm = tuple((u, v) if u <= v else (v, u) for u, v in edges)
        return cls(n, d, norm).validate(regular=regular)


@dataclass(frozen=True)
class CycleCensus:
    kmax: int
    counts: dict  # k -> number of k-cycles, 1 <= k <= kmax


def sample_pairing(n, d, seed):
    """Draw a uniformly random perfect matching on ``n*d`` points.

    The points are shuffled with a generator seeded from ``seed`` and
    consecutive entries are paired.  ``seed`` may also be a
    ``numpy.random.Generator``, which is then consumed.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if d < 1:
        raise ValueError(f"need d >= 1, got {d}")
    if (n * d) % 2:
        raise ValueError(f"n*d must be even, got n={n}, d={d}")
    rng = make_rng(seed)
    perm = rng.permutation(n * d).reshape(-1, 2)
    perm.sort(axis=1)
    perm = perm[np.argsort(perm[:, 0], kind="stable")]
    pairs = tuple(
        ((int(a) // d, int(a) % d), (int(b) // d, int(b) % d)) for a, b in perm.tolist()
    )
    return Pairing(n, d, pairs)


def pairing_to_multigraph(p):
    """Project each point pair onto its vertex pair.

    Pairs are already sorted by their smallest point, so the edge order is
    canonical.
    """
    edges = tuple(
        (u, v) if u <= v else (v, u) for (u, _), (v, _) in p.pairs
    )
    return MultiGraph(p.n, p.d, edges)


def _adjacency(g):
    adj = [dict() for _ in range(g.n)]
    for (u, v), mult in g.multiplicities().items():
        adj[u][v] = mult
        adj[v][u] = mult
    return adj


def _count_long_cycles(adj, k):
    # Each cycle is found twice from its smallest vertex, once per direction.
    total = 0
    n = len(adj)

    def extend(start, v, depth, weight, visited):
        nonlocal total
        if depth == k:
            w = adj[v].get(start)
            if w:
                total += weight * w
            return
        for u, mult in adj[v].items():
            if u > start and u not in visited:
                visited.add(u)
                extend(start, u, depth + 1, weight * mult, visited)
                visited.discard(u)

    for s in range(n):
        extend(s, s, 1, 1, {s})
    return total // 2


def _pair_multiplicities(g):
    """Distinct non-loop vertex pairs as arrays ``(u, v, multiplicity)``."""
    e = np.asarray(g.edges, dtype=np.int64).reshape(-1, 2)
    e = e[e[:, 0] != e[:, 1]]
    keys, mult = np.unique(e[:, 0] * g.n + e[:, 1], return_counts=True)
    return keys // g.n, keys % g.n, mult


def _count_triangles(n, u, v, mult):
    from scipy.sparse import csr_matrix

    if not len(mult):
        return 0
    a = csr_matrix(
        (np.concatenate([mult, mult]), (np.concatenate([u, v]), np.concatenate([v, u]))),
        shape=(n, n),
    )
    return int((a @ a).multiply(a).sum()) // 6


def count_cycles(g, kmax):
    """Count k-cycles of ``g`` for ``1 <= k <= kmax``.

    A loop is a 1-cycle and an unordered pair of parallel edges is a 2-cycle.
    For ``k >= 3`` a cycle is a set of ``k`` edges closing a walk through ``k``
    distinct vertices, so parallel edges multiply the count.
    """
    if kmax < 1:
        raise ValueError(f"kmax must be >= 1, got {kmax}")
    counts = {1: sum(1 for u, v in g.edges if u == v)}
    if kmax >= 2:
        u, v, mult = _pair_multiplicities(g)
        counts[2] = int((mult * (mult - 1) // 2).sum())
    if kmax >= 3:
        counts[3] = _count_triangles(g.n, u, v, mult)
    if kmax >= 4:
        adj = _adjacency(g)
        for k in range(4, kmax + 1):
            counts[k] = _count_long_cycles(adj, k)
    return CycleCensus(kmax, counts)


def edge_connectivity(g):
    """Global minimum edge cut (Stoer-Wagner); 0 if ``g`` is disconnected."""
    import networkx as nx

    if g.n < 2:
        return 0
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    for (u, v), mult in g.multiplicities().items():
        h.add_edge(u, v, weight=mult)
    if not nx.is_connected(h):
        return 0
    value, _ = nx.stoer_wagner(h)
    return int(value)


def is_simple(g):
    """True iff ``g`` has neither loops nor parallel edges."""
    return all(u != v for u, v in g.edges) and len(set(g.edges)) == len(g.edges)


def banana(d=9):
    """Two vertices joined by ``d`` parallel edges."""
    return MultiGraph(2, d, tuple((0, 1) for _ in range(d)))


def complete_graph(n):
    return MultiGraph(n, n - 1, tuple(combinations(range(n), 2)))


# -- text formats -----------------------------------------------------------


def format_graph(g):
    lines = [f"{g.n} {g.d}"]
    lines += [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def parse_graph(text, regular=True):
    """Parse the ``"n d"`` header plus one ``"u v"`` line per edge."""
    rows = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not rows:
        raise FormatError("empty graph file")
    try:
        n, d = (int(x) for x in rows[0])
        edges = []
        for r in rows[1:]:
            u, v = (int(x) for x in r)
            edges.append((u, v))
    except ValueError as exc:
        raise FormatError(f"malformed graph file: {exc}") from None
    if regular and len(edges) * 2 != n * d:
        raise FormatError(f"expected {n * d // 2} edges, found {len(edges)}")
    try:
        return MultiGraph.from_edges(n, d, edges, regular=regular)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def format_pairing(p):
    return "".join(f"{u}:{i} {v}:{j}\n" for (u, i), (v, j) in p.pairs)


def parse_pairing(text, n, d):
    pairs = []
    try:
        for ln in text.splitlines():
            if not ln.strip():
                continue
            a, b = ln.split()
            pa = tuple(int(x) for x in a.split(":"))
            pb = tuple(int(x) for x in b.split(":"))
            if len(pa) != 2 or len(pb) != 2:
                raise ValueError(f"bad point in line {ln!r}")
            pairs.append(tuple(sorted((pa, pb))))
    except ValueError as exc:
        raise FormatError(f"malformed pairing file: {exc}") from None
    pairs.sort()
    try:
        return Pairing(n, d, tuple(pairs)).validate()
    except ValueError as exc:
        raise FormatError(str(exc)) from None
