"""Valid orientations: every in-degree lies in ``{p, 3p+1}`` (default p=2).

For a ``(4p+1)``-regular multigraph an orientation is valid iff every
in-degree is ``p`` (an in-vertex) or ``3p+1`` (an out-vertex); counting
in-degrees forces exactly ``n/2`` in-vertices.  A loop always contributes one
to the in-degree and one to the out-degree of its vertex.

Fixing the in-vertex set turns the question into a prescribed in-degree
orientation problem, which is a unit-capacity flow problem.  The search over
in-vertex sets is a seeded local search scored by the flow deficiency.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations, product
from math import comb

from .graph_core import FormatError
from .seeding import make_rng

__all__ = [
    "Orientation",
    "InSet",
    "OrientationCount",
    "TooLargeError",
    "in_degrees",
    "verify_orientation",
    "feasible_with_inset",
    "find_valid_orientation",
    "count_with_inset",
    "count_valid_orientations",
    "count_pairing_orientations",
    "format_orientation",
    "parse_orientation",
    "EXACT_COUNT_LIMIT",
]

EXACT_COUNT_LIMIT = 6


class TooLargeError(ValueError):
    """Raised when an exact computation is requested beyond its size limit."""


@dataclass(frozen=True)
class Orientation:
    # heads[j] is 0 or 1: index into g.edges[j] of the head endpoint
    heads: tuple


@dataclass(frozen=True)
class InSet:
    members: frozenset


@dataclass(frozen=True)
class OrientationCount:
    value: int

    def __int__(self):
        return self.value


def _targets(d):
    if (d - 1) % 4:
        raise ValueError(f"degree {d} is not of the form 4p+1")
    p = (d - 1) // 4
    return p, 3 * p + 1


def in_degrees(g, o):
    if len(o.heads) != len(g.edges):
        raise ValueError(
            f"orientation has {len(o.heads)} entries, graph has {len(g.edges)} edges"
        )
    indeg = [0] * g.n
    for (u, v), h in zip(g.edges, o.heads):
        if u == v:
            indeg[u] += 1
        else:
            indeg[v if h else u] += 1
    return indeg


def verify_orientation(g, o):
    """True iff every in-degree of ``o`` lies in ``{p, 3p+1}``."""
    lo, hi = _targets(g.d)
    return all(k in (lo, hi) for k in in_degrees(g, o))


# -- flow core -----------------------------------------------------------------


class _Flow:
    """Orientation of the non-loop edges with prescribed residual in-degrees.

    ``excess[v] = indeg[v] - target[v]``; augmenting paths move one unit of
    in-degree from a vertex with positive excess to one with negative excess by
    reversing every edge on the path.  When no path remains the total positive
    excess equals ``m' - maxflow``.
    """

    def __init__(self, g):
        self.g = g
        self.ends = [e for e in g.edges if e[0] != e[1]]
        self.index = [j for j, e in enumerate(g.edges) if e[0] != e[1]]
        self.incident = [[] for _ in range(g.n)]
        for j, (u, v) in enumerate(self.ends):
            self.incident[u].append(j)
            self.incident[v].append(j)
        self.loops = g.loops()
        self.heads = None
        self.indeg = None
        self.target = None

    def copy(self):
        other = _Flow.__new__(_Flow)
        other.g, other.ends, other.index = self.g, self.ends, self.index
        other.incident, other.loops = self.incident, self.loops
        other.heads = list(self.heads)
        other.indeg = list(self.indeg)
        other.target = list(self.target)
        return other

    def set_targets(self, prescription):
        self.target = [r - l for r, l in zip(prescription, self.loops)]
        if self.heads is None:
            self._greedy()

    def _greedy(self):
        room = list(self.target)
        self.heads = []
        self.indeg = [0] * self.g.n
        for u, v in self.ends:
            h = 1 if room[v] > room[u] else 0
            w = v if h else u
            room[w] -= 1
            self.indeg[w] += 1
            self.heads.append(h)

    def head(self, j):
        return self.ends[j][self.heads[j]]

    def deficiency(self):
        """Augment to a maximum flow and return the unmet in-degree total."""
        n = self.g.n
        while True:
            sources = [v for v in range(n) if self.indeg[v] > self.target[v]]
            if not sources:
                return 0
            # BFS over "reverse an edge whose head is the current vertex"
            parent = [-2] * n
            for s in sources:
                parent[s] = -1
            queue = deque(sources)
            sink = -1
            while queue and sink < 0:
                v = queue.popleft()
                for j in self.incident[v]:
                    if self.head(j) != v:
                        continue
                    u, w = self.ends[j]
                    t = w if u == v else u
                    if parent[t] != -2:
                        continue
                    parent[t] = j
                    if self.indeg[t] < self.target[t]:
                        sink = t
                        break
                    queue.append(t)
            if sink < 0:
                self.blocked = [v for v in range(n) if parent[v] != -2]
                return sum(max(0, a - b) for a, b in zip(self.indeg, self.target))
            t = sink
            self.indeg[t] += 1
            while parent[t] != -1:
                j = parent[t]
                self.heads[j] ^= 1
                u, w = self.ends[j]
                t = w if u == t else u
            self.indeg[t] -= 1

    def orientation(self):
        heads = [0] * len(self.g.edges)
        for j, h in zip(self.index, self.heads):
            heads[j] = h
        return Orientation(tuple(heads))


def _locally_possible(g, prescription):
    deg = g.degrees()
    loops = g.loops()
    return all(
        0 <= r - l <= dv - 2 * l for r, l, dv in zip(prescription, loops, deg)
    )


def _prescription(g, members):
    lo, hi = _targets(g.d)
    return [lo if v in members else hi for v in range(g.n)]


def _check_inset(g, s):
    members = s.members if isinstance(s, InSet) else frozenset(s)
    if g.n % 2 or len(members) != g.n // 2:
        raise ValueError(f"in-set must have n/2 = {g.n // 2} members, got {len(members)}")
    if any(not 0 <= v < g.n for v in members):
        raise ValueError("in-set member out of range")
    return members


def feasible_with_inset(g, s):
    """Orientation with in-degree p on ``s`` and 3p+1 elsewhere, or None."""
    members = _check_inset(g, s)
    presc = _prescription(g, members)
    if not _locally_possible(g, presc):
        return None
    flow = _Flow(g)
    flow.set_targets(presc)
    if flow.deficiency():
        return None
    return flow.orientation()


def _penalty(g, presc):
    # loops beyond a vertex's budget cannot be fixed by any flow
    bad = 0
    for r, l, dv in zip(presc, g.loops(), g.degrees()):
        bad += max(0, l - r) + max(0, (r - l) - (dv - 2 * l))
    return bad


def find_valid_orientation(g, seed=0, max_restarts=50, max_flips=None):
    """Seeded local search over balanced in-vertex sets.

    Each restart starts from a random set of ``n/2`` in-vertices; a move swaps
    one in-vertex with one out-vertex and is accepted only if it strictly
    lowers the flow deficiency.  Swaps that raise the prescription inside the
    blocking set of the current flow are tried first, the rest in random order.
    A restart ends at a local minimum or after ``max_flips`` accepted moves
    (default ``10 n``).  When there are at most ``max_restarts`` in-vertex sets
    the restarts visit distinct sets, so the search is exhaustive.

    Returns the first valid orientation found, or None.  None is not a proof
    that no valid orientation exists.
    """
    if g.n % 2:
        return None
    lo, hi = _targets(g.d)
    # a vertex with too many loops is infeasible under either prescription
    for l, dv in zip(g.loops(), g.degrees()):
        if not any(0 <= r - l <= dv - 2 * l for r in (lo, hi)):
            return None
    rng = make_rng(seed)
    if max_flips is None:
        max_flips = 10 * g.n
    half = g.n // 2
    vertices = list(range(g.n))

    if comb(g.n, half) <= max_restarts:
        starts = [frozenset(c) for c in combinations(vertices, half)]
        order = rng.permutation(len(starts))
        starts = [starts[i] for i in order]
    else:
        starts = (
            frozenset(int(v) for v in rng.choice(g.n, size=half, replace=False))
            for _ in range(max_restarts)
        )

    base = _Flow(g)
    for members in starts:
        members = set(members)
        presc = _prescription(g, members)
        flow = base.copy() if base.heads is not None else base
        flow.set_targets(presc)
        score = flow.deficiency() + _penalty(g, presc)
        flips = 0
        while score and flips < max_flips:
            ins = sorted(members)
            outs = [v for v in vertices if v not in members]
            blocked = set(getattr(flow, "blocked", ()))
            moves = [(a, b) for a in ins for b in outs]
            rng.shuffle(moves)
            moves.sort(key=lambda ab: not (ab[0] in blocked and ab[1] not in blocked))
            for a, b in moves:
                presc[a], presc[b] = hi, lo
                trial = flow.copy()
                trial.target[a] += hi - lo
                trial.target[b] -= hi - lo
                new = trial.deficiency() + _penalty(g, presc)
                if new < score:
                    members.discard(a)
                    members.add(b)
                    flow, score = trial, new
                    flips += 1
                    break
                presc[a], presc[b] = lo, hi
            else:
                break
        if base.heads is None:
            base = flow.copy()
        if score == 0:
            o = flow.orientation()
            assert verify_orientation(g, o)
            return o
    return None


# -- exact counting ------------------------------------------------------------


def count_with_inset(g, s):
    """Number of orientations with in-degree p on ``s`` and 3p+1 elsewhere.

    Dynamic programming over the edge list; the state is the vector of
    residual in-degree budgets, with loops deducted up front.  A budget is
    pruned as soon as it leaves ``[0, remaining incident edges]``.
    """
    members = _check_inset(g, s)
    presc = _prescription(g, members)
    if not _locally_possible(g, presc):
        return 0
    ends = [e for e in g.edges if e[0] != e[1]]
    remaining = [0] * g.n
    for u, v in ends:
        remaining[u] += 1
        remaining[v] += 1
    budget = tuple(r - l for r, l in zip(presc, g.loops()))
    states = {budget: 1}
    for u, v in ends:
        remaining[u] -= 1
        remaining[v] -= 1
        nxt = {}
        for state, ways in states.items():
            for w, o in ((u, v), (v, u)):
                if state[w] == 0 or state[o] > remaining[o]:
                    continue
                new = list(state)
                new[w] -= 1
                if new[w] > remaining[w]:
                    continue
                key = tuple(new)
                nxt[key] = nxt.get(key, 0) + ways
        states = nxt
        if not states:
            return 0
    return states.get((0,) * g.n, 0)


def count_valid_orientations(g, limit=EXACT_COUNT_LIMIT):
    """Exact number of valid orientations, summed over all in-vertex sets."""
    if g.n > limit:
        raise TooLargeError(f"exact counting is limited to n <= {limit}, got n={g.n}")
    if g.n % 2:
        return OrientationCount(0)
    total = 0
    for c in combinations(range(g.n), g.n // 2):
        total += count_with_inset(g, c)
    return OrientationCount(total)


def count_pairing_orientations(g, limit=EXACT_COUNT_LIMIT):
    """Valid orientations of the underlying pairing.

    In the pairing model a loop is a pair of two distinct points and can be
    oriented in two ways, so each loop doubles the multigraph count.
    """
    loops = sum(1 for u, v in g.edges if u == v)
    return count_valid_orientations(g, limit).value << loops


def brute_force_count(g):
    """Naive ``2^m`` enumeration; only for small test graphs."""
    nonloop = [j for j, (u, v) in enumerate(g.edges) if u != v]
    heads = [0] * len(g.edges)
    total = 0
    for bits in product((0, 1), repeat=len(nonloop)):
        for j, b in zip(nonloop, bits):
            heads[j] = b
        if verify_orientation(g, Orientation(tuple(heads))):
            total += 1
    return total


# -- text format ---------------------------------------------------------------


def format_orientation(g, o):
    lines = []
    for (u, v), h in zip(g.edges, o.heads):
        tail, head = (u, v) if h else (v, u)
        lines.append(f"{tail} -> {head}")
    return "\n".join(lines) + "\n"


def parse_orientation(text, g):
    rows = [ln for ln in text.splitlines() if ln.strip()]
    if len(rows) != len(g.edges):
        raise FormatError(f"expected {len(g.edges)} orientation lines, found {len(rows)}")
    heads = []
    for ln, (u, v) in zip(rows, g.edges):
        try:
            a, b = (int(x) for x in ln.split("->"))
        except ValueError:
            raise FormatError(f"malformed orientation line {ln!r}") from None
        if (a, b) == (u, v):
            heads.append(1)
        elif (a, b) == (v, u):
            heads.append(0)
        else:
            raise FormatError(f"line {ln!r} does not match edge ({u}, {v})")
    return Orientation(tuple(heads))
