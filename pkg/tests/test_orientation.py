import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modorient.graph_core import (
    FormatError,
    MultiGraph,
    banana,
    complete_graph,
    pairing_to_multigraph,
    sample_pairing,
)
from modorient.orientation import (
    InSet,
    Orientation,
    TooLargeError,
    brute_force_count,
    count_pairing_orientations,
    count_valid_orientations,
    count_with_inset,
    feasible_with_inset,
    find_valid_orientation,
    format_orientation,
    in_degrees,
    parse_orientation,
    verify_orientation,
)
from modorient.seeding import make_rng

from oracles import hakimi_exists, naive_multigraph_count, naive_pairing_count


def loops_and_bridge():
    return MultiGraph.from_edges(2, 9, [(0, 0)] * 4 + [(1, 1)] * 4 + [(0, 1)])


def test_banana_count():
    assert count_valid_orientations(banana()).value == 72
    assert brute_force_count(banana()) == 72
    assert naive_multigraph_count(2, 9, banana().edges) == 72


def test_k10_solved_and_verified():
    g = complete_graph(10)
    o = find_valid_orientation(g, seed=1)
    assert o is not None and verify_orientation(g, o)
    assert sorted(in_degrees(g, o)) == [2] * 5 + [7] * 5


def test_loop_forced_infeasible():
    g = loops_and_bridge()
    assert find_valid_orientation(g, seed=0) is None
    assert count_valid_orientations(g).value == 0
    assert not hakimi_exists(2, 9, g.edges)


def test_in_degrees_misaligned():
    with pytest.raises(ValueError):
        in_degrees(banana(), Orientation((0, 1)))


def test_inset_size_checked():
    with pytest.raises(ValueError):
        feasible_with_inset(banana(), {0, 1})
    with pytest.raises(ValueError):
        count_with_inset(banana(), InSet(frozenset()))


def test_feasible_with_inset_banana():
    o = feasible_with_inset(banana(), {0})
    assert o is not None
    assert in_degrees(banana(), o) == [2, 7]
    assert count_with_inset(banana(), {0}) == 36


def test_exact_count_limit():
    g = pairing_to_multigraph(sample_pairing(8, 9, 0))
    with pytest.raises(TooLargeError):
        count_valid_orientations(g)


@pytest.mark.parametrize("n", [2, 4])
def test_counts_match_naive_enumeration(n):
    for t in range(5):
        g = pairing_to_multigraph(sample_pairing(n, 9, make_rng(31, t)))
        assert count_valid_orientations(g).value == naive_multigraph_count(n, 9, g.edges)
        assert count_pairing_orientations(g) == naive_pairing_count(n, 9, g.edges)


def test_degree_five_counts():
    # p = 1: in-degrees 1 or 4
    for t in range(10):
        g = pairing_to_multigraph(sample_pairing(6, 5, make_rng(77, t)))
        assert count_valid_orientations(g).value == naive_multigraph_count(6, 5, g.edges)


@pytest.mark.parametrize("n", [2, 4, 6])
def test_solver_matches_hakimi(n):
    for t in range(40 if n < 6 else 15):
        g = pairing_to_multigraph(sample_pairing(n, 9, make_rng(n, t)))
        exists = hakimi_exists(n, 9, g.edges)
        o = find_valid_orientation(g, seed=make_rng(1000 + n, t))
        assert (o is not None) == exists
        assert (count_valid_orientations(g).value > 0) == exists
        if o is not None:
            assert verify_orientation(g, o)


def test_solver_deterministic():
    g = pairing_to_multigraph(sample_pairing(40, 9, 2))
    assert find_valid_orientation(g, seed=5) == find_valid_orientation(g, seed=5)


def test_solver_large_n():
    found = 0
    for t in range(10):
        g = pairing_to_multigraph(sample_pairing(100, 9, make_rng(8, t)))
        o = find_valid_orientation(g, seed=t)
        if o is not None:
            assert verify_orientation(g, o)
            found += 1
    assert found >= 9


def test_orientation_roundtrip():
    g = complete_graph(10)
    o = find_valid_orientation(g, seed=0)
    assert parse_orientation(format_orientation(g, o), g) == o


def test_orientation_parse_errors():
    g = banana()
    with pytest.raises(FormatError):
        parse_orientation("0 -> 1\n", g)
    with pytest.raises(FormatError):
        parse_orientation("0 -> 2\n" * 9, g)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32), n=st.sampled_from([2, 4]))
def test_inset_counts_sum_to_total(seed, n):
    from itertools import combinations

    g = pairing_to_multigraph(sample_pairing(n, 9, seed))
    total = sum(count_with_inset(g, c) for c in combinations(range(n), n // 2))
    assert total == count_valid_orientations(g).value
    for c in combinations(range(n), n // 2):
        assert (feasible_with_inset(g, c) is not None) == (count_with_inset(g, c) > 0)


def test_verify_banana_split():
    g = banana()
    # head index 0 points the edge at vertex 0
    two = Orientation(tuple([0] * 2 + [1] * 7))
    three = Orientation(tuple([0] * 3 + [1] * 6))
    assert verify_orientation(g, two)
    assert not verify_orientation(g, three)


def test_k10_every_inset_feasible():
    from itertools import combinations

    from oracles import hakimi_inset

    g = complete_graph(10)
    for s in combinations(range(10), 5):
        assert hakimi_inset(10, 9, g.edges, s)
        o = feasible_with_inset(g, set(s))
        assert o is not None and verify_orientation(g, o)
        assert [v for v, x in enumerate(in_degrees(g, o)) if x == 2] == list(s)


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_inset_feasibility_matches_hakimi(n):
    from itertools import combinations

    from oracles import hakimi_inset

    for t in range(6 if n < 8 else 3):
        g = pairing_to_multigraph(sample_pairing(n, 9, make_rng(400 + n, t)))
        for s in combinations(range(n), n // 2):
            assert (feasible_with_inset(g, set(s)) is not None) == hakimi_inset(n, 9, g.edges, s)


def _from_multiplicities(n, mult):
    from itertools import combinations

    pairs = list(combinations(range(n), 2))
    return MultiGraph.from_edges(n, 9, [e for e, k in zip(pairs, mult) for _ in range(k)])


def test_loopless_n4_all_orientable():
    from itertools import product

    seen = 0
    for mult in product(range(10), repeat=6):
        g = MultiGraph(4, 9, tuple(e for e, k in zip(
            [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], mult) for _ in range(k)))
        if g.degrees() != [9] * 4:
            continue
        seen += 1
        assert count_valid_orientations(g).value > 0
    assert seen == 55


def test_connected_loopless_infeasible_n6():
    from modorient.graph_core import edge_connectivity

    g = _from_multiplicities(6, [0, 0, 0, 3, 6, 3, 3, 3, 0, 6, 0, 0, 0, 0, 3])
    assert not any(u == v for u, v in g.edges)
    assert edge_connectivity(g) == 3
    assert not hakimi_exists(6, 9, g.edges)
    assert find_valid_orientation(g, seed=0) is None
    assert count_valid_orientations(g).value == 0
