import random

import networkx as nx
import pytest

from rigidity.canon import are_isomorphic
from rigidity.connectivity import (
    admissible_pairs,
    connectivity_class,
    is_connected,
    separating_pairs,
    two_split,
    two_sum,
)
from rigidity.fixtures import chain_10, double_banana, k4, w4, w5, wheel
from rigidity.graphs import GraphError, LabeledGraph, complete_graph
from rigidity.sparsity import is_circuit


def _nx(g: LabeledGraph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(g.edges)
    return h


def _block_on(e: tuple[int, int], fresh: list[int]) -> LabeledGraph:
    """K4 or wheel on e's endpoints plus `fresh`, guaranteed to contain e."""
    labels = [e[0], e[1], *fresh]
    if len(labels) == 4:
        return complete_graph(labels)
    # hub gets e[0], the rim starts at e[1]: e is a spoke
    return wheel(len(labels) - 1).relabel(dict(zip(range(1, len(labels) + 1), labels)))


def _random_two_sum_circuit(rng: random.Random, max_n: int = 10) -> LabeledGraph:
    """Random circuit glued from K4s and small wheels by repeated 2-sums."""
    size = rng.choice([4, 5, 6])
    g = complete_graph(range(1, 5)) if size == 4 else wheel(size - 1)
    while True:
        extra = rng.choice([4, 5])
        if g.n + extra - 2 > max_n:
            return g
        e = g.sorted_edges()[rng.randrange(g.m)]
        fresh = [max(g.vertices) + i for i in range(1, extra - 1)]
        g = two_sum(g, _block_on(e, fresh), e)
        if rng.random() < 0.5:
            return g


def test_chain_10_separating_pairs():
    g = chain_10()
    pairs = [(p.u, p.v) for p in separating_pairs(g)]
    assert pairs == [(2, 9), (3, 8), (4, 7)]


def test_chain_10_outer_splits_have_isomorphic_parts():
    g = chain_10()
    by_pair = {(p.u, p.v): p for p in separating_pairs(g)}
    a1, a2, _ = two_split(g, by_pair[(2, 9)], (0,))
    b1, b2, _ = two_split(g, by_pair[(4, 7)], (0,))
    found = {frozenset((x.n, y.n)) for x, y in ((a1, a2), (b1, b2))}
    assert found == {frozenset((4, 8))}
    small_a, big_a = sorted((a1, a2), key=lambda h: h.n)
    small_b, big_b = sorted((b1, b2), key=lambda h: h.n)
    assert are_isomorphic(small_a, small_b)
    assert are_isomorphic(big_a, big_b)


def test_double_banana_single_separating_pair():
    g = double_banana()
    pairs = separating_pairs(g)
    assert [(p.u, p.v) for p in pairs] == [(2, 5)]
    assert not pairs[0].adjacent
    assert connectivity_class(g) == "2-connected"


def test_connectivity_classes():
    assert connectivity_class(k4()) == "3-connected"
    assert connectivity_class(w5()) == "3-connected"
    path = LabeledGraph([1, 2, 3], [(1, 2), (2, 3)])
    assert connectivity_class(path) == "1-connected"
    two_parts = LabeledGraph([1, 2, 3, 4], [(1, 2), (3, 4)])
    assert connectivity_class(two_parts) == "disconnected"
    assert not is_connected(two_parts)


def test_separating_pairs_match_networkx_node_connectivity():
    rng = random.Random(5)
    samples = [_random_two_sum_circuit(rng) for _ in range(40)]
    samples += [w4(), w5(), wheel(6), k4()]
    for g in samples:
        has_pair = bool(separating_pairs(g)) if g.n >= 4 else False
        k = nx.node_connectivity(_nx(g))
        assert has_pair == (k == 2), g
        expected = "2-connected" if k == 2 else "3-connected"
        assert connectivity_class(g) == expected, g


def test_two_sum_inverts_two_split_on_random_circuits():
    rng = random.Random(42)
    built = 0
    while built < 60:
        g = _random_two_sum_circuit(rng)
        assert is_circuit(g)
        pairs = [p for p in separating_pairs(g) if not p.adjacent]
        if not pairs:
            continue
        built += 1
        p = pairs[rng.randrange(len(pairs))]
        h1, h2, e = two_split(g, p, (0,))
        assert is_circuit(h1) and is_circuit(h2)
        assert two_sum(h1, h2, e) == g


def test_two_split_rejects_adjacent_pair_and_bad_side():
    g = double_banana()
    p = separating_pairs(g)[0]
    with pytest.raises(GraphError):
        two_split(g, p, ())
    with pytest.raises(GraphError):
        two_split(g, p, (0, 1))
    with pytest.raises(GraphError):
        two_split(g, p, (7,))


def test_two_sum_rejects_overlapping_parts():
    a = complete_graph([1, 2, 3, 4])
    b = complete_graph([3, 4, 5, 6])
    assert is_circuit(two_sum(a, b, (3, 4)))
    c = complete_graph([2, 3, 4, 5])
    with pytest.raises(GraphError):
        two_sum(a, c, (3, 4))  # shares vertex 2 beyond the glue edge
    with pytest.raises(GraphError):
        two_sum(a, b, (1, 2))  # not an edge of both


def test_admissible_pairs_wheel():
    g = w4()
    pairs = admissible_pairs(g)
    assert pairs, "W4 should admit at least one admissible pair"
    for v, (a, b) in pairs:
        assert g.degree(v) == 3
        assert not g.has_edge(a, b)
        h = g.delete_vertex(v).add_edge(a, b)
        assert is_circuit(h)
        assert connectivity_class(h) == "3-connected"


def test_admissible_pairs_requires_3_connected():
    with pytest.raises(GraphError):
        admissible_pairs(double_banana())
