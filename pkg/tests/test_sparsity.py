import random

import pytest

from rigidity.fixtures import chain_10, double_banana, w4
from rigidity.graphs import GraphError, LabeledGraph, complete_graph, wheel_graph
from rigidity.sparsity import (
    fundamental_circuit,
    is_circuit,
    is_laman,
    is_sparse23,
    sparsity_class,
)

from oracles import (
    all_graphs,
    circuit_bruteforce,
    fundamental_circuit_bruteforce,
    laman_bruteforce,
    random_graph,
    sparse23_bruteforce,
)


def test_pebble_game_matches_bruteforce_exhaustively_small():
    # n <= 5 here; the acceptance suite sweeps n <= 6 plus random n = 7
    for n in range(2, 6):
        for g in all_graphs(n):
            assert is_sparse23(g) == sparse23_bruteforce(g), g
            assert is_laman(g) == laman_bruteforce(g), g
            if n >= 4:
                assert is_circuit(g) == circuit_bruteforce(g), g


def test_pebble_game_matches_bruteforce_random_n7():
    rng = random.Random(1234)
    for _ in range(200):
        g = random_graph(7, rng)
        assert is_sparse23(g) == sparse23_bruteforce(g), g
        assert is_circuit(g) == circuit_bruteforce(g), g


def test_known_circuits():
    assert is_circuit(complete_graph([1, 2, 3, 4]))
    assert is_circuit(wheel_graph(9, [1, 2, 3, 4]))
    assert is_circuit(double_banana())
    assert is_circuit(chain_10())
    assert not is_circuit(complete_graph([1, 2, 3, 4, 5]))  # too many edges
    k4_plus_tail = _k4_with_tail()
    assert not is_circuit(k4_plus_tail)  # right count, K4 subset dependent


def _k4_with_tail() -> LabeledGraph:
    k4 = complete_graph([1, 2, 3, 4])
    return LabeledGraph(range(1, 6), k4.edges | {(3, 5), (4, 5)})


def test_sparsity_class_labels():
    tri = LabeledGraph([1, 2, 3], [(1, 2), (2, 3)])
    assert sparsity_class(tri) == "sparse"
    assert sparsity_class(tri.add_edge(1, 3)) == "laman"
    assert sparsity_class(complete_graph([1, 2, 3, 4])) == "spanning-circuit"
    assert sparsity_class(_k4_with_tail()) == "laman-plus-one"
    assert sparsity_class(complete_graph([1, 2, 3, 4, 5])) == "dependent"


def test_min_size_guards():
    lone = LabeledGraph([1], [])
    with pytest.raises(GraphError):
        is_sparse23(lone)
    with pytest.raises(GraphError):
        is_circuit(LabeledGraph([1, 2, 3], [(1, 2)]))


def test_fundamental_circuit_hand_case():
    # Laman on 5 vertices; adding (3,4) completes a K4 that avoids vertex 5
    g = LabeledGraph(range(1, 6),
                     [(1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (1, 5), (4, 5)])
    assert is_laman(g)
    c = fundamental_circuit(g, (3, 4))
    assert c == complete_graph([1, 2, 3, 4])


def test_fundamental_circuit_spanning_case():
    w = w4()
    g = w.delete_edge(*w.sorted_edges()[0])
    assert is_laman(g)
    e = w.sorted_edges()[0]
    assert fundamental_circuit(g, e) == w


def test_fundamental_circuit_matches_bruteforce():
    rng = random.Random(9)
    checked = 0
    for n in (4, 5):
        for g in all_graphs(n):
            if not laman_bruteforce(g):
                continue
            non_edges = g.non_edges()
            if not non_edges:
                continue
            e = non_edges[rng.randrange(len(non_edges))]
            support, edges = fundamental_circuit_bruteforce(g, e)
            c = fundamental_circuit(g, e)
            assert c.vertices == support
            assert c.edges == edges
            checked += 1
    assert checked > 50


def test_fundamental_circuit_rejects_bad_input():
    g = LabeledGraph(range(1, 6),
                     [(1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (1, 5), (4, 5)])
    with pytest.raises(GraphError):
        fundamental_circuit(g, (1, 2))  # already an edge
    with pytest.raises(GraphError):
        fundamental_circuit(g, (1, 9))  # endpoint outside
    with pytest.raises(GraphError):
        fundamental_circuit(complete_graph([1, 2, 3, 4]), (1, 5))  # not Laman
