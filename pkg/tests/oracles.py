"""Brute-force reference implementations used only by tests.

Deliberately independent of the package internals: sparsity is decided by
enumerating vertex subsets, matroid dependence by enumerating edge subsets.
Exponential, fine up to n = 7.
"""
from __future__ import annotations

from itertools import combinations

from rigidity.graphs import LabeledGraph


def sparse23_bruteforce(g: LabeledGraph) -> bool:
    """Every k-vertex subset (k >= 2) spans at most 2k - 3 edges."""
    vs = sorted(g.vertices)
    edges = list(g.edges)
    for k in range(2, len(vs) + 1):
        for sub in combinations(vs, k):
            s = set(sub)
            spanned = sum(1 for u, v in edges if u in s and v in s)
            if spanned > 2 * k - 3:
                return False
    return True


def _edge_set_sparse(vertices, edges) -> bool:
    vs = sorted(vertices)
    for k in range(2, len(vs) + 1):
        for sub in combinations(vs, k):
            s = set(sub)
            spanned = sum(1 for u, v in edges if u in s and v in s)
            if spanned > 2 * k - 3:
                return False
    return True


def laman_bruteforce(g: LabeledGraph) -> bool:
    return g.m == 2 * g.n - 3 and sparse23_bruteforce(g)


def circuit_bruteforce(g: LabeledGraph) -> bool:
    """Dependent edge set whose proper subsets are all independent."""
    if g.m != 2 * g.n - 2:
        return False
    edges = list(g.edges)
    if _edge_set_sparse(g.vertices, edges):
        return False
    return all(
        _edge_set_sparse(g.vertices, edges[:i] + edges[i + 1:])
        for i in range(len(edges))
    )


def fundamental_circuit_bruteforce(g: LabeledGraph, e: tuple[int, int]):
    """Minimal dependent edge subset of g + e as (vertex set, edge set).

    Scans subsets containing e by increasing size; the first dependent one
    is a circuit (everything smaller was independent) and over a Laman base
    it is unique, which the scan asserts.
    """
    others = [tuple(sorted(x)) for x in g.edges]
    e = tuple(sorted(e))
    for size in range(3, len(others) + 2):
        found = []
        for rest in combinations(others, size - 1):
            subset = list(rest) + [e]
            support = {v for ed in subset for v in ed}
            if not _edge_set_sparse(support, subset):
                found.append(subset)
        if found:
            assert len(found) == 1, f"{len(found)} minimal dependent sets"
            subset = found[0]
            support = frozenset(v for ed in subset for v in ed)
            return support, frozenset(subset)
    raise AssertionError("no dependent subset: base graph was not Laman?")


def all_graphs(n: int):
    """Every labeled graph on vertex set 1..n, as an iterator."""
    pairs = list(combinations(range(1, n + 1), 2))
    for mask in range(1 << len(pairs)):
        edges = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
        yield LabeledGraph(range(1, n + 1), edges)


def random_graph(n: int, rng) -> LabeledGraph:
    pairs = list(combinations(range(1, n + 1), 2))
    m = rng.randrange(0, len(pairs) + 1)
    return LabeledGraph(range(1, n + 1), rng.sample(pairs, m))
