"""Canonical labeling by iterative refinement with individualization.

Intended for the toolkit's working range (graphs up to ~12 vertices); the
search is exact, so two graphs get the same canonical bytes iff they are
isomorphic.
"""
from __future__ import annotations

from collections import Counter
from functools import lru_cache

from .graphs import LabeledGraph


def _refine(g: LabeledGraph, partition: list[list[int]]) -> list[list[int]]:
    """Split cells by neighbour counts per cell until stable.

    The ordered partition is isomorphism-invariant: cells are only ever
    split, and the sub-cells are appended in sorted key order.
    """
    while True:
        index = {}
        for ci, cell in enumerate(partition):
            for v in cell:
                index[v] = ci
        new: list[list[int]] = []
        changed = False
        for cell in partition:
            if len(cell) == 1:
                new.append(cell)
                continue
            buckets: dict[tuple, list[int]] = {}
            for v in cell:
                key = tuple(sorted(Counter(index[u] for u in g.neighbours(v)).items()))
                buckets.setdefault(key, []).append(v)
            if len(buckets) == 1:
                new.append(cell)
            else:
                changed = True
                for key in sorted(buckets):
                    new.append(buckets[key])
        partition = new
        if not changed:
            return partition


def _encode(g: LabeledGraph, order: list[int]) -> bytes:
    pos = {v: i + 1 for i, v in enumerate(order)}
    edges = sorted((pos[u], pos[v]) if pos[u] < pos[v] else (pos[v], pos[u])
                   for (u, v) in g.edges)
    return repr((len(order), edges)).encode()


def _search(g: LabeledGraph, partition: list[list[int]], best: list) -> None:
    partition = _refine(g, partition)
    target = None
    for i, cell in enumerate(partition):
        if len(cell) > 1:
            target = i
            break
    if target is None:
        order = [cell[0] for cell in partition]
        enc = _encode(g, order)
        if best[0] is None or enc < best[0]:
            best[0] = enc
            best[1] = order
        return
    cell = partition[target]
    for v in cell:
        rest = [u for u in cell if u != v]
        _search(g, partition[:target] + [[v], rest] + partition[target + 1:], best)


@lru_cache(maxsize=65536)
def _canonical(g: LabeledGraph) -> tuple[bytes, tuple[int, ...]]:
    if g.n == 0:
        return _encode(g, []), ()
    # seed the partition by degree; refinement does the rest
    by_degree: dict[int, list[int]] = {}
    for v in sorted(g.vertices):
        by_degree.setdefault(g.degree(v), []).append(v)
    partition = [by_degree[d] for d in sorted(by_degree)]
    best: list = [None, None]
    _search(g, partition, best)
    return best[0], tuple(best[1])


def canonical_form(g: LabeledGraph) -> tuple[bytes, dict[int, int]]:
    """Canonical bytes plus the relabeling map onto canonical labels 1..n."""
    enc, order = _canonical(g)
    return enc, {v: i + 1 for i, v in enumerate(order)}


def canonical_key(g: LabeledGraph) -> bytes:
    return _canonical(g)[0]


def canonical_graph(g: LabeledGraph) -> tuple[LabeledGraph, dict[int, int]]:
    """The canonical representative on labels 1..n and the witness map into it."""
    enc, witness = canonical_form(g)
    return g.relabel(witness), witness


def are_isomorphic(g: LabeledGraph, h: LabeledGraph) -> bool:
    return canonical_key(g) == canonical_key(h)


def isomorphism(g: LabeledGraph, h: LabeledGraph) -> dict[int, int] | None:
    """A vertex bijection g -> h, or None if the graphs are not isomorphic."""
    kg, wg = canonical_form(g)
    kh, wh = canonical_form(h)
    if kg != kh:
        return None
    inv_h = {i: v for v, i in wh.items()}
    return {v: inv_h[i] for v, i in wg.items()}
