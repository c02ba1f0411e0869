"""Vertex connectivity, separating pairs, 2-splits and 2-sums of circuits."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .graphs import GraphError, LabeledGraph, edge
from .sparsity import is_circuit

DISCONNECTED = "disconnected"
ONE_CONNECTED = "1-connected"
TWO_CONNECTED = "2-connected"
THREE_CONNECTED = "3-connected"


def _components(vertices: frozenset[int], adj) -> list[tuple[int, ...]]:
    seen: set[int] = set()
    comps = []
    for start in sorted(vertices):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        seen.add(start)
        while stack:
            a = stack.pop()
            for b in adj(a):
                if b in vertices and b not in seen:
                    seen.add(b)
                    comp.add(b)
                    stack.append(b)
        comps.append(tuple(sorted(comp)))
    return comps


def components(g: LabeledGraph) -> list[tuple[int, ...]]:
    """Connected components, each sorted, ordered by smallest vertex."""
    return _components(g.vertices, g.neighbours)


def is_connected(g: LabeledGraph) -> bool:
    if g.n == 0:
        raise GraphError("connectivity needs at least one vertex")
    return len(components(g)) == 1


@dataclass(frozen=True)
class SeparatingPair:
    """A 2-cut {u, v} with the components it leaves behind."""

    u: int
    v: int
    components: tuple[tuple[int, ...], ...]
    adjacent: bool

    def __iter__(self):
        return iter((self.u, self.v))


def _split_components(g: LabeledGraph, u: int, v: int) -> list[tuple[int, ...]]:
    rest = g.vertices - {u, v}
    return _components(frozenset(rest), g.neighbours)


def separating_pairs(g: LabeledGraph) -> list[SeparatingPair]:
    """All vertex pairs whose removal disconnects the rest, in sorted order."""
    if g.n < 4:
        raise GraphError("separating pairs need at least 4 vertices")
    if not is_connected(g):
        raise GraphError("separating pairs are only defined for connected graphs")
    out = []
    for u, v in combinations(sorted(g.vertices), 2):
        comps = _split_components(g, u, v)
        if len(comps) > 1:
            out.append(SeparatingPair(u, v, tuple(comps), g.has_edge(u, v)))
    return out


def has_cutvertex(g: LabeledGraph) -> bool:
    for w in sorted(g.vertices):
        if len(_components(frozenset(g.vertices - {w}), g.neighbours)) > 1:
            return True
    return False


def connectivity_class(g: LabeledGraph) -> str:
    """One of disconnected / 1-connected / 2-connected / 3-connected.

    The label is the exact vertex connectivity bucket: k-connected here
    means connectivity exactly k for k < 3 and at least 3 for the last.
    """
    if g.n < 2:
        raise GraphError("connectivity classes need at least 2 vertices")
    if not is_connected(g):
        return DISCONNECTED
    if g.n == 2:
        return ONE_CONNECTED
    if has_cutvertex(g):
        return ONE_CONNECTED
    if g.n == 3:
        return TWO_CONNECTED
    if separating_pairs(g):
        return TWO_CONNECTED
    return THREE_CONNECTED


def two_sum(g1: LabeledGraph, g2: LabeledGraph, e: tuple[int, int]) -> LabeledGraph:
    """Glue two circuits along the shared edge e and delete it."""
    u, v = edge(*e)
    if not g1.has_edge(u, v) or not g2.has_edge(u, v):
        raise GraphError(f"({u}, {v}) must be an edge of both parts")
    if g1.vertices & g2.vertices != frozenset((u, v)):
        raise GraphError("parts of a 2-sum may share only the endpoints of e")
    if not is_circuit(g1) or not is_circuit(g2):
        raise GraphError("both parts of a 2-sum must be circuits")
    return g1.union(g2).delete_edge(u, v)


def two_split(
    g: LabeledGraph, pair: SeparatingPair, side: tuple[int, ...]
) -> tuple[LabeledGraph, LabeledGraph, tuple[int, int]]:
    """Split a circuit at a non-adjacent separating pair.

    `side` lists the indices of the components kept in the first part; the
    sum side gets the rest.  Both parts receive the new edge uv.  Raises if
    either part fails to be a circuit.
    """
    u, v = pair.u, pair.v
    if not is_circuit(g):
        raise GraphError("2-splits are only defined for circuits")
    if g.has_edge(u, v):
        raise GraphError("cannot split at an adjacent pair")
    idx = sorted(set(side))
    if not idx or len(idx) >= len(pair.components):
        raise GraphError("side must pick a proper nonempty subset of components")
    if idx[0] < 0 or idx[-1] >= len(pair.components):
        raise GraphError("component index out of range")
    keep = {u, v}
    for i in idx:
        keep.update(pair.components[i])
    other = set(g.vertices) - keep | {u, v}
    h1 = g.induced(keep).add_edge(u, v)
    h2 = g.induced(other).add_edge(u, v)
    for h in (h1, h2):
        if not is_circuit(h):
            raise GraphError("2-split side is not a circuit")
    return h1, h2, (u, v)


def admissible_pairs(g: LabeledGraph) -> list[tuple[int, tuple[int, int]]]:
    """Vertex-edge pairs (v, e) with v of degree 3, e a non-edge between two
    neighbours of v, and g - v + e a 3-connected circuit."""
    if not is_circuit(g):
        raise GraphError("admissible pairs are only defined for circuits")
    if connectivity_class(g) != THREE_CONNECTED:
        raise GraphError("admissible pairs are only defined for 3-connected circuits")
    out = []
    for v in sorted(g.vertices):
        if g.degree(v) != 3:
            continue
        nb = sorted(g.neighbours(v))
        for a, b in combinations(nb, 2):
            if g.has_edge(a, b):
                continue
            h = g.delete_vertex(v).add_edge(a, b)
            if is_circuit(h) and connectivity_class(h) == THREE_CONNECTED:
                out.append((v, (a, b)))
    return out
