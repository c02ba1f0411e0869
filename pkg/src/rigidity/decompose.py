"""Combinatorial resultants and decompositions of rigidity circuits.

A combinatorial resultant of two graphs sharing an edge e is their union
with e removed.  A decomposition of a circuit G is a triple (g1, g2, e) of
two smaller circuits whose combinatorial resultant is G; these are the
objects a CR-tree is built from.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .canon import canonical_form, canonical_key
from .connectivity import (
    THREE_CONNECTED,
    TWO_CONNECTED,
    admissible_pairs,
    connectivity_class,
    separating_pairs,
    two_split,
)
from .graphs import GraphError, LabeledGraph, edge
from .sparsity import fundamental_circuit, is_circuit, is_laman

KIND_2SPLIT = "2-split"
KIND_3CONNECTED = "3-connected-step"
KIND_GENERIC = "generic"


def combinatorial_resultant(
    g1: LabeledGraph, g2: LabeledGraph, e: tuple[int, int]
) -> LabeledGraph:
    """Union of the two graphs with the shared edge e dropped."""
    u, v = edge(*e)
    if not g1.has_edge(u, v) or not g2.has_edge(u, v):
        raise GraphError(f"({u}, {v}) must be an edge of both operands")
    return g1.union(g2).delete_edge(u, v)


@dataclass(frozen=True)
class Crd:
    """One decomposition step: parent = CR(g1, g2, e)."""

    g1: LabeledGraph
    g2: LabeledGraph
    edge: tuple[int, int]
    kind: str

    def parent(self) -> LabeledGraph:
        return combinatorial_resultant(self.g1, self.g2, self.edge)

    def to_json(self) -> dict:
        from .graphs import graph_to_json

        return {
            "g1": graph_to_json(self.g1),
            "g2": graph_to_json(self.g2),
            "edge": list(self.edge),
            "kind": self.kind,
        }


def crd_from_json(obj: dict) -> Crd:
    from .graphs import graph_from_json

    kind = obj["kind"]
    if kind not in (KIND_2SPLIT, KIND_3CONNECTED, KIND_GENERIC):
        raise GraphError(f"unknown decomposition kind {kind!r}")
    e = obj["edge"]
    return Crd(graph_from_json(obj["g1"]), graph_from_json(obj["g2"]), edge(*e), kind)


def _sort_key(g: LabeledGraph):
    return (g.n, g.m, tuple(g.sorted_edges()), tuple(sorted(g.vertices)))


def _ordered(g1: LabeledGraph, g2: LabeledGraph) -> tuple[LabeledGraph, LabeledGraph]:
    """Larger part first; ties broken on the edge lists."""
    if g1.n != g2.n:
        return (g1, g2) if g1.n > g2.n else (g2, g1)
    return (g1, g2) if _sort_key(g1) <= _sort_key(g2) else (g2, g1)


def _make_crd(g1: LabeledGraph, g2: LabeledGraph, e: tuple[int, int], kind: str) -> Crd:
    a, b = _ordered(g1, g2)
    return Crd(a, b, edge(*e), kind)


def crd_2splits(g: LabeledGraph) -> list[Crd]:
    """All 2-split decompositions of a 2-connected circuit."""
    if not is_circuit(g):
        raise GraphError("2-split decompositions need a circuit")
    if connectivity_class(g) != TWO_CONNECTED:
        raise GraphError("2-split decompositions need a 2-connected circuit")
    out = []
    for pair in separating_pairs(g):
        k = len(pair.components)
        # unordered bipartitions of the components into two nonempty sides
        for bits in range(1, 1 << (k - 1)):
            side = tuple(i for i in range(k) if bits >> i & 1)
            h1, h2, e = two_split(g, pair, side)
            out.append(_make_crd(h1, h2, e, KIND_2SPLIT))
    return _dedup(out)


def crd_3connected(g: LabeledGraph) -> list[Crd]:
    """Decompositions of a 3-connected circuit that drop one vertex.

    For an admissible pair (v, e) the first part is g - v + e.  The second
    part is the fundamental circuit of e in g - w for a degree-3 vertex w
    not adjacent to v; the pair is kept only when the combinatorial
    resultant actually restores g.
    """
    if not is_circuit(g):
        raise GraphError("3-connected decompositions need a circuit")
    if connectivity_class(g) != THREE_CONNECTED:
        raise GraphError("3-connected decompositions need a 3-connected circuit")
    out = []
    for v, e in admissible_pairs(g):
        a, b = e
        h1 = g.delete_vertex(v).add_edge(a, b)
        for w in sorted(g.vertices):
            if w == v or w in (a, b) or g.degree(w) != 3:
                continue
            if g.has_edge(v, w):
                continue
            base = g.delete_vertex(w)
            if not is_laman(base):
                continue
            h2 = fundamental_circuit(base, e)
            if v not in h2.vertices:
                continue
            if combinatorial_resultant(h1, h2, e) != g:
                continue
            out.append(Crd(h1, h2, edge(a, b), KIND_3CONNECTED))
    return _dedup(out)


def crd_naive(g: LabeledGraph) -> list[Crd]:
    """All decompositions of a circuit into two smaller circuits.

    Exhaustive over the shape every such decomposition must have: a common
    vertex set V' inducing 2|V'| - 4 edges, a non-edge e inside V' that
    completes the induced part to a Laman graph, and a bipartition of the
    remaining vertices; each side keeps V', its own block, and e.
    """
    if not is_circuit(g):
        raise GraphError("decompositions need a circuit")
    verts = sorted(g.vertices)
    n = g.n
    out = []
    for size in range(2, n - 1):
        for common in combinations(verts, size):
            shared = g.induced(common)
            if shared.m != 2 * size - 4:
                continue
            rest = sorted(g.vertices - set(common))
            inner_non_edges = [
                (a, b)
                for a, b in combinations(common, 2)
                if not g.has_edge(a, b)
            ]
            for a, b in inner_non_edges:
                if not is_laman(shared.add_edge(a, b)):
                    continue
                anchor, free = rest[0], rest[1:]
                for bits in range(0, 1 << len(free)):
                    blockA = {anchor, *(w for i, w in enumerate(free) if bits >> i & 1)}
                    blockB = set(rest) - blockA
                    if not blockB:
                        continue
                    n1 = size + len(blockA)
                    n2 = size + len(blockB)
                    if n1 < 4 or n2 < 4 or n1 >= n or n2 >= n:
                        continue
                    s1 = g.induced(set(common) | blockA)
                    if s1.m != 2 * n1 - 3:
                        continue
                    s2 = g.induced(set(common) | blockB)
                    if s2.m != 2 * n2 - 3:
                        continue
                    c1 = s1.add_edge(a, b)
                    c2 = s2.add_edge(a, b)
                    if not is_circuit(c1) or not is_circuit(c2):
                        continue
                    if combinatorial_resultant(c1, c2, (a, b)) != g:
                        continue
                    out.append(_make_crd(c1, c2, (a, b), KIND_GENERIC))
    return _dedup(out)


def _dedup(crds: list[Crd]) -> list[Crd]:
    seen = set()
    out = []
    for c in crds:
        key = (tuple(c.g1.sorted_edges()), tuple(c.g2.sorted_edges()), c.edge)
        if key in seen:
            continue
        seen.add(key)
        out.append(c)
    out.sort(key=lambda c: (c.edge, _sort_key(c.g1), _sort_key(c.g2)))
    return out


def decompositions(g: LabeledGraph, mode: str = "auto") -> list[Crd]:
    """Dispatch on connectivity: 2-splits when they exist, vertex drops for
    3-connected circuits, or the exhaustive search with mode="naive"."""
    if mode == "naive":
        return crd_naive(g)
    if mode not in ("auto", "split"):
        raise GraphError(f"unknown decomposition mode {mode!r}")
    cls = connectivity_class(g)
    if cls == TWO_CONNECTED:
        return crd_2splits(g)
    if cls == THREE_CONNECTED:
        if mode == "split":
            raise GraphError("the circuit is 3-connected: no 2-split exists")
        return crd_3connected(g)
    raise GraphError("circuits are always 2- or 3-connected; got " + cls)


def crd_with_common_size(g: LabeledGraph, size: int) -> Crd:
    """First exhaustive-search decomposition whose parts share `size` vertices.

    size=3 picks a common-triangle strategy, size=4 a double-triangle one
    (the shared part of a valid decomposition on k vertices is always the
    near-complete graph on 2k-3 edges, so the size pins the shape).
    """
    for c in crd_naive(g):
        if len(c.g1.vertices & c.g2.vertices) == size:
            return c
    raise GraphError(f"no decomposition with a {size}-vertex common part")


def iso_class_key(crd: Crd) -> tuple:
    """Key identifying a decomposition up to isomorphism of the parts and of
    the parent with the eliminated pair marked."""
    parts = tuple(sorted((canonical_key(crd.g1), canonical_key(crd.g2))))
    parent = crd.parent()
    marked = parent.add_edge(*crd.edge)
    key, relab = canonical_form(marked)
    e_img = tuple(sorted((relab[crd.edge[0]], relab[crd.edge[1]])))
    return (parts, key, e_img)
