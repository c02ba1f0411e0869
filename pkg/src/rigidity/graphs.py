"""Labeled graphs with value semantics, plus the text and JSON graph formats.

Vertices are positive integer labels and are never compacted: subgraphs and
decomposition pieces keep the labels of the graph they came from.  Edges are
stored as (u, v) tuples with u < v.
"""
from __future__ import annotations

import json
from typing import Iterable, Iterator


class GraphError(ValueError):
    """Raised for malformed graphs and violated graph preconditions."""


def edge(u: int, v: int) -> tuple[int, int]:
    """Normalize an edge to (min, max) order; loops are rejected."""
    if u == v:
        raise GraphError(f"loop edge at vertex {u}")
    return (u, v) if u < v else (v, u)


class LabeledGraph:
    """An immutable simple graph on positive integer labels."""

    __slots__ = ("vertices", "edges", "_adj")

    def __init__(self, vertices: Iterable[int], edges: Iterable[tuple[int, int]]):
        vs = frozenset(vertices)
        for v in vs:
            if not isinstance(v, int) or isinstance(v, bool) or v < 1:
                raise GraphError(f"vertex labels must be positive integers, got {v!r}")
        es = frozenset(edge(u, v) for (u, v) in edges)
        adj: dict[int, set[int]] = {v: set() for v in vs}
        for (u, v) in es:
            if u not in adj or v not in adj:
                raise GraphError(f"edge ({u}, {v}) has an endpoint outside the vertex set")
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "edges", es)
        object.__setattr__(self, "_adj", {v: frozenset(ns) for v, ns in adj.items()})

    def __setattr__(self, name, value):
        raise AttributeError("LabeledGraph is immutable")

    # -- basic queries -------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbours(self, v: int) -> frozenset[int]:
        if v not in self._adj:
            raise GraphError(f"unknown vertex {v}")
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self.neighbours(v))

    def has_edge(self, u: int, v: int) -> bool:
        return edge(u, v) in self.edges

    def non_edges(self) -> list[tuple[int, int]]:
        """All vertex pairs that are not edges, in sorted order."""
        vs = sorted(self.vertices)
        return [
            (u, v)
            for i, u in enumerate(vs)
            for v in vs[i + 1:]
            if (u, v) not in self.edges
        ]

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    # -- derived graphs ------------------------------------------------

    def add_edge(self, u: int, v: int) -> "LabeledGraph":
        e = edge(u, v)
        if u not in self.vertices or v not in self.vertices:
            raise GraphError(f"edge ({u}, {v}) has an endpoint outside the vertex set")
        if e in self.edges:
            raise GraphError(f"edge {e} already present")
        return LabeledGraph(self.vertices, self.edges | {e})

    def delete_edge(self, u: int, v: int) -> "LabeledGraph":
        e = edge(u, v)
        if e not in self.edges:
            raise GraphError(f"edge {e} not present")
        return LabeledGraph(self.vertices, self.edges - {e})

    def delete_vertex(self, v: int) -> "LabeledGraph":
        if v not in self.vertices:
            raise GraphError(f"unknown vertex {v}")
        return LabeledGraph(
            self.vertices - {v},
            (e for e in self.edges if v not in e),
        )

    def induced(self, subset: Iterable[int]) -> "LabeledGraph":
        """Subgraph induced on `subset`, which must be contained in the vertex set."""
        sub = frozenset(subset)
        extra = sub - self.vertices
        if extra:
            raise GraphError(f"unknown vertices {sorted(extra)}")
        return LabeledGraph(sub, (e for e in self.edges if e[0] in sub and e[1] in sub))

    def relabel(self, mapping: dict[int, int]) -> "LabeledGraph":
        """Apply an injective vertex relabeling; labels not in `mapping` are kept."""
        img = [mapping.get(v, v) for v in self.vertices]
        if len(set(img)) != len(img):
            raise GraphError("relabeling is not injective on this graph")
        return LabeledGraph(
            img,
            ((mapping.get(u, u), mapping.get(v, v)) for (u, v) in self.edges),
        )

    def union(self, other: "LabeledGraph") -> "LabeledGraph":
        return LabeledGraph(self.vertices | other.vertices, self.edges | other.edges)

    # -- value semantics -----------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.vertices, self.edges))

    def __repr__(self) -> str:
        return f"LabeledGraph({sorted(self.vertices)}, {self.sorted_edges()})"


def complete_graph(labels: Iterable[int]) -> LabeledGraph:
    vs = sorted(set(labels))
    return LabeledGraph(vs, [(u, v) for i, u in enumerate(vs) for v in vs[i + 1:]])


def wheel_graph(hub: int, rim: list[int]) -> LabeledGraph:
    """Wheel: `hub` joined to every rim vertex, rim joined in a cycle."""
    if len(rim) < 3 or hub in rim or len(set(rim)) != len(rim):
        raise GraphError("wheel needs a hub and at least 3 distinct rim vertices")
    edges = [edge(hub, r) for r in rim]
    edges += [edge(rim[i], rim[(i + 1) % len(rim)]) for i in range(len(rim))]
    return LabeledGraph([hub, *rim], edges)


# -- text format -------------------------------------------------------
#
#   # comment
#   n 4
#   1 2
#   1 3
#   ...
#
# The first non-comment line declares the vertex count; every following
# line is one edge with u < v.  The vertex set is the set of labels used
# by the edges and must have exactly the declared size.

def parse_graph_text(text: str) -> LabeledGraph:
    declared = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if declared is None:
            if len(parts) != 2 or parts[0] != "n":
                raise GraphError(f"line {lineno}: expected 'n <count>', got {raw!r}")
            try:
                declared = int(parts[1])
            except ValueError:
                raise GraphError(f"line {lineno}: vertex count is not an integer") from None
            if declared < 1:
                raise GraphError(f"line {lineno}: vertex count must be positive")
            continue
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected 'u v', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphError(f"line {lineno}: edge endpoints are not integers") from None
        if u == v:
            raise GraphError(f"line {lineno}: loop edge at vertex {u}")
        if u > v:
            raise GraphError(f"line {lineno}: edge must be written with u < v")
        if (u, v) in seen:
            raise GraphError(f"line {lineno}: duplicate edge ({u}, {v})")
        seen.add((u, v))
        edges.append((u, v))
    if declared is None:
        raise GraphError("missing 'n <count>' header line")
    vertices = {u for e in edges for u in e}
    if len(vertices) != declared:
        raise GraphError(
            f"header declares {declared} vertices but the edges span {len(vertices)}"
        )
    return LabeledGraph(vertices, edges)


def graph_to_text(g: LabeledGraph) -> str:
    isolated = [v for v in g.vertices if g.degree(v) == 0]
    if isolated:
        raise GraphError(
            f"text format cannot express isolated vertices {sorted(isolated)}; use JSON"
        )
    lines = [f"n {g.n}"]
    lines += [f"{u} {v}" for (u, v) in g.sorted_edges()]
    return "\n".join(lines) + "\n"


# -- JSON format -------------------------------------------------------

def graph_from_json(obj) -> LabeledGraph:
    if isinstance(obj, str):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or "vertices" not in obj or "edges" not in obj:
        raise GraphError("graph JSON must be an object with 'vertices' and 'edges'")
    vertices = obj["vertices"]
    edges = obj["edges"]
    if len(set(vertices)) != len(vertices):
        raise GraphError("duplicate vertices in graph JSON")
    seen = set()
    pairs = []
    for e in edges:
        if not isinstance(e, (list, tuple)) or len(e) != 2:
            raise GraphError(f"bad edge entry {e!r}")
        u, v = e
        if u == v:
            raise GraphError(f"loop edge at vertex {u}")
        if u > v:
            raise GraphError(f"edge [{u}, {v}] must be written with u < v")
        if (u, v) in seen:
            raise GraphError(f"duplicate edge [{u}, {v}]")
        seen.add((u, v))
        pairs.append((u, v))
    return LabeledGraph(vertices, pairs)


def graph_to_json(g: LabeledGraph) -> dict:
    return {
        "vertices": sorted(g.vertices),
        "edges": [list(e) for e in g.sorted_edges()],
    }


def load_graph(path: str) -> LabeledGraph:
    """Load a graph from a .json or text file by extension."""
    with open(path, "r", encoding="utf-8") as fh:
        body = fh.read()
    if path.endswith(".json"):
        return graph_from_json(body)
    return parse_graph_text(body)


def iter_edges(g: LabeledGraph) -> Iterator[tuple[int, int]]:
    return iter(g.sorted_edges())
