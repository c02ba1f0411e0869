"""(2,3)-sparsity decisions and fundamental circuits via the pebble game.

The game keeps a partial orientation of the inserted edges.  Every vertex
starts with 2 pebbles and inserting an edge consumes one pebble from an
endpoint, which requires 4 pebbles present on the two endpoints combined.
Pebbles are fetched by reversing a directed path to a vertex that still
holds one.  A graph is (2,3)-sparse exactly when every edge can be
inserted, and when an insertion fails the set of vertices reachable from
the endpoints spans the unique violating tight subgraph.
"""
from __future__ import annotations

from .graphs import GraphError, LabeledGraph, edge

SPARSE = "sparse"
LAMAN = "laman"
LAMAN_PLUS_ONE = "laman-plus-one"
SPANNING_CIRCUIT = "spanning-circuit"
DEPENDENT = "dependent"
OTHER = "other"


class PebbleGame:
    """The (2,3) pebble game on a fixed vertex set."""

    def __init__(self, vertices):
        self.pebbles = {v: 2 for v in vertices}
        self.out = {v: set() for v in vertices}

    def _gather(self, x: int, protected: frozenset[int]) -> bool:
        """Pull one pebble onto x by reversing a directed path, if possible.

        Pebbles sitting on `protected` vertices are never taken.
        """
        parent: dict[int, int | None] = {x: None}
        stack = [x]
        found = None
        while stack:
            a = stack.pop()
            for b in self.out[a]:
                if b in parent:
                    continue
                parent[b] = a
                if self.pebbles[b] > 0 and b not in protected:
                    found = b
                    stack.clear()
                    break
                stack.append(b)
        if found is None:
            return False
        path = [found]
        while parent[path[-1]] is not None:
            path.append(parent[path[-1]])
        path.reverse()  # x .. found
        for a, b in zip(path, path[1:]):
            self.out[a].discard(b)
            self.out[b].add(a)
        self.pebbles[found] -= 1
        self.pebbles[x] += 1
        return True

    def try_insert(self, u: int, v: int) -> bool:
        """Insert edge uv if 4 pebbles can be brought onto {u, v}."""
        protected = frozenset((u, v))
        while self.pebbles[u] + self.pebbles[v] < 4:
            if self.pebbles[u] < 2 and self._gather(u, protected):
                continue
            if self.pebbles[v] < 2 and self._gather(v, protected):
                continue
            return False
        self.pebbles[u] -= 1
        self.out[u].add(v)
        return True

    def reachable(self, u: int, v: int) -> frozenset[int]:
        """Vertices reachable from {u, v} along the current orientation."""
        seen = {u, v}
        stack = [u, v]
        while stack:
            a = stack.pop()
            for b in self.out[a]:
                if b not in seen:
                    seen.add(b)
                    stack.append(b)
        return frozenset(seen)


def _run_game(g: LabeledGraph) -> tuple[PebbleGame, list[tuple[int, int]]]:
    game = PebbleGame(g.vertices)
    rejected = []
    for (u, v) in g.sorted_edges():
        if not game.try_insert(u, v):
            rejected.append((u, v))
    return game, rejected


def is_sparse23(g: LabeledGraph) -> bool:
    """Every subset of k vertices spans at most 2k-3 edges."""
    if g.n < 2:
        raise GraphError("sparsity needs at least 2 vertices")
    _, rejected = _run_game(g)
    return not rejected


def is_laman(g: LabeledGraph) -> bool:
    """(2,3)-sparse with exactly 2n-3 edges: minimally rigid."""
    if g.n < 2:
        raise GraphError("sparsity needs at least 2 vertices")
    return g.m == 2 * g.n - 3 and is_sparse23(g)


def is_circuit(g: LabeledGraph) -> bool:
    """2n-2 edges with every proper subset sparse.

    One game run suffices: a circuit inserts its first 2n-3 edges (every
    proper subset is independent), rejects the last one, and the reachable
    region at rejection is the whole vertex set.
    """
    if g.n < 4:
        raise GraphError("a circuit needs at least 4 vertices")
    if g.m != 2 * g.n - 2:
        return False
    game = PebbleGame(g.vertices)
    edges = g.sorted_edges()
    for i, (u, v) in enumerate(edges):
        if not game.try_insert(u, v):
            return i == g.m - 1 and game.reachable(u, v) == g.vertices
    return False


def fundamental_circuit(g: LabeledGraph, e: tuple[int, int]) -> LabeledGraph:
    """The unique circuit in g + e through the non-edge e of a Laman graph g.

    Returned as the labeled subgraph it spans; the reachable region at the
    failed insertion is the minimal tight vertex set containing both
    endpoints, and the circuit is the induced subgraph on it plus e.
    """
    u, v = edge(*e)
    if u not in g.vertices or v not in g.vertices:
        raise GraphError(f"edge ({u}, {v}) has an endpoint outside the vertex set")
    if g.has_edge(u, v):
        raise GraphError(f"({u}, {v}) is already an edge")
    if not is_laman(g):
        raise GraphError("fundamental circuits are only defined over a Laman graph")
    game, rejected = _run_game(g)
    assert not rejected
    if game.try_insert(u, v):  # cannot happen over a Laman graph
        raise GraphError("insertion unexpectedly independent")
    region = game.reachable(u, v)
    return g.induced(region).add_edge(u, v)


def sparsity_class(g: LabeledGraph) -> str:
    """Classify: sparse / laman / laman-plus-one / spanning-circuit / dependent."""
    if g.n < 2:
        raise GraphError("sparsity needs at least 2 vertices")
    game = PebbleGame(g.vertices)
    rejected = []
    region = None
    for (u, v) in g.sorted_edges():
        if not game.try_insert(u, v):
            rejected.append((u, v))
            if len(rejected) == 1:
                region = game.reachable(u, v)
    if not rejected:
        return LAMAN if g.m == 2 * g.n - 3 else SPARSE
    if g.m == 2 * g.n - 2 and len(rejected) == 1:
        return SPANNING_CIRCUIT if region == g.vertices else LAMAN_PLUS_ONE
    return DEPENDENT
