"""Named example graphs.

Each fixed graph carries the labeling its documented decompositions refer
to (separating pairs, shared triangles).  Where a drawing leaves freedom
the docstring records the choice that was frozen.
"""
from __future__ import annotations

from .graphs import LabeledGraph, complete_graph, edge, wheel_graph


def _g(edges) -> LabeledGraph:
    es = [edge(u, v) for u, v in edges]
    vs = {v for e in es for v in e}
    return LabeledGraph(vs, es)


def k4() -> LabeledGraph:
    """Complete graph on {1,2,3,4}: the smallest circuit."""
    return complete_graph([1, 2, 3, 4])


def wheel(rim: int = 4) -> LabeledGraph:
    """Wheel with `rim` rim vertices 1..rim and hub rim+1.

    wheel(4) and wheel(5) are the 5- and 6-vertex 3-connected circuits
    used throughout; wheel(3) degenerates to K4.
    """
    if rim < 3:
        raise ValueError("a wheel needs at least 3 rim vertices")
    return wheel_graph(rim + 1, list(range(1, rim + 1)))


def w4() -> LabeledGraph:
    return wheel(4)


def w5() -> LabeledGraph:
    return wheel(5)


def prism() -> LabeledGraph:
    """Triangular prism: a 6-vertex Laman graph (two triangles + matching)."""
    return _g([(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6), (1, 4), (2, 5), (3, 6)])


def double_banana() -> LabeledGraph:
    """The 6-vertex 2-sum of K4 on {1,2,3,5} and K4 on {2,4,5,6} over the
    hinge {2,5}; the smallest 2-connected circuit.

    With this labeling the decomposition into two 4-rim wheels shares the
    double triangle on 2,3,5,4 (triangles 234 and 345 glued along the
    elimination edge {3,4}).  The mirror labeling that swaps 3 and 4 would
    satisfy the same constraints; this one is frozen.
    """
    return _g(
        [(1, 2), (1, 3), (1, 5), (2, 3), (3, 5),
         (2, 4), (2, 6), (4, 5), (4, 6), (5, 6)]
    )


def k4_chain(parts: int) -> LabeledGraph:
    """Chain of `parts` K4 blocks, consecutive blocks 2-summed.

    Block i sits on {2i-1, 2i, 2i+1, 2i+2}; the shared hinge {2i+1, 2i+2}
    is removed.  parts=1 is K4, parts=2 is a double banana relabeling.
    """
    if parts < 1:
        raise ValueError("need at least one block")
    edges = set()
    for i in range(1, parts + 1):
        a = 2 * i - 1
        block = [a, a + 1, a + 2, a + 3]
        for x in range(4):
            for y in range(x + 1, 4):
                edges.add(edge(block[x], block[y]))
    for i in range(1, parts):
        edges.discard(edge(2 * i + 1, 2 * i + 2))
    return _g(sorted(edges))


def spoke_glued_7() -> LabeledGraph:
    """7-vertex circuit: a 4-rim wheel 2-summed with a K4 along a spoke.

    Wheel hub 5 with rim cycle 1-4-3-6; K4 on {1,2,5,7} glued along the
    spoke {1,5}, which is removed.  The decomposition with the triangle
    {4,5,6} in common eliminates the non-edge {4,6}; the unique 2-split is
    at the pair {1,5}.
    """
    return _g(
        [(1, 4), (3, 4), (3, 6), (1, 6), (4, 5), (3, 5), (5, 6),
         (2, 5), (5, 7), (1, 2), (1, 7), (2, 7)]
    )


def rim_glued_7() -> LabeledGraph:
    """7-vertex circuit: a 4-rim wheel 2-summed with a K4 along a rim edge.

    Wheel hub 5 with rim cycle 4-3-6-7; K4 on {1,2,3,4} glued along the
    rim edge {3,4}, which is removed.  The decomposition with the triangle
    {4,5,6} in common eliminates the non-edge {4,6}; the unique 2-split is
    at the pair {3,4}.
    """
    return _g(
        [(4, 5), (3, 5), (5, 6), (5, 7), (3, 6), (6, 7), (4, 7),
         (1, 2), (1, 3), (1, 4), (2, 3), (2, 4)]
    )


def side_glued_8() -> LabeledGraph:
    """8-vertex circuit: K4 on {1,2,3,4} 2-summed onto a double banana
    along an edge incident to its hinge.

    The banana part lives on {1,4,5,6,7,8} with hinge {4,5}; the glue edge
    {1,4} is removed.  The decomposition with the double triangle on
    4,6,7,5 in common (quadrilateral 4-6-5-7 plus the elimination edge
    {6,7}) splits off the wheel with hub 7 and rim 4-6-5-8.  Separating
    pairs: {1,4} and {4,5}.
    """
    return _g(
        [(4, 6), (1, 6), (5, 6), (1, 5), (4, 7), (4, 8), (5, 7),
         (7, 8), (5, 8), (2, 4), (3, 4), (1, 2), (1, 3), (2, 3)]
    )


def chain_glued_8() -> LabeledGraph:
    """8-vertex circuit: chain of three K4 blocks.

    Blocks {1,2,3,6}, {1,4,5,6} and {4,5,7,8} 2-summed over the hinges
    {1,6} and {4,5}.  The decomposition with the double triangle on
    4,6,7,5 in common (quadrilateral 4-6-5-7 plus the elimination edge
    {6,7}) splits off the wheel with hub 7 and rim 4-6-5-8.  Separating
    pairs: {1,6} and {4,5}.
    """
    return _g(
        [(4, 6), (5, 6), (1, 4), (1, 5), (4, 7), (4, 8), (5, 7),
         (7, 8), (5, 8), (2, 6), (3, 6), (1, 2), (1, 3), (2, 3)]
    )


def chain_10() -> LabeledGraph:
    """10-vertex circuit: chain of four K4 blocks with separating pairs
    {2,9}, {3,8} and {4,7}.

    Blocks {1,2,9,10}, {2,3,8,9}, {3,4,7,8} and {4,5,6,7} 2-summed over
    those pairs.  The splits at {2,9} and {4,7} give isomorphic
    decompositions (the graph has an automorphism exchanging them); the
    split at {3,8} gives two 6-vertex parts, each a double banana
    relabeling.
    """
    return _g(
        [(1, 2), (1, 9), (1, 10), (2, 10), (9, 10),
         (2, 3), (2, 8), (3, 9), (8, 9),
         (3, 4), (3, 7), (4, 8), (7, 8),
         (4, 5), (4, 6), (5, 7), (6, 7), (5, 6)]
    )


NAMED_GRAPHS = {
    "k4": k4,
    "w4": w4,
    "w5": w5,
    "prism": prism,
    "double-banana": double_banana,
    "spoke-glued-7": spoke_glued_7,
    "rim-glued-7": rim_glued_7,
    "side-glued-8": side_glued_8,
    "chain-glued-8": chain_glued_8,
    "chain-10": chain_10,
}


def named_graph(name: str) -> LabeledGraph:
    """Look up a bundled graph by its registry name."""
    try:
        return NAMED_GRAPHS[name]()
    except KeyError:
        raise KeyError(
            f"unknown graph {name!r}; available: {', '.join(sorted(NAMED_GRAPHS))}"
        ) from None
