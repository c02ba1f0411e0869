"""Exact tools for 2D rigidity circuits: sparsity and connectivity
oracles, combinatorial resultant decompositions, CR-trees, and circuit
polynomials via Sylvester resultants."""

from .graphs import GraphError, LabeledGraph, edge, load_graph, parse_graph_text
from .sparsity import (
    fundamental_circuit,
    is_circuit,
    is_laman,
    is_sparse23,
    sparsity_class,
)
from .connectivity import (
    SeparatingPair,
    admissible_pairs,
    connectivity_class,
    separating_pairs,
    two_split,
    two_sum,
)
from .canon import are_isomorphic, canonical_form, canonical_graph, canonical_key, isomorphism
from .decompose import (
    Crd,
    combinatorial_resultant,
    crd_2splits,
    crd_3connected,
    crd_naive,
    decompositions,
)
from . import fixtures

__all__ = [
    "GraphError",
    "LabeledGraph",
    "edge",
    "load_graph",
    "parse_graph_text",
    "fundamental_circuit",
    "is_circuit",
    "is_laman",
    "is_sparse23",
    "sparsity_class",
    "SeparatingPair",
    "admissible_pairs",
    "connectivity_class",
    "separating_pairs",
    "two_split",
    "two_sum",
    "are_isomorphic",
    "canonical_form",
    "canonical_graph",
    "canonical_key",
    "isomorphism",
    "Crd",
    "combinatorial_resultant",
    "crd_2splits",
    "crd_3connected",
    "crd_naive",
    "decompositions",
    "fixtures",
]
