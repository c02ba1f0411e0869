"""CR-trees and their truncated enumeration over a memoized circuit store.

A CR-tree is a rooted binary tree of circuits: the root is the target,
leaves are K4s, and every internal node is the combinatorial resultant
of its two children.  Enumeration works depth-first against a store that
keeps one C-node per isomorphism class of circuit and one B-node per
registered decomposition; a child isomorphic to an already-stored
circuit is pruned and marked truncated, so the stream yields truncated
trees that expand_tree can later complete from the store.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .canon import canonical_form, canonical_key
from .connectivity import THREE_CONNECTED, connectivity_class
from .decompose import (
    Crd,
    combinatorial_resultant,
    crd_2splits,
    crd_3connected,
    crd_naive,
)
from .graphs import GraphError, LabeledGraph, edge, graph_from_json, graph_to_json
from .sparsity import is_circuit

MODES = ("splits_only", "naive", "auto")


class StoreIncomplete(GraphError):
    """A truncated node's circuit has no stored decomposition."""


@dataclass
class CNode:
    index: int
    circuit: LabeledGraph  # canonical representative on labels 1..n
    iso_witness: dict  # first-encounter labels -> canonical labels
    decompositions: list = field(default_factory=list)  # registered BNodes
    _raw: list | None = None  # pending Crds on canonical labels


@dataclass
class BNode:
    index: int
    parent: int  # CNode indices
    left: int
    right: int
    edge: tuple  # in parent canonical labels
    left_relabel: dict  # child canonical labels -> parent canonical labels
    right_relabel: dict
    left_truncated: bool
    right_truncated: bool
    kind: str


def _node_crds(g: LabeledGraph, mode: str) -> list:
    # 3-connected circuits always decompose through admissible pairs;
    # the mode only selects the algorithm for 2-connected ones
    if connectivity_class(g) == THREE_CONNECTED:
        return crd_3connected(g)
    if mode == "naive":
        return crd_naive(g)
    return crd_2splits(g)


class Store:
    """Single-writer memo of circuits (C-nodes) and their decompositions."""

    def __init__(self, mode: str = "auto"):
        if mode not in MODES:
            raise GraphError(f"unknown mode {mode!r}; expected one of {MODES}")
        self.mode = mode
        self.cnodes: list[CNode] = []
        self.bnodes: list[BNode] = []
        self._by_key: dict[bytes, int] = {}

    def lookup(self, g: LabeledGraph) -> CNode | None:
        idx = self._by_key.get(canonical_key(g))
        return None if idx is None else self.cnodes[idx]

    def intern(self, g: LabeledGraph):
        """Return (CNode, witness: g labels -> canonical labels)."""
        key, wit = canonical_form(g)
        idx = self._by_key.get(key)
        if idx is not None:
            return self.cnodes[idx], wit
        node = CNode(len(self.cnodes), g.relabel(wit), dict(wit))
        self.cnodes.append(node)
        self._by_key[key] = node.index
        return node, wit

    def _register(self, cnode: CNode, crd: Crd) -> BNode:
        g1, g2 = crd.g1, crd.g2
        if g1.n == g2.n and canonical_key(g2) < canonical_key(g1):
            g1, g2 = g2, g1
        lkey, lwit = canonical_form(g1)
        left_seen = lkey in self._by_key
        lnode, _ = self.intern(g1)
        rkey, rwit = canonical_form(g2)
        right_seen = rkey in self._by_key
        rnode, _ = self.intern(g2)
        # Children already stored are pruned, except K4s, which stay as
        # leaves; an isomorphic sibling pair always truncates the right one.
        left_truncated = left_seen and g1.n > 4
        right_truncated = (rkey == lkey) or (right_seen and g2.n > 4)
        b = BNode(
            len(self.bnodes),
            cnode.index,
            lnode.index,
            rnode.index,
            crd.edge,
            {c: v for v, c in lwit.items()},
            {c: v for v, c in rwit.items()},
            left_truncated,
            right_truncated,
            crd.kind,
        )
        self.bnodes.append(b)
        cnode.decompositions.append(b)
        return b

    def ensure_bnode(self, cnode: CNode, i: int) -> BNode | None:
        """The i-th decomposition of cnode, registering it on first use."""
        if i < len(cnode.decompositions):
            return cnode.decompositions[i]
        if cnode._raw is None:
            cnode._raw = _node_crds(cnode.circuit, self.mode)
        while len(cnode.decompositions) <= i:
            nxt = len(cnode.decompositions)
            if nxt >= len(cnode._raw):
                return None
            self._register(cnode, cnode._raw[nxt])
        return cnode.decompositions[i]


@dataclass
class TreeNode:
    circuit: LabeledGraph
    crd: Crd | None
    left: "TreeNode | None"
    right: "TreeNode | None"
    truncated: bool = False

    @property
    def is_leaf(self) -> bool:
        return self.crd is None


@dataclass
class CrTree:
    root: TreeNode
    store: Store

    @property
    def root_circuit(self) -> LabeledGraph:
        return self.root.circuit

    def nodes(self) -> list:
        out = []

        def rec(n):
            out.append(n)
            if n.crd is not None:
                rec(n.left)
                rec(n.right)

        rec(self.root)
        return out

    def internal_nodes(self) -> list:
        return [n for n in self.nodes() if n.crd is not None]

    def leaves(self) -> list:
        return [n for n in self.nodes() if n.crd is None]

    def truncated_nodes(self) -> list:
        return [n for n in self.nodes() if n.truncated]

    def is_full(self) -> bool:
        return all(
            not n.truncated and (n.crd is not None or n.circuit.n == 4)
            for n in self.nodes()
        )

    def node_count(self) -> int:
        return len(self.nodes())


def _materialize(store: Store, cnode_idx: int, relabel: dict, embed: dict):
    """Child circuit in real labels: embed over parent labels after relabel."""
    mapping = {c: embed[p] for c, p in relabel.items()}
    return store.cnodes[cnode_idx].circuit.relabel(mapping)


def _alternatives(store: Store, g: LabeledGraph):
    """Depth-first stream of alternative subtrees rooted at g (real labels)."""
    if g.n == 4:
        yield TreeNode(g, None, None, None)
        return
    cnode, wit = store.intern(g)
    embed = {c: v for v, c in wit.items()}
    i = 0
    while True:
        b = store.ensure_bnode(cnode, i)
        if b is None:
            return
        i += 1
        lg = _materialize(store, b.left, b.left_relabel, embed)
        rg = _materialize(store, b.right, b.right_relabel, embed)
        e = edge(embed[b.edge[0]], embed[b.edge[1]])
        crd = Crd(lg, rg, e, b.kind)
        if b.left_truncated:
            left_iter = [TreeNode(lg, None, None, None, truncated=True)]
        else:
            left_iter = _alternatives(store, lg)
        for ln in left_iter:
            if b.right_truncated:
                right_iter = [TreeNode(rg, None, None, None, truncated=True)]
            else:
                right_iter = _alternatives(store, rg)
            for rn in right_iter:
                yield TreeNode(g, crd, ln, rn)


def _tree_key(root: TreeNode, store: Store):
    """Multiset of B-node signatures identifying a truncated tree."""
    sig = []

    def rec(n):
        if n.crd is None:
            return
        _, wit = canonical_form(n.circuit)
        u, v = n.crd.edge
        sig.append(
            (
                canonical_key(n.circuit),
                canonical_key(n.crd.g1),
                canonical_key(n.crd.g2),
                edge(wit[u], wit[v]),
            )
        )
        rec(n.left)
        rec(n.right)

    rec(root)
    sig.sort()
    return tuple(sig)


def enumerate_truncated_trees(g: LabeledGraph, mode: str = "auto", store: Store | None = None):
    """Lazy stream of distinct truncated CR-trees of g sharing one store."""
    if mode not in MODES:
        raise GraphError(f"unknown mode {mode!r}; expected one of {MODES}")
    if g.n < 5:
        raise GraphError("CR-trees are defined for circuits on at least 5 vertices")
    if not is_circuit(g):
        raise GraphError("CR-trees need a rigidity circuit")
    if store is None:
        store = Store(mode)
    elif store.mode != mode:
        raise GraphError(
            f"store was built for mode {store.mode!r}, not {mode!r}"
        )
    seen = set()
    for node in _alternatives(store, g):
        key = _tree_key(node, store)
        if key in seen:
            continue
        seen.add(key)
        yield CrTree(node, store)


def _first_full(store: Store, g: LabeledGraph) -> TreeNode:
    if g.n == 4:
        return TreeNode(g, None, None, None)
    cnode = store.lookup(g)
    if cnode is None:
        raise StoreIncomplete(
            f"no stored decomposition for a truncated {g.n}-vertex circuit"
        )
    b = store.ensure_bnode(cnode, 0)
    if b is None:
        raise StoreIncomplete(
            f"stored circuit on {g.n} vertices has no decompositions"
        )
    _, wit = canonical_form(g)
    embed = {c: v for v, c in wit.items()}
    lg = _materialize(store, b.left, b.left_relabel, embed)
    rg = _materialize(store, b.right, b.right_relabel, embed)
    e = edge(embed[b.edge[0]], embed[b.edge[1]])
    return TreeNode(g, Crd(lg, rg, e, b.kind), _first_full(store, lg), _first_full(store, rg))


def expand_tree(t: CrTree) -> CrTree:
    """Replace truncation markers by stored subtrees; result is a full tree."""

    def rec(n: TreeNode) -> TreeNode:
        if n.truncated:
            return _first_full(t.store, n.circuit)
        if n.crd is None:
            return TreeNode(n.circuit, None, None, None)
        return TreeNode(n.circuit, n.crd, rec(n.left), rec(n.right))

    out = CrTree(rec(t.root), t.store)
    validate_full_tree(out)
    return out


def validate_full_tree(t: CrTree) -> bool:
    """Check the three defining CR-tree conditions on every node."""

    def rec(n: TreeNode):
        if n.truncated:
            raise GraphError("tree contains truncation markers")
        if not is_circuit(n.circuit):
            raise GraphError(f"tree node on {sorted(n.circuit.vertices)} is not a circuit")
        if n.crd is None:
            if n.circuit.n != 4:
                raise GraphError("untruncated leaf is not a K4")
            return
        if n.left is None or n.right is None:
            raise GraphError("internal node missing a child")
        if n.left.circuit != n.crd.g1 or n.right.circuit != n.crd.g2:
            raise GraphError("children do not match the node's decomposition")
        if combinatorial_resultant(n.crd.g1, n.crd.g2, n.crd.edge) != n.circuit:
            raise GraphError("children do not reconstruct the parent")
        if n.left.circuit.n >= n.circuit.n or n.right.circuit.n >= n.circuit.n:
            raise GraphError("child does not drop the vertex count")
        rec(n.left)
        rec(n.right)

    rec(t.root)
    return True


@dataclass(frozen=True)
class CostRecord:
    vertices: int
    dimension: int | None  # Sylvester dimension, None until measurable
    hom_bound: int | None  # Lemma 2 homogeneous-degree bound


@dataclass(frozen=True)
class StrategyCost:
    records: tuple  # one CostRecord per internal node, post-order

    @property
    def root(self) -> CostRecord:
        return self.records[-1]


def strategy_cost(t: CrTree, measured: dict | None = None) -> StrategyCost:
    """Predicted Sylvester dimensions and Lemma 2 degree bounds per node.

    measured maps canonical_key(circuit) to (homogeneous degree, per-variable
    degree) pairs observed by the elimination pipeline.  Without them only
    nodes whose children are K4 leaves (h=3, d=2) get predictions, because a
    parent's per-variable degree is not derivable from the tree alone.
    """
    if not t.is_full():
        raise GraphError("strategy cost needs a fully expanded tree")
    measured = measured or {}
    records = []

    def value(n: TreeNode):
        if n.crd is None:
            got = measured.get(canonical_key(n.circuit))
            return got if got is not None else (3, 2)
        hf, df = value(n.left)
        hg, dg = value(n.right)
        dim = df + dg if df is not None and dg is not None else None
        if None not in (hf, df, hg, dg):
            bound = hf * dg + hg * df - df * dg
        else:
            bound = None
        records.append(CostRecord(n.circuit.n, dim, bound))
        got = measured.get(canonical_key(n.circuit))
        if got is not None:
            return got
        return (bound, None)

    value(t.root)
    return StrategyCost(tuple(records))


def build_strategy_tree(
    g: LabeledGraph,
    root_crd: Crd | None = None,
    mode: str = "auto",
    store: Store | None = None,
) -> CrTree:
    """Full CR-tree for g: a chosen root decomposition over default subtrees."""
    if store is None:
        store = Store(mode)
    if root_crd is None:
        first = next(enumerate_truncated_trees(g, mode, store))
        return expand_tree(first)
    if combinatorial_resultant(root_crd.g1, root_crd.g2, root_crd.edge) != g:
        raise GraphError("root decomposition does not reconstruct the graph")
    store.intern(g)
    for part in (root_crd.g1, root_crd.g2):
        if part.n > 4 and store.lookup(part) is None:
            # seed the store so _first_full can descend through this part
            for _ in enumerate_truncated_trees(part, mode, store):
                break
    node = TreeNode(
        g,
        root_crd,
        _first_full(store, root_crd.g1),
        _first_full(store, root_crd.g2),
    )
    out = CrTree(node, store)
    validate_full_tree(out)
    return out


# -- serialization ---------------------------------------------------------


def store_to_json(store: Store) -> dict:
    return {
        "mode": store.mode,
        "circuits": [graph_to_json(c.circuit) for c in store.cnodes],
        "cnodes": [
            {
                "circuit": c.index,
                "iso_witness": {str(k): v for k, v in c.iso_witness.items()},
                "decompositions": [b.index for b in c.decompositions],
            }
            for c in store.cnodes
        ],
        "bnodes": [
            {
                "parent": b.parent,
                "left": b.left,
                "right": b.right,
                "edge": list(b.edge),
                "left_relabel": {str(k): v for k, v in b.left_relabel.items()},
                "right_relabel": {str(k): v for k, v in b.right_relabel.items()},
                "left_truncated": b.left_truncated,
                "right_truncated": b.right_truncated,
                "kind": b.kind,
            }
            for b in store.bnodes
        ],
    }


def store_from_json(data: dict) -> Store:
    store = Store(data.get("mode", "auto"))
    for i, (gj, cj) in enumerate(zip(data["circuits"], data["cnodes"])):
        g = graph_from_json(gj)
        node = CNode(i, g, {int(k): v for k, v in cj["iso_witness"].items()})
        store.cnodes.append(node)
        store._by_key[canonical_key(g)] = i
    for i, bj in enumerate(data["bnodes"]):
        b = BNode(
            i,
            bj["parent"],
            bj["left"],
            bj["right"],
            edge(*bj["edge"]),
            {int(k): v for k, v in bj["left_relabel"].items()},
            {int(k): v for k, v in bj["right_relabel"].items()},
            bj["left_truncated"],
            bj["right_truncated"],
            bj["kind"],
        )
        store.bnodes.append(b)
        store.cnodes[b.parent].decompositions.append(b)
    return store


def tree_to_json(t: CrTree) -> dict:
    def rec(n: TreeNode) -> dict:
        cnode, wit = t.store.intern(n.circuit)
        out = {"circuit_index": cnode.index, "truncated": n.truncated}
        if n.crd is None:
            out["crd"] = None
        else:
            u, v = n.crd.edge
            out["crd"] = {
                "edge": list(edge(wit[u], wit[v])),
                "left": rec(n.left),
                "right": rec(n.right),
            }
        return out

    return rec(t.root)


def tree_from_json(data: dict, store: Store) -> CrTree:
    """Rebuild a tree in the root's canonical labels."""

    def rec(d: dict, g: LabeledGraph) -> TreeNode:
        if d["crd"] is None:
            return TreeNode(g, None, None, None, d.get("truncated", False))
        cnode = store.cnodes[d["circuit_index"]]
        want = (
            d["crd"]["left"]["circuit_index"],
            d["crd"]["right"]["circuit_index"],
            edge(*d["crd"]["edge"]),
        )
        b = next(
            (
                x
                for x in cnode.decompositions
                if (x.left, x.right, x.edge) == want
            ),
            None,
        )
        if b is None:
            raise GraphError("tree references an unregistered decomposition")
        _, wit = canonical_form(g)
        embed = {c: v for v, c in wit.items()}
        lg = _materialize(store, b.left, b.left_relabel, embed)
        rg = _materialize(store, b.right, b.right_relabel, embed)
        e = edge(embed[b.edge[0]], embed[b.edge[1]])
        crd = Crd(lg, rg, e, b.kind)
        return TreeNode(
            g,
            crd,
            rec(d["crd"]["left"], lg),
            rec(d["crd"]["right"], rg),
            d.get("truncated", False),
        )

    root_circuit = store.cnodes[data["circuit_index"]].circuit
    return CrTree(rec(data, root_circuit), store)
