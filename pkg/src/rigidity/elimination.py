"""Tree-guided circuit-polynomial computation and exact verification.

The pipeline walks a full CR-tree bottom-up: K4 leaves get the
Cayley-Menger base polynomial, every internal node the primitive part of
the Sylvester resultant of its children in the elimination edge's
distance variable.  Each step is recorded; hitting a resource cap turns
into a partial report rather than an exception.  Results are verified by
exact vanishing on seeded integer placements.
"""
from __future__ import annotations

import hashlib
import json
import os
import platform
import random
import time
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from . import _determinant
from .canon import canonical_form, canonical_key
from .crtree import CrTree, TreeNode, validate_full_tree
from .graphs import GraphError, LabeledGraph
from .polyring import (
    Limits,
    MultiPoly,
    NOT_HOMOGENEOUS,
    PolyError,
    ResourceExhausted,
    dvar,
    load_poly,
    resultant,
    save_poly,
)


class EliminationError(RuntimeError):
    """A structural failure the theory forbids: degenerate or bad resultant."""


# -- Cayley-Menger base objects ---------------------------------------------


@dataclass(frozen=True)
class CayleyMengerMatrix:
    """Bordered squared-distance matrix on a labeled point set."""

    labels: tuple
    rows: tuple  # (n+1) x (n+1) of MultiPoly

    @property
    def dimension(self) -> int:
        return len(self.rows)

    def entry(self, i: int, j: int) -> MultiPoly:
        return self.rows[i][j]

    def determinant(self, limits: Limits | None = None) -> MultiPoly:
        return _determinant.poly_det(
            [list(r) for r in self.rows], limits or Limits()
        )


def cm_matrix(vertices) -> CayleyMengerMatrix:
    labels = tuple(sorted(set(vertices)))
    if len(labels) < 4 or len(labels) != len(tuple(vertices)):
        raise GraphError("a Cayley-Menger matrix needs at least 4 distinct labels")
    one = MultiPoly.const(1)
    zero = MultiPoly.zero()
    n = len(labels)
    rows = [[zero if j == 0 else one for j in range(n + 1)]]
    for i, a in enumerate(labels):
        row = [one]
        for j, b in enumerate(labels):
            row.append(zero if i == j else MultiPoly.variable(dvar(a, b)))
        rows.append(row)
    return CayleyMengerMatrix(labels, tuple(tuple(r) for r in rows))


@lru_cache(maxsize=1)
def _k4_template() -> MultiPoly:
    return cm_matrix((1, 2, 3, 4)).determinant().primitive_part()


def k4_circuit_polynomial(vertices) -> MultiPoly:
    """Primitive 5x5 Cayley-Menger determinant: 22 terms, homogeneous deg 3."""
    labels = tuple(vertices)
    if len(labels) != 4 or len(set(labels)) != 4:
        raise GraphError("the base polynomial needs exactly 4 distinct labels")
    return _k4_template().relabel({i + 1: v for i, v in enumerate(labels)})


# -- placements --------------------------------------------------------------


def random_placement(vertices, seed: int, bound: int = 10_000) -> dict:
    """Deterministic integer placement with all points distinct."""
    rng = random.Random(seed)
    placement = {}
    used = set()
    for v in sorted(vertices):
        while True:
            pt = (rng.randint(-bound, bound), rng.randint(-bound, bound))
            if pt not in used:
                used.add(pt)
                placement[v] = pt
                break
    return placement


def evaluate_at_placement(p: MultiPoly, placement: dict):
    """Exact value of p with x_{i,j} := squared distance under the placement."""
    values = {}
    for (i, j) in p.used_vars():
        try:
            xi, yi = placement[i]
            xj, yj = placement[j]
        except KeyError as missing:
            raise PolyError(f"vertex {missing.args[0]} is not placed") from None
        values[(i, j)] = (xi - xj) ** 2 + (yi - yj) ** 2
    return p.evaluate(values)


@dataclass(frozen=True)
class VerificationResult:
    vanishing: bool
    nontrivial: bool
    placements: int

    @property
    def ok(self) -> bool:
        return self.vanishing and self.nontrivial


def verify_circuit_polynomial(
    p: MultiPoly, vertices, placements: int = 20, seed: int = 0, bound: int = 10_000
) -> VerificationResult:
    """Vanishing on seeded placements plus a nonzero proper sub-polynomial."""
    if p.is_zero():
        return VerificationResult(False, False, 0)
    for k in range(placements):
        pl = random_placement(vertices, seed + k, bound)
        if evaluate_at_placement(p, pl) != 0:
            return VerificationResult(False, False, k + 1)
    used = p.used_vars()
    nontrivial = False
    if used:
        lead = p.coeffs_in(used[0])[-1]
        for k in range(10):
            pl = random_placement(vertices, seed + placements + k, bound)
            if evaluate_at_placement(lead, pl) != 0:
                nontrivial = True
                break
    return VerificationResult(True, nontrivial, placements)


# -- polynomial cache --------------------------------------------------------


class PolyCache:
    """Circuit polynomials keyed by canonical graph form.

    Polynomials are stored on canonical labels and relabeled on the way
    out, so isomorphic circuits share one entry.  With a directory the
    cache also persists across processes.
    """

    def __init__(self, directory=None):
        self._mem: dict[bytes, MultiPoly] = {}
        self.directory = Path(directory) if directory else None
        if self.directory:
            self.directory.mkdir(parents=True, exist_ok=True)
        self.hits = 0
        self.misses = 0

    def _path(self, key: bytes) -> Path:
        return self.directory / (hashlib.sha256(key).hexdigest()[:32] + ".poly")

    def get(self, g: LabeledGraph) -> MultiPoly | None:
        key, wit = canonical_form(g)
        p = self._mem.get(key)
        if p is None and self.directory:
            path = self._path(key)
            if path.exists():
                p = load_poly(path)
                self._mem[key] = p
        if p is None:
            self.misses += 1
            return None
        self.hits += 1
        back = {c: v for v, c in wit.items()}
        return p.relabel(back)

    def put(self, g: LabeledGraph, p: MultiPoly) -> None:
        key, wit = canonical_form(g)
        canonical = p.relabel(dict(wit))
        self._mem[key] = canonical
        if self.directory:
            save_poly(canonical, self._path(key))


# -- the pipeline ------------------------------------------------------------


def lemma2_bound(hf: int, df: int, hg: int, dg: int) -> int:
    return hf * dg + hg * df - df * dg


@dataclass
class StepRecord:
    vertices: int
    variable: tuple
    dimension: int | None
    hom_left: int | None
    hom_right: int | None
    hom_out: int | None
    lemma2: int | None
    terms_left: int | None
    terms_right: int | None
    terms_out: int | None
    seconds: float
    status: str  # completed | cached | exhausted
    note: str = ""

    def to_json(self) -> dict:
        d = dict(self.__dict__)
        d["variable"] = list(self.variable)
        return d


@dataclass
class EliminationReport:
    steps: list = field(default_factory=list)
    status: str = "Completed"  # Completed | ResourceExhausted
    limits: Limits = field(default_factory=Limits)
    total_seconds: float = 0.0
    flags: list = field(default_factory=list)
    label: str = ""
    hardware: dict | None = None
    timing: dict | None = None
    verification: VerificationResult | None = None

    @property
    def root_step(self) -> StepRecord | None:
        return self.steps[-1] if self.steps else None

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "status": self.status,
            "limits": {
                "max_terms": self.limits.max_terms,
                "max_total_terms": self.limits.max_total_terms,
            },
            "total_seconds": self.total_seconds,
            "steps": [s.to_json() for s in self.steps],
            "flags": list(self.flags),
            "hardware": self.hardware,
            "timing": self.timing,
            "verification": None
            if self.verification is None
            else {
                "vanishing": self.verification.vanishing,
                "nontrivial": self.verification.nontrivial,
                "placements": self.verification.placements,
            },
        }


def _hom_or_none(p: MultiPoly):
    h = p.homogeneous_degree()
    return None if h is NOT_HOMOGENEOUS else h


def circuit_polynomial(
    tree: CrTree,
    limits: Limits | None = None,
    cache: PolyCache | None = None,
    method: str = "minors",
    verify_placements: int | None = 20,
    seed: int = 0,
):
    """Compute the root circuit polynomial of a full CR-tree.

    Returns (poly, report); poly is None and report.status is
    ResourceExhausted when a cap was hit.  Verification runs on the final
    polynomial unless verify_placements is None.
    """
    validate_full_tree(tree)
    limits = limits or Limits()
    cache = cache if cache is not None else PolyCache()
    report = EliminationReport(limits=limits)
    t_start = time.perf_counter()

    def compute(node: TreeNode) -> MultiPoly:
        if node.crd is None:
            return k4_circuit_polynomial(sorted(node.circuit.vertices))
        cached = cache.get(node.circuit)
        if cached is not None:
            report.steps.append(
                StepRecord(
                    node.circuit.n,
                    node.crd.edge,
                    None,
                    None,
                    None,
                    _hom_or_none(cached),
                    None,
                    None,
                    None,
                    cached.term_count,
                    0.0,
                    "cached",
                )
            )
            return cached
        pl = compute(node.left)
        pr = compute(node.right)
        v = dvar(*node.crd.edge)
        df = pl.degree_in(v)
        dg = pr.degree_in(v)
        hf = _hom_or_none(pl)
        hg = _hom_or_none(pr)
        bound = (
            lemma2_bound(hf, df, hg, dg)
            if hf is not None and hg is not None
            else None
        )
        t0 = time.perf_counter()
        try:
            raw = resultant(pl, pr, v, limits, method)
        except ResourceExhausted as exc:
            report.steps.append(
                StepRecord(
                    node.circuit.n,
                    node.crd.edge,
                    df + dg,
                    hf,
                    hg,
                    None,
                    bound,
                    pl.term_count,
                    pr.term_count,
                    None,
                    time.perf_counter() - t0,
                    "exhausted",
                    str(exc),
                )
            )
            raise
        if raw.is_zero():
            raise EliminationError(
                f"resultant degenerated to zero at the {node.circuit.n}-vertex step"
            )
        p = raw.primitive_part()
        seconds = time.perf_counter() - t0
        hout = _hom_or_none(p)
        note = ""
        if hout is None:
            note = "inhomogeneous output"
            report.flags.append(
                f"needs-factorization: inhomogeneous result at {node.circuit.n} vertices"
            )
        elif bound is not None:
            if hout > bound:
                raise EliminationError(
                    f"homogeneous degree {hout} exceeds the Sylvester bound {bound}"
                )
            if hout < bound:
                note = f"degree below bound {bound}"
                report.flags.append(
                    f"needs-factorization: degree {hout} < bound {bound} "
                    f"at {node.circuit.n} vertices"
                )
        report.steps.append(
            StepRecord(
                node.circuit.n,
                node.crd.edge,
                df + dg,
                hf,
                hg,
                hout,
                bound,
                pl.term_count,
                pr.term_count,
                p.term_count,
                seconds,
                "completed",
                note,
            )
        )
        cache.put(node.circuit, p)
        return p

    try:
        poly = compute(tree.root)
    except ResourceExhausted:
        report.status = "ResourceExhausted"
        report.total_seconds = time.perf_counter() - t_start
        return None, report
    report.total_seconds = time.perf_counter() - t_start
    if verify_placements:
        result = verify_circuit_polynomial(
            poly, tree.root_circuit.vertices, verify_placements, seed
        )
        report.verification = result
        if not result.ok:
            raise EliminationError(
                "computed polynomial failed placement verification"
            )
    return poly, report


# -- strategy comparison ------------------------------------------------------


def hardware_fingerprint() -> dict:
    try:
        import numpy

        np_version = numpy.__version__
    except ImportError:  # pragma: no cover
        np_version = None
    return {
        "platform": platform.platform(),
        "machine": platform.machine(),
        "python": platform.python_version(),
        "numpy": np_version,
        "cpus": os.cpu_count(),
    }


def _trimmed_median(values):
    xs = sorted(values)
    if len(xs) >= 3:
        xs = xs[1:-1]
    mid = len(xs) // 2
    if len(xs) % 2:
        return xs[mid]
    return (xs[mid - 1] + xs[mid]) / 2


def compare_strategies(
    g: LabeledGraph,
    strategies,
    labels=None,
    limits: Limits | None = None,
    repetitions: int = 5,
    method: str = "minors",
    verify_placements: int | None = 20,
    seed: int = 0,
):
    """Run each strategy tree under identical caps with repeated timing.

    Per-strategy failures become ResourceExhausted reports, never raises.
    Each completed strategy is timed over `repetitions` runs (fresh cache
    each run) and summarized by the median with extremes discarded.
    """
    limits = limits or Limits()
    labels = list(labels) if labels else [f"strategy-{i+1}" for i in range(len(strategies))]
    if len(labels) != len(strategies):
        raise GraphError("one label per strategy required")
    hardware = hardware_fingerprint()
    out = []
    for label, tree in zip(labels, strategies):
        if tree.root_circuit != g:
            raise GraphError(f"{label}: tree does not root at the given graph")
        times = []
        poly = None
        report = None
        for _ in range(max(1, repetitions)):
            poly, report = circuit_polynomial(
                tree,
                limits=limits,
                cache=PolyCache(),
                method=method,
                verify_placements=None,
            )
            times.append(report.total_seconds)
            if report.status != "Completed":
                break
        report.label = label
        report.hardware = hardware
        report.timing = {
            "repetitions": len(times),
            "seconds": times,
            "median_trimmed": _trimmed_median(times),
        }
        if poly is not None and verify_placements:
            report.verification = verify_circuit_polynomial(
                poly, g.vertices, verify_placements, seed
            )
        out.append(report)
    return out


def render_comparison(reports) -> str:
    """Text table in the dimension / degree / terms / time / status layout."""
    headers = ["strategy", "syl dim", "hom deg", "terms", "time (s)", "status"]
    rows = [headers]
    for r in reports:
        root = r.root_step
        dim = "-" if root is None or root.dimension is None else f"{root.dimension}x{root.dimension}"
        hom = "-" if root is None or root.hom_out is None else str(root.hom_out)
        terms = "-" if root is None or root.terms_out is None else str(root.terms_out)
        t = r.timing["median_trimmed"] if r.timing else r.total_seconds
        rows.append([r.label, dim, hom, terms, f"{t:.3f}", r.status])
    widths = [max(len(row[i]) for row in rows) for i in range(len(headers))]
    lines = []
    for i, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"
