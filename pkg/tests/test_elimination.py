import json
import random

from rigidity.crtree import build_strategy_tree
from rigidity.decompose import crd_with_common_size
from rigidity.elimination import (
    EliminationReport,
    PolyCache,
    circuit_polynomial,
    cm_matrix,
    compare_strategies,
    evaluate_at_placement,
    hardware_fingerprint,
    k4_circuit_polynomial,
    lemma2_bound,
    random_placement,
    render_comparison,
    verify_circuit_polynomial,
)
from rigidity.fixtures import double_banana, w4
from rigidity.graphs import GraphError
from rigidity.polyring import Limits, MultiPoly, PolyError, dvar

import pytest


# -- base polynomial -----------------------------------------------------------


def test_k4_polynomial_shape():
    p = k4_circuit_polynomial((1, 2, 3, 4))
    assert p.term_count == 22
    assert p.homogeneous_degree() == 3
    assert p.max_degrees() == (2,) * 6
    assert p.content() == 1
    assert set(p.used_vars()) == {
        dvar(i, j) for i in range(1, 5) for j in range(i + 1, 5)
    }


def test_k4_polynomial_label_symmetry():
    base = k4_circuit_polynomial((1, 2, 3, 4))
    assert k4_circuit_polynomial((4, 2, 1, 3)) == base
    shifted = k4_circuit_polynomial((2, 5, 7, 9))
    assert shifted == base.relabel({1: 2, 2: 5, 3: 7, 4: 9})
    with pytest.raises(GraphError):
        k4_circuit_polynomial((1, 2, 3))
    with pytest.raises(GraphError):
        k4_circuit_polynomial((1, 2, 3, 3))


def test_cm_matrix_layout():
    m = cm_matrix((1, 2, 3, 4))
    assert m.dimension == 5
    assert m.entry(0, 0).is_zero()
    assert m.entry(0, 1) == MultiPoly.const(1)
    assert m.entry(2, 0) == MultiPoly.const(1)
    assert m.entry(1, 1).is_zero()
    assert m.entry(1, 2) == MultiPoly.variable(dvar(1, 2))
    assert m.entry(4, 2) == MultiPoly.variable(dvar(2, 4))
    with pytest.raises(GraphError):
        cm_matrix((1, 2, 3))
    with pytest.raises(GraphError):
        cm_matrix((1, 2, 3, 3))


def test_k4_vanishes_on_100_placements():
    p = k4_circuit_polynomial((1, 2, 3, 4))
    for seed in range(100):
        pl = random_placement((1, 2, 3, 4), seed)
        assert evaluate_at_placement(p, pl) == 0


# -- placements -----------------------------------------------------------------


def test_random_placement_deterministic_and_distinct():
    a = random_placement((1, 2, 3, 4, 5), seed=9)
    b = random_placement((1, 2, 3, 4, 5), seed=9)
    assert a == b
    assert len(set(a.values())) == 5
    assert all(abs(x) <= 10_000 and abs(y) <= 10_000 for x, y in a.values())
    assert random_placement((1, 2), seed=1, bound=3) != random_placement(
        (1, 2), seed=2, bound=3
    )


def test_evaluate_at_placement_missing_vertex():
    p = k4_circuit_polynomial((1, 2, 3, 4))
    with pytest.raises(PolyError):
        evaluate_at_placement(p, {1: (0, 0), 2: (1, 0), 3: (0, 1)})


def test_verify_rejects_non_vanishing():
    x = MultiPoly.variable(dvar(1, 2))
    res = verify_circuit_polynomial(x + 1, (1, 2), placements=5)
    assert not res.ok and not res.vanishing
    assert not verify_circuit_polynomial(MultiPoly.zero(), (1, 2)).ok
    good = verify_circuit_polynomial(k4_circuit_polynomial((1, 2, 3, 4)), (1, 2, 3, 4))
    assert good.ok and good.vanishing and good.nontrivial
    assert good.placements == 20


# -- the double banana pipeline ---------------------------------------------------


def test_double_banana_two_split_polynomial():
    g = double_banana()
    tree = build_strategy_tree(g)
    poly, report = circuit_polynomial(tree)
    assert report.status == "Completed"
    assert poly.term_count == 1752
    assert poly.homogeneous_degree() == 8
    assert all(d == 4 for d in poly.max_degrees())
    root = report.root_step
    assert root.dimension == 4
    assert root.hom_left == root.hom_right == 3
    assert root.hom_out == 8
    assert root.lemma2 == lemma2_bound(3, 2, 3, 2) == 8
    assert root.status == "completed"
    assert not report.flags
    assert report.verification is not None and report.verification.ok


def test_w4_polynomial():
    tree = build_strategy_tree(w4())
    poly, report = circuit_polynomial(tree)
    assert report.status == "Completed"
    assert poly.term_count == 843
    assert poly.homogeneous_degree() == 8
    assert max(poly.max_degrees()) == 4


def test_double_banana_polynomial_is_relabeling_invariant():
    g = double_banana()
    base, _ = circuit_polynomial(build_strategy_tree(g), verify_placements=None)
    rng = random.Random(3)
    perm = sorted(g.vertices)
    rng.shuffle(perm)
    mapping = dict(zip(sorted(g.vertices), perm))
    h = g.relabel(mapping)
    other, _ = circuit_polynomial(build_strategy_tree(h), verify_placements=None)
    assert other == base.relabel(mapping)


# -- resource exhaustion -----------------------------------------------------------


def test_two_wheel_strategy_exhausts_small_caps():
    g = double_banana()
    crd = crd_with_common_size(g, 4)
    tree = build_strategy_tree(g, crd)
    poly, report = circuit_polynomial(tree, limits=Limits(50_000, 60_000))
    assert poly is None
    assert report.status == "ResourceExhausted"
    steps = report.steps
    assert steps[-1].status == "exhausted"
    assert steps[-1].dimension == 8
    assert steps[-1].lemma2 == lemma2_bound(8, 4, 8, 4) == 48
    assert "exceeds cap" in steps[-1].note
    # the second wheel subtree is isomorphic to the first and comes from cache
    assert [s.status for s in steps[:-1]].count("cached") == 1


# -- cache ---------------------------------------------------------------------------


def test_cache_shares_isomorphic_circuits():
    g = double_banana()
    cache = PolyCache()
    base, _ = circuit_polynomial(build_strategy_tree(g), cache=cache, verify_placements=None)
    assert cache.misses > 0
    mapping = {1: 6, 6: 1}
    h = g.relabel(mapping)
    got = cache.get(h)
    assert got is not None
    assert got == base.relabel(mapping)


def test_cache_disk_round_trip(tmp_path):
    g = w4()
    first = PolyCache(tmp_path)
    poly, _ = circuit_polynomial(build_strategy_tree(g), cache=first, verify_placements=None)
    second = PolyCache(tmp_path)
    got = second.get(g)
    assert got == poly
    assert second.hits == 1 and second.misses == 0


def test_cache_speeds_up_repeat_computation():
    g = double_banana()
    cache = PolyCache()
    a, _ = circuit_polynomial(build_strategy_tree(g), cache=cache, verify_placements=None)
    tree2 = build_strategy_tree(g)
    b, report2 = circuit_polynomial(tree2, cache=cache, verify_placements=None)
    assert a == b
    assert report2.steps[-1].status == "cached"


# -- reports and comparison -----------------------------------------------------------


def test_report_json_round_trips_through_json_module():
    g = double_banana()
    poly, report = circuit_polynomial(build_strategy_tree(g))
    blob = json.dumps(report.to_json())
    data = json.loads(blob)
    assert data["status"] == "Completed"
    assert data["limits"] == {"max_terms": 20_000_000, "max_total_terms": 25_000_000}
    assert data["steps"][-1]["terms_out"] == 1752
    assert data["steps"][-1]["variable"] == [2, 5]
    assert data["verification"]["vanishing"] is True


def test_compare_strategies_and_render():
    g = double_banana()
    split_tree = build_strategy_tree(g)
    wheel_tree = build_strategy_tree(g, crd_with_common_size(g, 4))
    reports = compare_strategies(
        g,
        [split_tree, wheel_tree],
        labels=["2-split", "two-wheels"],
        limits=Limits(50_000, 60_000),
        repetitions=3,
        verify_placements=5,
    )
    by_label = {r.label: r for r in reports}
    ok = by_label["2-split"]
    assert ok.status == "Completed"
    assert ok.timing["repetitions"] == 3
    assert len(ok.timing["seconds"]) == 3
    assert ok.timing["median_trimmed"] in ok.timing["seconds"]
    assert ok.verification is not None and ok.verification.ok
    crash = by_label["two-wheels"]
    assert crash.status == "ResourceExhausted"
    assert crash.timing["repetitions"] == 1  # exhausted strategies run once
    assert crash.verification is None

    table = render_comparison(reports)
    lines = table.splitlines()
    assert lines[0].split() == ["strategy", "syl", "dim", "hom", "deg", "terms", "time", "(s)", "status"]
    assert any("2-split" in ln and "Completed" in ln and "1752" in ln for ln in lines)
    assert any("two-wheels" in ln and "ResourceExhausted" in ln for ln in lines)


def test_compare_strategies_rejects_foreign_tree():
    g = double_banana()
    other = build_strategy_tree(w4())
    with pytest.raises(GraphError):
        compare_strategies(g, [other], labels=["bad"], repetitions=1)


def test_hardware_fingerprint_fields():
    hw = hardware_fingerprint()
    assert set(hw) == {"platform", "machine", "python", "numpy", "cpus"}
    assert hw["cpus"] >= 1
