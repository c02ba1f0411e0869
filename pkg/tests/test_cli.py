import json

import pytest

from rigidity.cli import main
from rigidity.crtree import store_from_json
from rigidity.fixtures import double_banana
from rigidity.graphs import graph_to_text
from rigidity.polyring import load_poly, poly_from_text


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    return code, json.loads(out), err


# -- analyze ------------------------------------------------------------------


def test_analyze_double_banana_text(capsys):
    code, out, _ = run(capsys, "analyze", "double-banana")
    assert code == 0
    assert "6 vertices, 10 edges" in out
    assert "circuit, 2-connected" in out
    assert "separating pairs {2,5}" in out


def test_analyze_double_banana_json_matches_text_data(capsys):
    code, data, _ = run_json(capsys, "analyze", "double-banana")
    assert code == 0
    assert data["graph"] == {"vertices": 6, "edges": 10}
    assert data["circuit"] is True
    assert data["connectivity"] == "2-connected"
    assert data["separating_pairs"] == [[2, 5]]
    assert "admissible_pairs" not in data


def test_analyze_w4_shows_admissible_pairs(capsys):
    code, out, _ = run(capsys, "analyze", "w4")
    assert code == 0
    assert "circuit, 3-connected" in out
    assert "admissible pairs:" in out
    assert "drop " in out


def test_analyze_chain_10_pairs(capsys):
    code, data, _ = run_json(capsys, "analyze", "chain-10")
    assert code == 0
    assert data["separating_pairs"] == [[2, 9], [3, 8], [4, 7]]


def test_analyze_non_circuit(capsys):
    code, out, _ = run(capsys, "analyze", "prism")
    assert code == 0
    assert "not a circuit (laman: |E| = 9, 2|V|-2 = 10)" in out


def test_analyze_graph_file(tmp_path, capsys):
    path = tmp_path / "db.txt"
    path.write_text(graph_to_text(double_banana()))
    code, out, _ = run(capsys, "analyze", str(path))
    assert code == 0
    assert "circuit, 2-connected" in out


def test_unknown_graph_is_a_user_error(capsys):
    code, _, err = run(capsys, "analyze", "no-such-graph")
    assert code == 1
    assert "bundled" in err and "double-banana" in err


# -- decompose ----------------------------------------------------------------


def test_decompose_double_banana_naive(capsys):
    code, out, _ = run(capsys, "decompose", "double-banana")
    assert code == 0
    assert "5 decompositions in 2 isomorphism classes (mode naive)" in out


def test_decompose_double_banana_split_json(capsys):
    code, data, _ = run_json(capsys, "decompose", "double-banana", "--mode", "split")
    assert code == 0
    assert data["count"] == 1
    assert data["decompositions"][0]["edge"] == [2, 5]
    assert data["decompositions"][0]["kind"] == "2-split"


def test_decompose_split_of_3connected_suggests_3conn(capsys):
    code, _, err = run(capsys, "decompose", "w4", "--mode", "split")
    assert code == 1
    assert "3-connected" in err and "use --mode 3conn" in err


def test_decompose_3conn_of_2connected_fails(capsys):
    code, _, err = run(capsys, "decompose", "double-banana", "--mode", "3conn")
    assert code == 1
    assert "not 3-connected" in err


# -- crtree -------------------------------------------------------------------


def test_crtree_double_banana_splits_only(capsys):
    code, out, _ = run(
        capsys, "crtree", "double-banana", "--mode", "splits_only", "--expand"
    )
    assert code == 0
    assert "1 truncated CR-trees" in out
    assert "tree 1: 3 nodes" in out
    assert "first tree expands to 3 nodes (2 leaves)" in out


def test_crtree_chain_10_counts_and_cap(capsys):
    code, data, _ = run_json(capsys, "crtree", "chain-10")
    assert code == 0
    assert [t["nodes"] for t in data["trees"]] == [7, 5, 3, 3]
    assert data["capped"] is False
    assert len(data["tree_data"]) == 4

    code, data, _ = run_json(capsys, "crtree", "chain-10", "--max-trees", "2")
    assert code == 0
    assert len(data["trees"]) == 2
    assert data["capped"] is True


def test_crtree_store_file(tmp_path, capsys):
    path = tmp_path / "store.json"
    code, _, _ = run(capsys, "crtree", "double-banana", "--store", str(path))
    assert code == 0
    store = store_from_json(json.loads(path.read_text()))
    assert len(store.cnodes) >= 2  # the banana and a K4 at least


# -- poly and verify ------------------------------------------------------------


def test_poly_k4_base_case(capsys):
    code, data, _ = run_json(capsys, "poly", "k4")
    assert code == 0
    assert data["report"]["status"] == "Completed"
    assert data["polynomial"]["terms"] == 22
    assert data["polynomial"]["homogeneous_degree"] == 3
    assert data["report"]["verification"]["vanishing"] is True


def test_poly_double_banana_text_and_verify_round_trip(tmp_path, capsys):
    out_file = tmp_path / "banana.txt"
    code, out, _ = run(
        capsys, "poly", "double-banana", "--strategy", "2-split", "-o", str(out_file)
    )
    assert code == 0
    assert "strategy 2-split: Completed" in out
    assert "circuit polynomial: 1,752 terms, homogeneous degree 8" in out
    assert "verification: vanishing=True" in out
    assert poly_from_text(out_file.read_text()).term_count == 1752

    code, out, _ = run(capsys, "verify", str(out_file), "double-banana")
    assert code == 0
    assert out.startswith("OK:")


def test_poly_binary_output_and_verify(tmp_path, capsys):
    out_file = tmp_path / "w4.poly"
    code, _, _ = run(capsys, "poly", "w4", "-o", str(out_file))
    assert code == 0
    assert load_poly(out_file).term_count == 843
    code, out, _ = run(capsys, "verify", str(out_file), "w4")
    assert code == 0 and "OK:" in out


def test_verify_rejects_wrong_polynomial(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("1 [1,2]^1\n1\n")  # x12 + 1 never vanishes
    code, out, _ = run(capsys, "verify", str(bad), "double-banana")
    assert code == 1
    assert out.startswith("FAILED:")


def test_poly_2_split_of_3connected_is_an_error(capsys):
    code, _, err = run(capsys, "poly", "w4", "--strategy", "2-split")
    assert code == 1
    assert "3-connected" in err and "--strategy auto" in err


def test_poly_resource_exhaustion_exit_code(capsys):
    code, data, _ = run_json(
        capsys,
        "poly", "double-banana",
        "--strategy", "double-triangle",
        "--max-terms", "50000",
    )
    assert code == 2
    assert data["report"]["status"] == "ResourceExhausted"
    assert "polynomial" not in data


def test_poly_cache_dir_reuses_results(tmp_path, capsys):
    cache = tmp_path / "cache"
    argv = ("poly", "double-banana", "--cache-dir", str(cache), "--format", "json")
    code, data, _ = run_json(capsys, *argv[:-2])
    first = main(list(argv))
    capsys.readouterr()
    assert first == 0
    code = main(list(argv))
    out = capsys.readouterr().out
    assert code == 0
    data = json.loads(out)
    assert data["report"]["steps"][-1]["status"] == "cached"


def test_poly_cache_env_variable(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("RIGIDITY_CACHE_DIR", str(tmp_path / "envcache"))
    assert main(["poly", "double-banana"]) == 0
    capsys.readouterr()
    code = main(["poly", "double-banana", "--format", "json"])
    data = json.loads(capsys.readouterr().out)
    assert code == 0
    assert data["report"]["steps"][-1]["status"] == "cached"


# -- bench ----------------------------------------------------------------------


TINY_SUITE = {
    "name": "tiny",
    "repetitions": 2,
    "rows": [
        {
            "graph": "double-banana",
            "strategies": [
                {"name": "2-split", "expect": "Completed", "terms": 1752},
            ],
        }
    ],
}


def test_bench_tiny_suite(tmp_path, capsys):
    suite = tmp_path / "suite.json"
    suite.write_text(json.dumps(TINY_SUITE))
    code, out, _ = run(capsys, "bench", str(suite))
    assert code == 0
    assert "suite tiny: 2 repetitions per strategy" in out
    assert "double-banana" in out
    assert "1,752" in out
    assert "Completed" in out
    assert "MISMATCH" not in out


def test_bench_json_matches_text_data(tmp_path, capsys):
    suite = tmp_path / "suite.json"
    suite.write_text(json.dumps(TINY_SUITE))
    code, data, _ = run_json(capsys, "bench", str(suite))
    assert code == 0
    item = data["rows"][0]["strategies"][0]
    assert item["status"] == "Completed"
    assert item["terms"] == 1752
    assert item["terms_match"] is True
    assert item["as_expected"] is True
    assert data["expected_complete_failures"] == 0
    assert data["repetitions"] == 2
    assert data["limits"] == {"max_terms": 20_000_000, "max_total_terms": 25_000_000}


def test_bench_expected_complete_failure_exits_2(tmp_path, capsys):
    suite = tmp_path / "suite.json"
    suite.write_text(json.dumps(TINY_SUITE))
    code, out, _ = run(
        capsys, "bench", str(suite), "--max-terms", "500", "--repetitions", "1"
    )
    assert code == 2
    assert "MISMATCH 2-split: expected Completed, got ResourceExhausted" in out
    assert "1 expected-complete strategies failed" in out


def test_bench_rejects_bad_inputs(tmp_path, capsys):
    code, _, err = run(capsys, "bench", "no-such-suite")
    assert code == 1 and "bundled" in err

    garbage = tmp_path / "garbage.json"
    garbage.write_text("[1, 2, 3]")
    code, _, err = run(capsys, "bench", str(garbage))
    assert code == 1 and "rows" in err

    suite = tmp_path / "suite.json"
    suite.write_text(json.dumps(TINY_SUITE))
    code, _, err = run(capsys, "bench", str(suite), "--jobs", "0")
    assert code == 1 and "--jobs" in err


def test_bench_row_error_is_recorded_not_fatal(tmp_path, capsys):
    suite = {
        "name": "mixed",
        "repetitions": 1,
        "rows": [
            {"graph": "w4", "strategies": [{"name": "2-split"}]},
            {"graph": "double-banana",
             "strategies": [{"name": "2-split", "expect": "Completed"}]},
        ],
    }
    path = tmp_path / "mixed.json"
    path.write_text(json.dumps(suite))
    code, data, _ = run_json(capsys, "bench", str(path))
    assert code == 0  # the failing row had no Completed expectation
    assert data["rows"][0]["errors"]
    assert "3-connected" in data["rows"][0]["errors"][0]
    assert data["rows"][1]["strategies"][0]["status"] == "Completed"
