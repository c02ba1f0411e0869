"""Command line front end.

Six subcommands mirror the library layers:

  analyze    sparsity class, connectivity class, separating/admissible pairs
  decompose  enumerate one-step decompositions of a circuit
  crtree     enumerate truncated CR-trees
  poly       compute a circuit polynomial along a chosen strategy
  verify     check a stored polynomial against a graph by exact evaluation
  bench      run a comparison suite and render per-graph tables

Graphs are given as file paths (text or .json) or bundled fixture names.
Every command accepts --format json|text; the JSON payload carries exactly
the data the text rendering shows.  Exit codes: 0 success, 1 user error,
2 resource exhaustion, 3 internal invariant violation.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from itertools import islice

from .canon import canonical_key
from .connectivity import (
    THREE_CONNECTED,
    admissible_pairs,
    connectivity_class,
    separating_pairs,
)
from .crtree import (
    CrTree,
    build_strategy_tree,
    enumerate_truncated_trees,
    expand_tree,
    store_to_json,
    tree_to_json,
)
from .decompose import crd_with_common_size, decompositions, iso_class_key
from .elimination import (
    EliminationError,
    EliminationReport,
    PolyCache,
    circuit_polynomial,
    compare_strategies,
    hardware_fingerprint,
    k4_circuit_polynomial,
    verify_circuit_polynomial,
)
from .fixtures import NAMED_GRAPHS, named_graph
from .graphs import GraphError, LabeledGraph, load_graph
from .polyring import (
    NOT_HOMOGENEOUS,
    Limits,
    PolyError,
    ResourceExhausted,
    load_poly,
    poly_from_text,
    save_poly,
)
from .sparsity import is_circuit, sparsity_class

CACHE_ENV = "RIGIDITY_CACHE_DIR"

STRATEGIES = ("2-split", "auto", "naive", "common-triangle", "double-triangle")


def _graph_arg(spec: str) -> LabeledGraph:
    if spec in NAMED_GRAPHS:
        return named_graph(spec)
    if os.path.exists(spec):
        return load_graph(spec)
    raise GraphError(
        f"{spec!r} is neither a file nor a bundled graph "
        f"(bundled: {', '.join(sorted(NAMED_GRAPHS))})"
    )


def strategy_tree(g: LabeledGraph, name: str) -> CrTree:
    """Build the full elimination tree a strategy name denotes.

    2-split follows the first truncated tree of the split-only stream;
    common-triangle / double-triangle root at the first exhaustive-search
    decomposition whose parts share 3 / 4 vertices and decompose the parts
    recursively in auto mode.
    """
    if name == "2-split":
        if connectivity_class(g) == THREE_CONNECTED:
            raise GraphError(
                "the circuit is 3-connected: no 2-split exists (use --strategy auto)"
            )
        return expand_tree(next(enumerate_truncated_trees(g, "splits_only")))
    if name in ("auto", "naive"):
        return expand_tree(next(enumerate_truncated_trees(g, name)))
    if name == "common-triangle":
        return build_strategy_tree(g, crd_with_common_size(g, 3), mode="auto")
    if name == "double-triangle":
        return build_strategy_tree(g, crd_with_common_size(g, 4), mode="auto")
    raise GraphError(f"unknown strategy {name!r}; expected one of {STRATEGIES}")


def _limits(args) -> Limits:
    lim = Limits()
    if getattr(args, "max_terms", None):
        lim = Limits(max_terms=args.max_terms,
                     max_total_terms=max(args.max_terms, lim.max_total_terms))
    return lim


def _cache(args) -> PolyCache:
    directory = getattr(args, "cache_dir", None) or os.environ.get(CACHE_ENV)
    return PolyCache(directory)


def _emit(args, payload: dict, render) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(render(payload))


# -- analyze -----------------------------------------------------------------


def cmd_analyze(args) -> int:
    g = _graph_arg(args.graph)
    cls = sparsity_class(g)
    circuit = is_circuit(g)
    conn = connectivity_class(g)
    payload = {
        "graph": {"vertices": g.n, "edges": g.m},
        "sparsity": cls,
        "circuit": circuit,
        "connectivity": conn,
        "separating_pairs": [[p.u, p.v] for p in separating_pairs(g)],
    }
    if circuit and conn == THREE_CONNECTED:
        payload["admissible_pairs"] = [[v, list(e)] for v, e in admissible_pairs(g)]

    def render(p):
        lines = [f"{p['graph']['vertices']} vertices, {p['graph']['edges']} edges"]
        if p["circuit"]:
            lines.append(f"circuit, {p['connectivity']}")
        else:
            lines.append(
                f"not a circuit ({p['sparsity']}: |E| = {g.m}, 2|V|-2 = {2 * g.n - 2})"
            )
        if p["separating_pairs"]:
            pairs = ",".join("{%d,%d}" % (u, v) for u, v in p["separating_pairs"])
            lines.append(f"separating pairs {pairs}")
        if "admissible_pairs" in p:
            pairs = ", ".join(
                "drop %d add {%d,%d}" % (v, e[0], e[1]) for v, e in p["admissible_pairs"]
            )
            lines.append(f"admissible pairs: {pairs}")
        return "\n".join(lines)

    _emit(args, payload, render)
    return 0


# -- decompose ---------------------------------------------------------------


def cmd_decompose(args) -> int:
    g = _graph_arg(args.graph)
    mode = {"split": "split", "3conn": "auto", "naive": "naive"}[args.mode]
    try:
        if args.mode == "3conn" and connectivity_class(g) != THREE_CONNECTED:
            raise GraphError(
                "the circuit is not 3-connected: use --mode split or naive"
            )
        crds = decompositions(g, mode)
    except GraphError as e:
        if args.mode == "split" and "3-connected" in str(e):
            raise GraphError(f"{e}; use --mode 3conn") from None
        raise
    classes = sorted({iso_class_key(c) for c in crds})
    payload = {
        "mode": args.mode,
        "count": len(crds),
        "isomorphism_classes": len(classes),
        "decompositions": [c.to_json() for c in crds],
    }

    def render(p):
        lines = [
            f"{p['count']} decompositions in {p['isomorphism_classes']} "
            f"isomorphism classes (mode {p['mode']})"
        ]
        for c in p["decompositions"]:
            v1 = len(c["g1"]["vertices"])
            v2 = len(c["g2"]["vertices"])
            lines.append(
                f"  {c['kind']}: parts on {v1} and {v2} vertices, "
                f"eliminate {{{c['edge'][0]},{c['edge'][1]}}}"
            )
        return "\n".join(lines)

    _emit(args, payload, render)
    return 0


# -- crtree ------------------------------------------------------------------


def cmd_crtree(args) -> int:
    g = _graph_arg(args.graph)
    store = None
    stream = enumerate_truncated_trees(g, args.mode)
    trees = list(islice(stream, args.max_trees + 1))
    capped = len(trees) > args.max_trees
    trees = trees[: args.max_trees]
    for t in trees:
        store = t.store
    payload = {
        "mode": args.mode,
        "trees": [
            {
                "nodes": t.node_count(),
                "leaves": len(t.leaves()),
                "truncated": len(t.truncated_nodes()),
                "full": t.is_full(),
            }
            for t in trees
        ],
        "truncated_trees": len(trees),
        "capped": capped,
    }
    if args.format == "json":
        payload["tree_data"] = [tree_to_json(t) for t in trees]
    if args.expand and trees:
        full = expand_tree(trees[0])
        payload["first_tree_expanded"] = {
            "nodes": full.node_count(),
            "leaves": len(full.leaves()),
        }
        if args.format == "json":
            payload["first_tree_expanded"]["tree_data"] = tree_to_json(full)
    if args.store and store is not None:
        with open(args.store, "w", encoding="utf-8") as fh:
            json.dump(store_to_json(store), fh, indent=1)

    def render(p):
        cap = " (capped by --max-trees)" if p["capped"] else ""
        lines = [f"{p['truncated_trees']} truncated CR-trees, mode {p['mode']}{cap}"]
        for i, t in enumerate(p["trees"], start=1):
            full = "full" if t["full"] else f"{t['truncated']} truncated leaves"
            lines.append(f"  tree {i}: {t['nodes']} nodes, {t['leaves']} leaves, {full}")
        if "first_tree_expanded" in p:
            e = p["first_tree_expanded"]
            lines.append(f"  first tree expands to {e['nodes']} nodes ({e['leaves']} leaves)")
        return "\n".join(lines)

    _emit(args, payload, render)
    return 0


# -- poly --------------------------------------------------------------------


def _report_payload(report) -> dict:
    return report.to_json()


def _render_report(p) -> str:
    lines = []
    for s in p["steps"]:
        dim = "-" if s["dimension"] is None else f"{s['dimension']}x{s['dimension']}"
        terms = "-" if s["terms_out"] is None else f"{s['terms_out']:,}"
        t = "-" if s["seconds"] is None else f"{s['seconds']:.2f}s"
        note = f"  [{s['note']}]" if s.get("note") else ""
        lines.append(
            f"  {s['vertices']}v eliminate {{{s['variable'][0]},{s['variable'][1]}}}: "
            f"Sylvester {dim}, hom {s['hom_out']}, {terms} terms, {t}, {s['status']}{note}"
        )
    return "\n".join(lines)


def cmd_poly(args) -> int:
    g = _graph_arg(args.graph)
    if g.n == 4:
        # base case: the only 4-vertex circuit is K4, no tree needed
        if not is_circuit(g):
            raise GraphError("not a circuit")
        poly = k4_circuit_polynomial(tuple(sorted(g.vertices)))
        report = EliminationReport(limits=_limits(args))
        if args.placements:
            report.verification = verify_circuit_polynomial(
                poly, g.vertices, placements=args.placements, seed=args.seed
            )
    else:
        tree = strategy_tree(g, args.strategy)
        poly, report = circuit_polynomial(
            tree,
            limits=_limits(args),
            cache=_cache(args),
            method=args.method,
            verify_placements=args.placements,
            seed=args.seed,
        )
    payload = {"strategy": args.strategy, "report": _report_payload(report)}
    if poly is not None:
        hom = poly.homogeneous_degree()
        payload["polynomial"] = {
            "terms": poly.term_count,
            "homogeneous_degree": None if hom is NOT_HOMOGENEOUS else hom,
            "variables": poly.used_vars(),
        }
        if args.output:
            if args.output.endswith(".txt"):
                from .polyring import poly_to_text

                with open(args.output, "w", encoding="utf-8") as fh:
                    fh.write(poly_to_text(poly))
            else:
                save_poly(poly, args.output)
            payload["output"] = args.output

    def render(p):
        lines = [f"strategy {p['strategy']}: {p['report']['status']}"]
        if p["report"]["steps"]:
            lines.append(_render_report(p["report"]))
        if "polynomial" in p:
            poly_p = p["polynomial"]
            lines.append(
                f"circuit polynomial: {poly_p['terms']:,} terms, "
                f"homogeneous degree {poly_p['homogeneous_degree']}"
            )
            ver = p["report"].get("verification")
            if ver:
                lines.append(
                    f"verification: vanishing={ver['vanishing']} "
                    f"nontrivial={ver['nontrivial']} on {ver['placements']} placements"
                )
            if "output" in p:
                lines.append(f"written to {p['output']}")
        return "\n".join(lines)

    _emit(args, payload, render)
    return 0 if report.status == "Completed" else 2


# -- verify ------------------------------------------------------------------


def cmd_verify(args) -> int:
    g = _graph_arg(args.graph)
    if args.poly.endswith(".txt"):
        with open(args.poly, "r", encoding="utf-8") as fh:
            poly = poly_from_text(fh.read())
    else:
        poly = load_poly(args.poly)
    result = verify_circuit_polynomial(
        poly, g.vertices, placements=args.placements, seed=args.seed
    )
    payload = {
        "vanishing": result.vanishing,
        "nontrivial": result.nontrivial,
        "placements": result.placements,
        "ok": result.ok,
        "terms": poly.term_count,
    }

    def render(p):
        verdict = "OK" if p["ok"] else "FAILED"
        return (
            f"{verdict}: vanishing={p['vanishing']} nontrivial={p['nontrivial']} "
            f"on {p['placements']} exact placements ({p['terms']:,} terms)"
        )

    _emit(args, payload, render)
    return 0 if result.ok else 1


# -- bench -------------------------------------------------------------------

PAPER_TABLES = {
    "name": "paper-tables",
    "repetitions": 3,
    "rows": [
        {
            "graph": "double-banana",
            "strategies": [
                {"name": "2-split", "expect": "Completed", "terms": 1752},
                {"name": "double-triangle", "expect": "ResourceExhausted"},
            ],
        },
        {
            "graph": "rim-glued-7",
            "strategies": [
                {"name": "2-split", "expect": "Completed", "terms": 1_053_933},
                {"name": "common-triangle", "expect": "Completed"},
            ],
        },
        {
            "graph": "spoke-glued-7",
            "strategies": [
                {"name": "2-split", "expect": "Completed", "terms": 2_579_050},
                {"name": "common-triangle", "expect": "Completed"},
            ],
        },
    ],
}

PAPER_TABLES_EXTENDED = {
    "name": "paper-tables-extended",
    "repetitions": 3,
    "rows": PAPER_TABLES["rows"]
    + [
        {
            "graph": "side-glued-8",
            "strategies": [
                {"name": "2-split", "expect": "Completed", "terms": 3_413_204},
                {"name": "double-triangle", "expect": "ResourceExhausted"},
            ],
        },
        {
            "graph": "chain-glued-8",
            "strategies": [
                {"name": "2-split", "expect": "Completed", "terms": 9_223_437},
                {"name": "double-triangle", "expect": "ResourceExhausted"},
            ],
        },
    ],
}

BUNDLED_SUITES = {
    "paper-tables": PAPER_TABLES,
    "paper-tables-extended": PAPER_TABLES_EXTENDED,
}


def _load_suite(spec: str) -> dict:
    if spec in BUNDLED_SUITES:
        return BUNDLED_SUITES[spec]
    if os.path.exists(spec):
        with open(spec, "r", encoding="utf-8") as fh:
            suite = json.load(fh)
        if not isinstance(suite, dict) or "rows" not in suite:
            raise GraphError(f"suite {spec!r} must be an object with a 'rows' list")
        return suite
    raise GraphError(
        f"{spec!r} is neither a file nor a bundled suite "
        f"(bundled: {', '.join(sorted(BUNDLED_SUITES))})"
    )


def cmd_bench(args) -> int:
    suite = _load_suite(args.suite)
    repetitions = args.repetitions or suite.get("repetitions", 5)
    if args.jobs < 1:
        raise GraphError("--jobs must be at least 1")
    limits = _limits(args)
    rows_out = []
    failures = 0
    for row in suite["rows"]:
        name = row["graph"]
        entry = {"graph": name, "strategies": [], "errors": []}
        rows_out.append(entry)
        try:
            g = _graph_arg(name)
            names = [s["name"] for s in row["strategies"]]
            trees = [strategy_tree(g, n) for n in names]
        except (GraphError, StopIteration) as e:
            entry["errors"].append(str(e))
            if any(s.get("expect") == "Completed" for s in row["strategies"]):
                failures += 1
            continue
        reports = compare_strategies(
            g,
            trees,
            labels=names,
            limits=limits,
            repetitions=repetitions,
            seed=args.seed,
            verify_placements=args.placements,
        )
        for spec_row, rep in zip(row["strategies"], reports):
            root = rep.root_step
            item = {
                "name": spec_row["name"],
                "status": rep.status,
                "terms": None if root is None else root.terms_out,
                "median_seconds": rep.timing.get("median_trimmed"),
                "report": rep.to_json(),
            }
            expect = spec_row.get("expect")
            if expect:
                item["expect"] = expect
                item["as_expected"] = rep.status == expect
                if expect == "Completed" and rep.status != "Completed":
                    failures += 1
            want_terms = spec_row.get("terms")
            if want_terms is not None:
                item["expected_terms"] = want_terms
                item["terms_match"] = item["terms"] == want_terms
            entry["strategies"].append(item)
    payload = {
        "suite": suite.get("name", args.suite),
        "repetitions": repetitions,
        "jobs": args.jobs,
        "limits": {"max_terms": limits.max_terms, "max_total_terms": limits.max_total_terms},
        "hardware": hardware_fingerprint(),
        "rows": rows_out,
        "expected_complete_failures": failures,
    }

    def render(p):
        lines = [f"suite {p['suite']}: {p['repetitions']} repetitions per strategy"]
        for row in p["rows"]:
            lines.append(f"\n{row['graph']}")
            for err in row["errors"]:
                lines.append(f"  error: {err}")
            if row["strategies"]:
                lines.append(_render_table(row["strategies"]))
            for s in row["strategies"]:
                marks = []
                if "as_expected" in s and not s["as_expected"]:
                    marks.append(f"expected {s['expect']}, got {s['status']}")
                if s.get("terms_match") is False:
                    marks.append(f"expected {s['expected_terms']:,} terms")
                if marks:
                    lines.append(f"  MISMATCH {s['name']}: {'; '.join(marks)}")
        if p["expected_complete_failures"]:
            lines.append(
                f"\n{p['expected_complete_failures']} expected-complete strategies failed"
            )
        return "\n".join(lines)

    _emit(args, payload, render)
    return 2 if failures else 0


def _render_table(strategies: list[dict]) -> str:
    headers = ["strategy", "syl dim", "hom deg", "terms", "median (s)", "status"]
    rows = [headers]
    for s in strategies:
        root = None
        for step in s["report"]["steps"]:
            root = step
        dim = "-" if root is None or root["dimension"] is None else f"{root['dimension']}x{root['dimension']}"
        hom = "-" if root is None or root["hom_out"] is None else str(root["hom_out"])
        terms = "-" if s["terms"] is None else f"{s['terms']:,}"
        med = "-" if s["median_seconds"] is None else f"{s['median_seconds']:.2f}"
        rows.append([s["name"], dim, hom, terms, med, s["status"]])
    widths = [max(len(r[i]) for r in rows) for i in range(len(headers))]
    out = []
    for r in rows:
        out.append("  " + "  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(out)


# -- parser ------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="rigidity",
        description="Exact circuit polynomials of 2D rigidity circuits "
        "via combinatorial resultant trees.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, seed=False, caps=False, cache=False, placements=None):
        p.add_argument("--format", choices=("json", "text"), default="text")
        if seed:
            p.add_argument("--seed", type=int, default=0)
        if caps:
            p.add_argument("--max-terms", type=int, default=None,
                           help="per-polynomial term cap (default 2e7)")
        if cache:
            p.add_argument("--cache-dir", default=None,
                           help=f"polynomial cache directory (or ${CACHE_ENV})")
        if placements is not None:
            p.add_argument("--placements", type=int, default=placements,
                           help="exact placements for vanishing checks")

    p = sub.add_parser("analyze", help="sparsity and connectivity report")
    p.add_argument("graph", help="graph file or bundled name")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("decompose", help="one-step decompositions")
    p.add_argument("graph")
    p.add_argument("--mode", choices=("naive", "split", "3conn"), default="naive")
    common(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("crtree", help="enumerate truncated CR-trees")
    p.add_argument("graph")
    p.add_argument("--mode", choices=("auto", "splits_only", "naive"), default="auto")
    p.add_argument("--max-trees", type=int, default=25)
    p.add_argument("--expand", action="store_true",
                   help="also expand the first tree to a full tree")
    p.add_argument("--store", default=None, help="write the circuit store as JSON")
    common(p)
    p.set_defaults(func=cmd_crtree)

    p = sub.add_parser("poly", help="compute the circuit polynomial")
    p.add_argument("graph")
    p.add_argument("--strategy", choices=STRATEGIES, default="auto")
    p.add_argument("--method", choices=("minors", "bareiss"), default="minors")
    p.add_argument("-o", "--output", default=None,
                   help="write the polynomial (.txt for text, else binary)")
    common(p, seed=True, caps=True, cache=True, placements=20)
    p.set_defaults(func=cmd_poly)

    p = sub.add_parser("verify", help="verify a stored polynomial against a graph")
    p.add_argument("poly", help="polynomial file (.txt or binary)")
    p.add_argument("graph")
    common(p, seed=True, placements=20)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="strategy comparison suite")
    p.add_argument("suite", help="suite JSON file or bundled name "
                   f"({', '.join(sorted(BUNDLED_SUITES))})")
    p.add_argument("--repetitions", type=int, default=None,
                   help="timing repetitions per strategy (default from suite, else 5)")
    p.add_argument("--jobs", type=int, default=1,
                   help="worker cap (strategies run sequentially; recorded in output)")
    common(p, seed=True, caps=True, cache=True, placements=0)
    p.set_defaults(func=cmd_bench)

    return top


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except ResourceExhausted as e:
        print(f"resource exhaustion: {e}", file=sys.stderr)
        return 2
    except (GraphError, PolyError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except StopIteration:
        print("error: the requested enumeration is empty", file=sys.stderr)
        return 1
    except (EliminationError, AssertionError) as e:
        print(f"internal invariant violation: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
