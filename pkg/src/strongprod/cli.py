"""Command line interface: ``strongprod <command> ...``.

Exit status: 0 success, 1 a verified bound was violated (or a check failed),
2 bad input, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from typing import Any, Callable

from . import constructions as cons
from . import graph as gr
from . import io as sio
from . import oracles
from .coloring import INFINITY, ConsistentColoring, DefectParameter, check_consistency, verify_coloring
from .errors import BudgetExceeded, StrongProdError
from .percolation import percolation_sweep

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3

ETA_NAMES = {"star": DefectParameter.CLUSTER_SIZE, "delta": DefectParameter.MAX_DEGREE, "iota": DefectParameter.PROPERNESS}


class StageError(StrongProdError):
    """Unknown stage or missing stage input in a pipeline config."""


# generators and constructions shared by `gen`, `color` and `run` ------------


def make_graph(kind: str, params: dict) -> gr.Graph:
    n = int(params.get("n", 1))
    if kind in ("path", "cycle", "complete", "star", "empty"):
        return gr.generate_basic(kind, n)
    if kind == "hex":
        return gr.generate_hex_grid(n, int(params.get("d", 2)))
    if kind == "grid":
        return gr.grid_product(n, int(params.get("d", 2)))
    if kind == "closure":
        return gr.generate_tree_closure(int(params.get("k", 2)), n)[1]
    if kind == "tree":
        return gr.random_bounded_degree_tree(n, int(params.get("max_degree", 3)), params.get("seed")).graph
    raise StageError(f"unknown graph kind {kind!r}")


GRAPH_KINDS = ("path", "cycle", "complete", "star", "empty", "hex", "grid", "closure", "tree")


@dataclass
class Built:
    graph: gr.Graph
    coloring: Any
    bound: int
    colours: int


def _consistent_path(p: dict) -> Built:
    n, k = int(p["n"]), int(p["k"])
    return Built(gr.path(n), cons.consistent_path_coloring(n, k), k, k + 1)


def _consistent_cycle(p: dict) -> Built:
    n, k = int(p["n"]), int(p["k"])
    return Built(gr.cycle(n), cons.consistent_cycle_coloring(n, k), cons.cycle_clustering_bound(k), k + 1)


def _consistent_tree(p: dict) -> Built:
    k, dmax = int(p["k"]), int(p.get("max_degree", 3))
    tree = gr.random_bounded_degree_tree(int(p["n"]), dmax, p.get("seed"))
    bound = cons.tree_partition_clustering_bound(k, dmax)
    return Built(tree.graph, cons.consistent_tree_coloring(tree, k), bound, k + 1)


def _hexgrid(p: dict) -> Built:
    n, d = int(p["n"]), int(p["d"])
    return Built(gr.grid_product(n, d), cons.hex_grid_coloring(n, d), math.factorial(d), d + 1)


def _tree_product(p: dict) -> Built:
    dmax = int(p.get("max_degree", 3))
    seed = p.get("seed")
    sizes = [int(s) for s in p["sizes"]]
    trees = [gr.random_bounded_degree_tree(s, dmax, None if seed is None else int(seed) + i) for i, s in enumerate(sizes)]
    f = cons.tree_product_coloring(trees, dmax)
    g = gr.strong_product_all([t.graph for t in trees])
    return Built(g, f, cons.tree_product_bound(len(trees), dmax), len(trees) + 1)


def _tensor_paths(p: dict) -> Built:
    n, k, d = int(p["n"]), int(p["k"]), int(p["d"])
    fac = (gr.path(n), cons.consistent_path_coloring(n, k).as_fractional())
    return Built(gr.grid_product(n, d), cons.tensor_coloring([fac] * d), k**d, (k + 1) ** d)


CONSTRUCTIONS: dict[str, Callable[[dict], Built]] = {
    "consistent-path": _consistent_path,
    "consistent-cycle": _consistent_cycle,
    "consistent-tree": _consistent_tree,
    "hexgrid": _hexgrid,
    "tree-product": _tree_product,
    "tensor-paths": _tensor_paths,
}


def _budget(args_or_cfg) -> oracles.OracleBudget:
    if isinstance(args_or_cfg, dict):
        return oracles.OracleBudget(**args_or_cfg) if args_or_cfg else oracles.DEFAULT_BUDGET
    kw = {}
    if args_or_cfg.budget_vertices is not None:
        kw["max_vertices"] = args_or_cfg.budget_vertices
    if args_or_cfg.budget_time is not None:
        kw["time_limit"] = args_or_cfg.budget_time
    return oracles.OracleBudget(**kw)


def _report_dict(graph, coloring, eta: DefectParameter, bound) -> dict:
    frac = coloring.as_fractional() if isinstance(coloring, ConsistentColoring) else coloring
    report = verify_coloring(graph, frac, eta)
    data = sio.report_to_data(report)
    if isinstance(coloring, ConsistentColoring):
        ok, witness = check_consistency(graph, coloring)
        data["consistent"] = ok
        if not ok:
            data["consistency_witness"] = list(witness)
    data["bound"] = bound
    data["within_bound"] = bound is None or report.within(INFINITY if bound == "inf" else bound)
    data["ok"] = data["within_bound"] and data["consistent"] is not False
    return data


def _oracle(graph: gr.Graph, kind: str, params: dict, budget: oracles.OracleBudget) -> dict:
    out: dict[str, Any] = {"oracle": kind, "budget": budget.to_dict()}
    if kind == "chromatic":
        out["value"] = oracles.chromatic_number(graph, budget)
    elif kind == "independence":
        out["value"] = oracles.independence_number(graph, budget)
    elif kind == "clique":
        out["value"] = oracles.clique_number(graph, budget)
    elif kind == "clustered":
        res = oracles.clustered_feasibility(graph, int(params["k"]), int(params["c"]), budget)
        out.update(res.to_dict())
    elif kind == "fractional":
        lo, hi = oracles.fractional_bounds(graph, None, budget)
        out["lower"], out["upper"] = str(lo), str(hi)
    elif kind == "shannon":
        out["d"] = int(params.get("d", 2))
        out["value"] = oracles.shannon_lower_bound(graph, out["d"], budget)
    else:
        raise StageError(f"unknown oracle {kind!r}")
    return out


# the pipeline runner -----------------------------------------------------------


PRESETS: dict[str, Callable[[dict], list[dict]]] = {
    "hexgrid": lambda c: [
        {"stage": "construct", "construction": "hexgrid", "n": c.get("n", 6), "d": c.get("d", 3)},
        {"stage": "verify"},
    ],
    "hexlemma": lambda c: [{"stage": "hexlemma", "n": c.get("n", 4)}],
}


def _stages(config: dict) -> list[dict]:
    if "stages" in config:
        return list(config["stages"])
    name = config.get("pipeline")
    if name not in PRESETS:
        raise StageError(f"unknown pipeline {name!r}; known: {sorted(PRESETS)}")
    return PRESETS[name](config)


def run_experiment(config: dict, out_dir: str | None = None, seed: int | None = None) -> tuple[int, dict]:
    """Run a stage pipeline; returns ``(exit status, result document)``.

    Stages run in order and share the current graph and colouring:
    ``generate``, ``load``, ``construct``, ``verify``, ``oracle``,
    ``hexlemma``, ``percolate``. Results are deterministic given the config
    and seed; output files go to ``out_dir`` when set.
    """
    seed = config.get("seed", 0) if seed is None else seed
    budget = _budget(config.get("budget", {}))
    graph = coloring = None
    promised = None
    results: list[dict] = []
    status = EXIT_OK
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
    for i, stage in enumerate(_stages(config)):
        kind = stage.get("stage")
        entry: dict[str, Any] = {"stage": kind, "index": i}
        if kind == "generate":
            params = {"seed": seed, **stage}
            graph, coloring, promised = make_graph(stage["kind"], params), None, None
            entry.update(kind=stage["kind"], n=graph.n, edges=graph.num_edges)
        elif kind == "load":
            doc = sio.read_document(stage["path"])
            graph = doc.graph if doc.graph is not None else graph
            coloring, promised = doc.coloring, doc.meta.get("bound")
            entry.update(path=stage["path"])
        elif kind == "construct":
            name = stage.get("construction")
            if name not in CONSTRUCTIONS:
                raise StageError(f"unknown construction {name!r}")
            built = CONSTRUCTIONS[name]({"seed": seed, **stage})
            graph, coloring, promised = built.graph, built.coloring, built.bound
            entry.update(construction=name, n=graph.n, colours=built.colours, promised=built.bound)
        elif kind == "verify":
            if graph is None or coloring is None:
                raise StageError("verify needs a graph and a colouring from an earlier stage")
            bound = stage.get("bound", promised)
            data = _report_dict(graph, coloring, ETA_NAMES[stage.get("eta", "star")], bound)
            entry.update(report=data)
            if not data["ok"]:
                status = EXIT_VIOLATION
        elif kind == "oracle":
            if graph is None:
                raise StageError("oracle needs a graph from an earlier stage")
            data = _oracle(graph, stage["oracle"], stage, budget)
            entry.update(result=data)
            expect = stage.get("expect")
            if expect is not None and data.get("status", data.get("value")) != expect:
                status = EXIT_VIOLATION
                entry["expected"] = expect
        elif kind == "hexlemma":
            res = oracles.hex_lemma_check(int(stage["n"]), budget)
            entry.update(result="holds" if res.holds else "counterexample", **res.to_dict())
            if not res.holds:
                status = EXIT_VIOLATION
        elif kind == "percolate":
            if graph is None:
                raise StageError("percolate needs a graph from an earlier stage")
            sweep = percolation_sweep(
                graph,
                stage["densities"],
                int(stage.get("trials", 100)),
                seed,
                stage.get("threshold"),
                float(stage.get("quantile", 0.99)),
            )
            entry.update(summary=json.loads(sweep.to_json()))
            if out_dir:
                name = stage.get("csv", f"percolation_{i}.csv")
                with open(os.path.join(out_dir, name), "w", encoding="utf-8") as fh:
                    fh.write(sweep.to_csv())
                entry["csv"] = name
        else:
            raise StageError(f"unknown pipeline stage {kind!r}")
        results.append(entry)
    doc = {"config": config, "seed": seed, "stages": results, "exit_status": status}
    if out_dir:
        with open(os.path.join(out_dir, "results.json"), "w", encoding="utf-8") as fh:
            fh.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return status, doc


# argparse -------------------------------------------------------------------------


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cmd_gen(args) -> int:
    g = make_graph(args.kind, {"n": args.n, "d": args.d, "k": args.k, "max_degree": args.max_degree, "seed": args.seed})
    _emit(sio.serialize(g), args.out)
    return EXIT_OK


def cmd_product(args) -> int:
    a, b = sio.read_document(args.left).graph, sio.read_document(args.right).graph
    if a is None or b is None:
        raise StageError("both inputs must contain a graph")
    op = {"strong": gr.strong_product, "cartesian": gr.cartesian_product, "direct": gr.direct_product}[args.kind]
    _emit(sio.serialize(op(a, b)), args.out)
    return EXIT_OK


def cmd_color(args) -> int:
    params = {"n": args.n, "k": args.k, "d": args.d, "max_degree": args.max_degree, "seed": args.seed}
    if args.sizes:
        params["sizes"] = [int(s) for s in args.sizes.split(",")]
    params = {key: v for key, v in params.items() if v is not None}
    try:
        built = CONSTRUCTIONS[args.construction](params)
    except KeyError as exc:
        raise StageError(f"missing parameter {exc} for {args.construction}") from None
    doc = sio.Document(graph=built.graph, coloring=built.coloring, meta={"construction": args.construction, "bound": built.bound})
    _emit(sio.to_text(doc), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    doc = sio.read_document(args.document)
    if doc.graph is None or doc.coloring is None:
        raise StageError("document needs a graph and a colouring")
    bound = args.bound if args.bound is not None else doc.meta.get("bound")
    data = _report_dict(doc.graph, doc.coloring, ETA_NAMES[args.eta], bound)
    _emit(_json(data), args.out)
    if not data["ok"]:
        colour, verts = data["witness"]["colour"], data["witness"]["vertices"]
        print(f"bound violated: colour {colour} component {verts}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_oracle(args) -> int:
    doc = sio.read_document(args.document)
    if doc.graph is None:
        raise StageError("document needs a graph")
    data = _oracle(doc.graph, args.kind, {"k": args.k, "c": args.c, "d": args.d}, _budget(args))
    _emit(_json(data), args.out)
    return EXIT_OK


def cmd_hexcheck(args) -> int:
    res = oracles.hex_lemma_check(args.n, _budget(args))
    _emit(_json({"result": "holds" if res.holds else "counterexample", **res.to_dict(_budget(args))}), args.out)
    return EXIT_OK if res.holds else EXIT_VIOLATION


def cmd_percolate(args) -> int:
    doc = sio.read_document(args.document)
    if doc.graph is None:
        raise StageError("document needs a graph")
    densities = [float(x) for x in args.densities.split(",")]
    sweep = percolation_sweep(doc.graph, densities, args.trials, args.seed, args.threshold, args.quantile)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(sweep.to_csv())
    _emit(sweep.to_json() + "\n", args.out)
    return EXIT_OK


def cmd_export(args) -> int:
    doc = sio.read_document(args.document)
    if doc.graph is None:
        raise StageError("document needs a graph")
    _emit(sio.export_dot(doc.graph, doc.coloring), args.out)
    return EXIT_OK


def cmd_run(args) -> int:
    with open(args.config, encoding="utf-8") as fh:
        config = json.load(fh)
    if args.budget_vertices is not None or args.budget_time is not None:
        config = {**config, "budget": {**config.get("budget", {}), **_budget(args).to_dict()}}
    status, doc = run_experiment(config, args.out, args.seed)
    if not args.out:
        sys.stdout.write(_json(doc))
    return status


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="random seed")
    common.add_argument("--budget-vertices", type=int, default=None, help="oracle vertex budget")
    common.add_argument("--budget-time", type=float, default=None, help="oracle time budget in seconds")
    common.add_argument("--out", default=None, help="output file (directory for `run`)")

    parser = argparse.ArgumentParser(prog="strongprod", description="Clustered colourings of strong products.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="generate a graph")
    p.add_argument("kind", choices=GRAPH_KINDS)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--max-degree", type=int, default=3)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("product", parents=[common], help="product of two graph documents")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--kind", choices=("strong", "cartesian", "direct"), default="strong")
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("color", parents=[common], help="build a colouring with a construction")
    p.add_argument("construction", choices=sorted(CONSTRUCTIONS))
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--max-degree", type=int)
    p.add_argument("--sizes", help="comma separated tree sizes for tree-product")
    p.set_defaults(func=cmd_color)

    p = sub.add_parser("verify", parents=[common], help="verify a colouring document")
    p.add_argument("document")
    p.add_argument("--eta", choices=sorted(ETA_NAMES), default="star")
    p.add_argument("--bound", type=int, default=None, help="fail when the parameter exceeds this")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", parents=[common], help="run an exact oracle on a graph document")
    p.add_argument("kind", choices=("chromatic", "independence", "clique", "clustered", "fractional", "shannon"))
    p.add_argument("document")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--c", type=int, default=1)
    p.add_argument("--d", type=int, default=2)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("hexcheck", parents=[common], help="exhaustive Hex side-to-side check on G_n^2")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_hexcheck)

    p = sub.add_parser("percolate", parents=[common], help="coupled site percolation sweep")
    p.add_argument("document")
    p.add_argument("--densities", required=True, help="comma separated densities in (0, 1]")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--threshold", type=int, default=None)
    p.add_argument("--quantile", type=float, default=0.99)
    p.add_argument("--csv", default=None, help="per-trial CSV output path")
    p.set_defaults(func=cmd_percolate)

    p = sub.add_parser("export", parents=[common], help="export a document as DOT")
    p.add_argument("document")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("run", parents=[common], help="run a pipeline config")
    p.add_argument("config")
    p.set_defaults(func=cmd_run)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "percolate" and args.seed is None:
        args.seed = 0
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (StrongProdError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
