"""Command-line entry point binding generation, solving, decomposition,
transformation, verification, the exact oracle, and report emission.

Exit codes: 0 success, 1 contract/input errors (including failed
verification), 2 usage errors, 3 exhausted resource budgets.  Logging
level comes from the DOMRECON_LOG environment variable (error, info,
debug).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import domset, plotting, torus
from .bench import run_bench
from .errors import InputError, ResourceLimitError
from .exactgap import DEFAULT_MAX_STATES, exact_gap
from .graph import Graph
from .graphio import (graph_to_json, read_graph, read_graph_json,
                      read_vertex_set, write_dot)
from .reconfig import (DEFAULT_MOVE_CAP, load_sequence, route_via_minimum,
                       save_sequence, transform, verify_sequence)
from .septree import GridCoords, build_tree, load_tree, save_tree

log = logging.getLogger("domrecon.cli")


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    _configure_logging()
    try:
        if getattr(args, "config", None):
            _apply_config(args, argv)
        return args.handler(args)
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 3
    except (InputError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _configure_logging() -> None:
    level = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}.get(
        os.environ.get("DOMRECON_LOG", "error").lower(), logging.ERROR)
    logging.basicConfig(level=level, format="%(name)s %(levelname)s %(message)s")


def _apply_config(args: argparse.Namespace, argv: list[str] | None) -> None:
    """Fill unset flags from the config file; explicitly given flags win."""
    config = json.loads(Path(args.config).read_text(encoding="utf-8"))
    if not isinstance(config, dict):
        raise InputError("config file must hold a JSON object of flag defaults")
    shadow = _build_parser()
    _suppress_defaults(shadow)
    explicit = shadow.parse_args(argv)
    for key, value in config.items():
        dest = key.replace("-", "_")
        if hasattr(args, dest) and not hasattr(explicit, dest):
            setattr(args, dest, value)


def _suppress_defaults(parser: argparse.ArgumentParser) -> None:
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            for child in action.choices.values():
                _suppress_defaults(child)
        elif action.option_strings:
            action.default = argparse.SUPPRESS


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="domrecon",
        description="dominating-set reconfiguration toolkit")
    parser.add_argument("--config", help="JSON file of flag defaults (flags win)")
    parser.add_argument("--threads", type=int, default=1,
                        help="upper cap on internal parallelism (current code is sequential)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("torus", help="toroidal instance generation and diagnostics")
    tsub = p.add_subparsers(dest="subcommand", required=True)
    gen = tsub.add_parser("gen", help="build the order-5k^2 instance")
    gen.add_argument("--k", type=int, required=True)
    gen.add_argument("--out", required=True)
    gen.set_defaults(handler=_cmd_torus_gen)
    diag = tsub.add_parser("diagnose", help="type counts and boundary diagnostics")
    diag.add_argument("--inst", required=True)
    diag.add_argument("--set", dest="set_path", required=True)
    diag.set_defaults(handler=_cmd_torus_diagnose)

    p = sub.add_parser("domset", help="dominating-set solvers")
    dsub = p.add_subparsers(dest="subcommand", required=True)
    solve = dsub.add_parser("solve")
    solve.add_argument("--input", required=True)
    solve.add_argument("--mode", choices=["exact", "greedy"], default="exact")
    solve.add_argument("--budget", type=int, default=domset.DEFAULT_BUDGET,
                       help="search-node budget for exact mode")
    solve.add_argument("--max-n", type=int, default=None,
                       help="override the exact-mode size guard")
    solve.add_argument("--out")
    solve.set_defaults(handler=_cmd_domset_solve)

    p = sub.add_parser("septree", help="balanced separator trees")
    ssub = p.add_subparsers(dest="subcommand", required=True)
    build = ssub.add_parser("build")
    build.add_argument("--input", required=True)
    build.add_argument("--alpha", type=float, default=0.5)
    build.add_argument("--strategy", choices=["grid-cut", "bfs-level", "exact"],
                       default="bfs-level")
    build.add_argument("--out", required=True)
    build.set_defaults(handler=_cmd_septree_build)

    p = sub.add_parser("reconfig", help="transformations and verification")
    rsub = p.add_subparsers(dest="subcommand", required=True)
    run = rsub.add_parser("run")
    run.add_argument("--input", required=True)
    run.add_argument("--from", dest="from_path", required=True)
    run.add_argument("--to", dest="to_path", required=True)
    run.add_argument("--tree", required=True)
    run.add_argument("--route-via-minimum", action="store_true")
    run.add_argument("--fallback", choices=["error", "greedy"], default="error",
                     help="behavior when the exact solver budget runs out")
    run.add_argument("--budget", type=int, default=domset.DEFAULT_BUDGET)
    run.add_argument("--max-moves", type=int, default=DEFAULT_MOVE_CAP)
    run.add_argument("--out", required=True)
    run.set_defaults(handler=_cmd_reconfig_run)
    verify = rsub.add_parser("verify")
    verify.add_argument("--input", required=True)
    verify.add_argument("--seq", required=True)
    verify.set_defaults(handler=_cmd_reconfig_verify)

    p = sub.add_parser("exactgap", help="exact reconfiguration-gap oracle")
    p.add_argument("--input", required=True)
    p.add_argument("--from", dest="from_path", required=True)
    p.add_argument("--to", dest="to_path", required=True)
    p.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)
    p.add_argument("--max-n", type=int, default=20)
    p.set_defaults(handler=_cmd_exactgap)

    p = sub.add_parser("bench", help="width-overhead campaign (CSV + markdown + figure)")
    p.add_argument("--out-dir", default="bench-out")
    p.add_argument("--k", default="4,8,12", help="comma-separated torus sides")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--count", type=int, default=10, help="random instances to add")
    p.add_argument("--alpha", type=float, default=0.5)
    p.set_defaults(handler=_cmd_bench)

    p = sub.add_parser("export", help="DOT/SVG/PNG renderings")
    esub = p.add_subparsers(dest="subcommand", required=True)
    eg = esub.add_parser("graph")
    eg.add_argument("--input", required=True)
    eg.add_argument("--set", dest="set_path")
    eg.add_argument("--out", required=True)
    eg.set_defaults(handler=_cmd_export_graph)
    et = esub.add_parser("tree")
    et.add_argument("--tree", required=True)
    et.add_argument("--out", required=True)
    et.set_defaults(handler=_cmd_export_tree)
    es = esub.add_parser("sequence")
    es.add_argument("--input", required=True)
    es.add_argument("--seq", required=True)
    es.add_argument("--out", required=True)
    es.set_defaults(handler=_cmd_export_sequence)

    return parser


def _emit(obj: dict, out: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# -- torus ---------------------------------------------------------------


def _cmd_torus_gen(args) -> int:
    inst = torus.build_torus(args.k)
    obj = graph_to_json(inst.graph, inst.labels())
    obj.update({
        "k": inst.k,
        "d_box": sorted(inst.d_box),
        "d_circ": sorted(inst.d_circ),
        "pairs": [[a, b] for a, b in inst.pairs],
    })
    if inst.warnings:
        obj["warnings"] = list(inst.warnings)
    _emit(obj, args.out)
    print(f"torus k={inst.k}: n={inst.n}, |d_box|=|d_circ|={len(inst.d_box)}, "
          f"written to {args.out}")
    return 0


def _load_instance(path: str) -> torus.TorusInstance:
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    g, labels = read_graph_json(json.dumps(obj))
    coord_map = None
    if labels and len(labels) == g.n:
        coord_map = {v: tuple(int(x) for x in labels[v].split(",")) for v in labels}
    return torus.from_components(
        int(obj["k"]), g, obj["d_box"], obj["d_circ"], obj["pairs"], coord_map)


def _cmd_torus_diagnose(args) -> int:
    inst = _load_instance(args.inst)
    members = read_vertex_set(args.set_path, n=inst.n)
    counts = torus.type_counts(inst, members)
    p_prime, p_star, p_star_star = torus.boundary_sets(inst, members)
    ineff = torus.inefficient_vertices(inst.graph, members)
    _emit({
        "k": inst.k,
        "n": inst.n,
        "set_size": len(members),
        "is_dominating": inst.graph.is_dominating(members),
        "type_counts": {t.value: counts[t] for t in torus.PairType},
        "p_prime_left": len(p_prime),
        "p_star": len(p_star),
        "p_star_star": len(p_star_star),
        "inefficient": len(ineff),
    }, None)
    return 0


# -- domset ----------------------------------------------------------------


def _cmd_domset_solve(args) -> int:
    g = read_graph(args.input)
    if args.mode == "exact":
        max_n = args.max_n if args.max_n is not None else domset.DEFAULT_MAX_N
        size, members = domset.gamma_exact(g, max_n=max_n, budget=args.budget)
        certified = True
    else:
        members = domset.greedy_dominating(g)
        size = len(members)
        certified = False
    _emit({"size": size, "set": sorted(members), "certified": certified}, args.out)
    return 0


# -- septree -----------------------------------------------------------------


def _grid_coords_from(path: str, g: Graph) -> GridCoords | None:
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    labels = obj.get("labels")
    if not labels or len(labels) != g.n:
        return None
    try:
        pos = {}
        svals = []
        for key, text in labels.items():
            s, t, _ = (int(x) for x in str(text).split(","))
            pos[int(key)] = (s, t)
            svals.append(max(s, t))
        k = int(obj.get("k", max(svals) + 1))
        return GridCoords(k, pos)
    except (TypeError, ValueError):
        return None


def _cmd_septree_build(args) -> int:
    g = read_graph(args.input)
    coords = None
    if args.strategy == "grid-cut" and args.input.endswith(".json"):
        coords = _grid_coords_from(args.input, g)
        if coords is None:
            log.info("no usable coordinate labels in %s; grid-cut will fall back "
                     "to bfs-level candidates", args.input)
    tree = build_tree(g, args.alpha, args.strategy, coords=coords)
    save_tree(tree, args.out)
    print(f"tree: depth={tree.depth}, nodes={len(tree.nodes)}, "
          f"W={tree.max_path_weight()}, written to {args.out}")
    return 0


# -- reconfig ------------------------------------------------------------------


def _cmd_reconfig_run(args) -> int:
    g = read_graph(args.input)
    d = read_vertex_set(args.from_path, n=g.n)
    d_prime = read_vertex_set(args.to_path, n=g.n)
    tree = load_tree(args.tree)
    if args.route_via_minimum:
        seq = route_via_minimum(g, d, d_prime, tree, budget=args.budget,
                                fallback=args.fallback, max_moves=args.max_moves)
    else:
        certified = len(d_prime) == domset.gamma_lower_bound_regular(g)
        if certified:
            log.info("target size meets the degree lower bound; width bound certified")
        seq = transform(g, d, d_prime, tree, d_prime_minimum=certified,
                        max_moves=args.max_moves)
    report = verify_sequence(g, seq)
    if not report.valid:
        print(f"error: emitted sequence failed verification: {report.first_violation}",
              file=sys.stderr)
        return 1
    save_sequence(seq, args.out)
    bound = seq.guarantee.bound if seq.guarantee else None
    print(f"sequence: {len(seq.moves)} moves, width {seq.width}"
          + (f", certified bound {bound}" if bound is not None else "")
          + f", written to {args.out}")
    return 0


def _cmd_reconfig_verify(args) -> int:
    g = read_graph(args.input)
    seq = load_sequence(args.seq)
    report = verify_sequence(g, seq)
    _emit(report.to_json(), None)
    return 0 if report.valid else 1


# -- exactgap -------------------------------------------------------------------


def _cmd_exactgap(args) -> int:
    g = read_graph(args.input)
    d = read_vertex_set(args.from_path, n=g.n)
    d_prime = read_vertex_set(args.to_path, n=g.n)
    report = exact_gap(g, d, d_prime, max_n=args.max_n, max_states=args.max_states)
    _emit(report.to_json(), None)
    return 0


# -- bench and export ------------------------------------------------------------


def _cmd_bench(args) -> int:
    ks = [int(x) for x in str(args.k).split(",") if x.strip()]
    rows = run_bench(args.out_dir, ks=ks, seed=args.seed,
                     random_count=args.count, alpha=args.alpha)
    print(f"bench: {len(rows)} instances, artifacts in {args.out_dir}")
    return 0


def _cmd_export_graph(args) -> int:
    obj = json.loads(Path(args.input).read_text(encoding="utf-8")) \
        if args.input.endswith(".json") else None
    g = read_graph(args.input)
    labels = None
    if obj and "labels" in obj:
        labels = {int(k): str(v) for k, v in obj["labels"].items()}
    highlight = read_vertex_set(args.set_path, n=g.n) if args.set_path else None
    if args.out.endswith(".dot"):
        write_dot(g, args.out, labels=labels, highlight=highlight)
    else:
        plotting.draw_graph(g, args.out, labels=labels, highlight=highlight)
    print(f"graph rendering written to {args.out}")
    return 0


def _cmd_export_tree(args) -> int:
    tree = load_tree(args.tree)
    if args.out.endswith(".dot"):
        lines = ["digraph tree {"]
        for i, node in enumerate(tree.nodes):
            lines.append(f'  {i} [label="{len(node.part)}"];')
            if node.children:
                for bit, child in enumerate(node.children):
                    lines.append(f'  {i} -> {child} [label="{bit}"];')
        lines.append("}")
        Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    else:
        plotting.draw_tree(tree, args.out)
    print(f"tree rendering written to {args.out}")
    return 0


def _cmd_export_sequence(args) -> int:
    g = read_graph(args.input)
    seq = load_sequence(args.seq)
    bound = seq.guarantee.bound if seq.guarantee else None
    plotting.plot_width_profile(seq, args.out, bound=bound)
    print(f"width profile written to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
