"""Command-line pipeline: synth | homophily | infer | evaluate | all.

Exit codes: 0 success, 2 parameter errors (bad flag values), 3 input errors
(missing or malformed files).  Log verbosity comes from the HOMODIFF_LOG
environment variable (debug/info/warning/error; default warning).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .assignment import (
    argmax_assign,
    constrained_assign,
    empirical_distribution,
    read_predictions,
    write_predictions,
)
from .diffusion import (
    DiffusionParams,
    StateFileError,
    read_state,
    run,
    write_state,
)
from .evaluation import UNREACHABLE, EvalReport, evaluate, write_report_csvs
from .graph import InputError, export_edge_list, load_edge_list
from .homophily import (
    communication_matrix,
    social_effect_matrix,
    surrogate_matrix,
    write_matrices_json,
    write_matrix_csv,
)
from .labels import (
    AgeBinning,
    LabelFileError,
    load_ages,
    read_split,
    split_train_validation,
    write_split,
    year_store,
)
from .labels import LabelStore
from .manifest import RunManifest
from .synth import SynthConfig, generate

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_PARAM = 2
EXIT_INPUT = 3

DEFAULT_TAUS = tuple(round(0.05 * i, 2) for i in range(21))

_DELIMS = {"comma": ",", "tab": "\t", "space": " "}


def _configure_logging() -> None:
    name = os.environ.get("HOMODIFF_LOG", "warning").upper()
    level = getattr(logging, name, None)
    if not isinstance(level, int):
        try:
            level = int(name)
        except ValueError:
            level = logging.WARNING
    logging.basicConfig(
        stream=sys.stderr,
        level=level,
        format="%(levelname)s %(name)s: %(message)s",
    )


# ---- argparse value types (failures exit with code 2) ----

def _unit_float(s: str) -> float:
    v = float(s)
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"{s!r} not in [0, 1]")
    return v


def _open_fraction(s: str) -> float:
    v = float(s)
    if not 0.0 < v < 1.0:
        raise argparse.ArgumentTypeError(f"{s!r} not in (0, 1)")
    return v


def _closed_fraction(s: str) -> float:
    v = float(s)
    if not 0.0 < v <= 1.0:
        raise argparse.ArgumentTypeError(f"{s!r} not in (0, 1]")
    return v


def _pos_int(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"{s!r} must be >= 1")
    return v


def _pos_float(s: str) -> float:
    v = float(s)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"{s!r} must be positive")
    return v


def _nonneg_float(s: str) -> float:
    v = float(s)
    if v < 0:
        raise argparse.ArgumentTypeError(f"{s!r} must be non-negative")
    return v


def _taus_list(s: str) -> tuple[float, ...]:
    try:
        values = tuple(float(t) for t in s.split(",") if t.strip() != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad tau list {s!r}") from None
    if not values or any(not 0.0 <= t <= 1.0 for t in values):
        raise argparse.ArgumentTypeError("taus must be a comma list of values in [0, 1]")
    return values


def _bins_arg(s: str) -> tuple[int, ...]:
    try:
        bounds = tuple(int(t) for t in s.split(","))
        AgeBinning(bounds)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad bins {s!r}: {exc}") from None
    return bounds


# ---- shared loading helpers ----

def _delim(args) -> str:
    return _DELIMS[args.delimiter]


def _binning(args) -> AgeBinning:
    return AgeBinning(args.bins) if args.bins else AgeBinning()


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_graph(args, manifest: RunManifest):
    t0 = time.perf_counter()
    g, idmap, stats = load_edge_list(args.edges, delimiter=_delim(args))
    manifest.add_input("edges", args.edges)
    manifest.add_timing("load_graph", time.perf_counter() - t0)
    manifest.stats["graph"] = {
        "nodes": g.node_count,
        "edges": g.edge_count,
        "self_loops_skipped": stats.self_loops_skipped,
        "duplicates_collapsed": stats.duplicates_collapsed,
    }
    return g, idmap


def _load_ages(args, idmap, manifest: RunManifest) -> np.ndarray:
    t0 = time.perf_counter()
    ages, stats = load_ages(args.labels, idmap, delimiter=_delim(args))
    manifest.add_input("labels", args.labels)
    manifest.add_timing("load_labels", time.perf_counter() - t0)
    manifest.stats["labels"] = {
        "labeled_nodes": int((ages >= 0).sum()),
        "unknown_ids_skipped": stats.unknown_ids_skipped,
        "duplicate_rows": stats.duplicate_rows,
    }
    return ages


# ---- subcommands ----

def cmd_synth(args) -> int:
    binning = _binning(args)
    if args.groups != binning.d:
        raise ValueError(
            f"--groups {args.groups} must match the number of age categories ({binning.d}) "
            "so that generated ages bin back to the planted groups"
        )
    if (args.p_in is None) != (args.p_out is None):
        raise ValueError("--p-in and --p-out must be given together")
    if args.p_in is not None:
        config = SynthConfig.from_rates(
            (args.group_size,) * args.groups, args.p_in, args.p_out,
            labeled_fraction=args.labeled_fraction, rng_seed=args.seed,
        )
    else:
        config = SynthConfig.from_mean_degrees(
            args.groups, args.group_size, args.intra_degree, args.inter_degree,
            labeled_fraction=args.labeled_fraction, rng_seed=args.seed,
        )

    manifest = RunManifest("synth", {
        "groups": args.groups,
        "group_size": args.group_size,
        "p_in": args.p_in,
        "p_out": args.p_out,
        "intra_degree": args.intra_degree,
        "inter_degree": args.inter_degree,
        "labeled_fraction": args.labeled_fraction,
        "seed": args.seed,
        "bins": list(binning.upper_bounds),
        "delimiter": args.delimiter,
    })
    out = _outdir(args)

    t0 = time.perf_counter()
    g, full, sampled = generate(config)
    manifest.add_timing("generate", time.perf_counter() - t0)
    manifest.stats["graph"] = {"nodes": g.node_count, "edges": g.edge_count}
    manifest.stats["labels"] = {"full": len(full), "sampled": len(sampled)}

    # external ids are just the stringified internal indices
    from .graph import NodeIdMap

    idmap = NodeIdMap()
    for i in range(g.node_count):
        idmap.add(str(i))

    reps = binning.representative_ages()
    edges_path = out / "edges.csv"
    export_edge_list(g, idmap, edges_path, delimiter=_delim(args))

    def write_labels(path: Path, store: LabelStore) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            cats = store.categories
            for node in store.labeled_nodes():
                fh.write(f"{idmap.external_of(int(node))},{reps[int(cats[node])]}\n")

    sampled_path = out / "labels.csv"
    full_path = out / "labels_full.csv"
    write_labels(sampled_path, sampled)
    write_labels(full_path, full)

    manifest.add_output("edges", edges_path)
    manifest.add_output("labels", sampled_path)
    manifest.add_output("labels_full", full_path)
    manifest.write(out / "manifest.json")
    print(f"synth: {g.node_count} nodes, {g.edge_count} edges, "
          f"{len(sampled)}/{len(full)} labels revealed -> {out}")
    return EXIT_OK


def _homophily_artifacts(g, store, axis_labels, pseudocount, out, manifest, render):
    t0 = time.perf_counter()
    c = communication_matrix(g, store)
    r = surrogate_matrix(g, store)
    effect = social_effect_matrix(c, r, pseudocount)
    manifest.add_timing("homophily", time.perf_counter() - t0)
    manifest.stats["homophily"] = {
        "labeled_edges": c.labeled_edges,
        "skipped_edges": c.skipped_edges,
        "matrix_size": c.k,
    }

    # per-year stores can span unused low years; trim to the observed range
    observed = np.nonzero(store.counts() > 0)[0]
    lo, hi = int(observed.min()), int(observed.max())
    sl = slice(lo, hi + 1)
    cv, rv, ev = c.values[sl, sl], r.values[sl, sl], effect[sl, sl]
    axis = list(axis_labels[sl.start:sl.stop])

    paths = {
        "communication_matrix": out / "communication_matrix.csv",
        "surrogate_matrix": out / "surrogate_matrix.csv",
        "social_effect": out / "social_effect.csv",
    }
    write_matrix_csv(paths["communication_matrix"], cv, axis)
    write_matrix_csv(paths["surrogate_matrix"], rv, axis)
    write_matrix_csv(paths["social_effect"], ev, axis)
    json_path = out / "matrices.json"
    write_matrices_json(json_path, axis, {
        "communication": cv, "surrogate": rv, "social_effect": ev,
    })
    for name, p in paths.items():
        manifest.add_output(name, p)
    manifest.add_output("matrices_json", json_path)

    if render:
        from .figures import save_matrix_figure

        t0 = time.perf_counter()
        fig_paths = {
            "communication_matrix_png": out / "communication_matrix.png",
            "surrogate_matrix_png": out / "surrogate_matrix.png",
            "social_effect_png": out / "social_effect.png",
        }
        save_matrix_figure(fig_paths["communication_matrix_png"], cv, axis,
                           title="communication counts")
        save_matrix_figure(fig_paths["surrogate_matrix_png"], rv, axis,
                           title="surrogate expectation")
        save_matrix_figure(fig_paths["social_effect_png"], ev, axis,
                           title="social effect (log ratio)", diverging=True)
        manifest.add_timing("figures", time.perf_counter() - t0)
        for name, p in fig_paths.items():
            manifest.add_output(name, p)
    return c, r, effect


def cmd_homophily(args) -> int:
    manifest = RunManifest("homophily", {
        "granularity": args.granularity,
        "pseudocount": args.pseudocount,
        "bins": list(_binning(args).upper_bounds),
        "delimiter": args.delimiter,
        "figures": not args.no_figures,
    })
    out = _outdir(args)
    g, idmap = _load_graph(args, manifest)
    ages = _load_ages(args, idmap, manifest)
    if int((ages >= 0).sum()) < 2:
        raise LabelFileError("need at least two labeled nodes present in the graph")

    binning = _binning(args)
    if args.granularity == "category":
        store = LabelStore(len(idmap), binning.d, binning.bin_ages(ages))
        axis = list(binning.names)
    else:
        store = year_store(ages)
        axis = list(range(store.d))

    c, _, effect = _homophily_artifacts(
        g, store, axis, args.pseudocount, out, manifest, not args.no_figures,
    )
    manifest.write(out / "manifest.json")
    diag = np.nanmean(np.diag(effect)) if np.isfinite(np.diag(effect)).any() else float("nan")
    print(f"homophily: {c.labeled_edges} labeled edges "
          f"({c.skipped_edges} skipped), {c.k}x{c.k} cells, "
          f"mean diagonal social effect {diag:.4f} -> {out}")
    return EXIT_OK


def _infer_pipeline(g, idmap, labels, args, out, manifest):
    """split -> init -> run -> assign; writes state, split, predictions."""
    t0 = time.perf_counter()
    split = split_train_validation(
        labels, args.val_fraction, args.seed, stratified=args.stratified_split,
    )
    manifest.add_timing("split", time.perf_counter() - t0)
    manifest.stats["split"] = {
        "seeds": int(split.seeds.size),
        "validation": int(split.validation.size),
    }

    params = DiffusionParams(args.lam, args.max_iters, args.tol)
    t0 = time.perf_counter()
    result = run(
        g, split.seeds, labels, params,
        clamp_seeds=args.clamp_seeds, threads=args.threads,
    )
    manifest.add_timing("diffusion", time.perf_counter() - t0)
    manifest.stats["diffusion"] = {
        "iterations": result.iterations,
        "final_delta": result.final_delta,
        "renormalized_rows": result.renormalized_rows,
    }

    t0 = time.perf_counter()
    pred = argmax_assign(result.state)
    pred_path = out / "predictions.csv"
    write_predictions(pred_path, pred, idmap)
    manifest.add_output("predictions", pred_path)

    constrained_path = None
    if args.constrained:
        if args.constrain_scope == "nonseed":
            scope = np.setdiff1d(np.arange(g.node_count), split.seeds)
        else:
            scope = np.arange(g.node_count)
        target = empirical_distribution(labels)
        cpred = constrained_assign(result.state, target, scope)
        constrained_path = out / "predictions_constrained.csv"
        write_predictions(constrained_path, cpred, idmap)
        manifest.add_output("predictions_constrained", constrained_path)
    manifest.add_timing("assignment", time.perf_counter() - t0)

    state_path = out / "state.csv"
    write_state(state_path, result.state, idmap, meta={
        "lambda": params.lam,
        "iterations": result.iterations,
        "final_delta": result.final_delta,
        "renormalized_rows": result.renormalized_rows,
        "clamp_seeds": bool(args.clamp_seeds),
    })
    manifest.add_output("state", state_path)
    split_path = out / "split.json"
    write_split(split_path, split, idmap)
    manifest.add_output("split", split_path)
    return split, result, pred


def _infer_params_dict(args) -> dict:
    return {
        "lambda": args.lam,
        "max_iters": args.max_iters,
        "tol": args.tol,
        "val_fraction": args.val_fraction,
        "seed": args.seed,
        "stratified_split": args.stratified_split,
        "constrained": args.constrained,
        "constrain_scope": args.constrain_scope,
        "clamp_seeds": args.clamp_seeds,
        "threads": args.threads,
        "bins": list(_binning(args).upper_bounds),
        "delimiter": args.delimiter,
    }


def cmd_infer(args) -> int:
    manifest = RunManifest("infer", _infer_params_dict(args))
    out = _outdir(args)
    g, idmap = _load_graph(args, manifest)
    ages = _load_ages(args, idmap, manifest)
    binning = _binning(args)
    labels = LabelStore(len(idmap), binning.d, binning.bin_ages(ages))

    split, result, pred = _infer_pipeline(g, idmap, labels, args, out, manifest)
    manifest.write(out / "manifest.json")

    from .evaluation import hits

    val_hits = hits(pred, labels, split.validation) if split.validation.size else float("nan")
    print(f"infer: {result.iterations} iterations (delta {result.final_delta:.3e}), "
          f"{split.seeds.size} seeds, validation hits {val_hits:.4f} -> {out}")
    return EXIT_OK


def _print_report(report: EvalReport) -> None:
    print(f"overall hits: {report.overall_hits:.4f} over {report.scope_size} nodes")

    def show(title, points, value_name):
        if not points:
            return
        print(f"{title}:")
        print(f"  {value_name:>12} {'hits':>8} {'count':>8}")
        for p in points:
            value = "unreachable" if p.value == UNREACHABLE else p.value
            print(f"  {value!s:>12} {p.hits:8.4f} {p.count:8d}")

    show("hits by seeds in neighborhood", report.sin, "sin")
    show("hits by distance to seeds", report.dts, "dts")
    show("hits by degree bucket", report.degree, "degree")
    if report.tau:
        print("hits by confidence threshold:")
        print(f"  {'tau':>6} {'hits':>8} {'retained':>9} {'fraction':>9}")
        for p in report.tau:
            h = "   --" if p.hits is None else f"{p.hits:.4f}"
            print(f"  {p.tau:6.2f} {h:>8} {p.retained:9d} {p.retained_fraction:9.4f}")


def _report_artifacts(report: EvalReport, out: Path, manifest: RunManifest, render: bool):
    report_path = out / "report.json"
    report.write_json(report_path)
    manifest.add_output("report", report_path)
    for name, path in write_report_csvs(report, out).items():
        manifest.add_output(f"{name}_csv", path)

    if render:
        from .figures import save_curve_figure, save_threshold_figure

        t0 = time.perf_counter()

        def display(points):
            return [
                dataclasses.replace(p, value="unreachable") if p.value == UNREACHABLE else p
                for p in points
            ]

        curves = [
            ("sin", report.sin, "seeds in neighborhood"),
            ("dts", display(report.dts), "hop distance to seeds"),
            ("degree", report.degree, "degree bucket"),
        ]
        for name, points, xlabel in curves:
            if points:
                path = out / f"{name}.png"
                save_curve_figure(path, points, xlabel=xlabel, title=f"hits by {xlabel}")
                manifest.add_output(f"{name}_png", path)
        if report.tau:
            path = out / "tau.png"
            save_threshold_figure(path, report.tau)
            manifest.add_output("tau_png", path)
        manifest.add_timing("figures", time.perf_counter() - t0)


def cmd_evaluate(args) -> int:
    manifest = RunManifest("evaluate", {
        "taus": list(args.taus) if args.taus else None,
        "bins": list(_binning(args).upper_bounds),
        "delimiter": args.delimiter,
        "figures": not args.no_figures,
    })
    out = _outdir(args)
    g, idmap = _load_graph(args, manifest)
    ages = _load_ages(args, idmap, manifest)
    binning = _binning(args)
    truth = LabelStore(len(idmap), binning.d, binning.bin_ages(ages))

    split = read_split(args.split, idmap)
    manifest.add_input("split", args.split)
    pred = read_predictions(args.predictions, idmap)
    manifest.add_input("predictions", args.predictions)

    state = None
    taus: tuple[float, ...] = ()
    if args.state:
        state, _ = read_state(args.state, idmap)
        manifest.add_input("state", args.state)
        taus = args.taus if args.taus else DEFAULT_TAUS
    elif args.taus:
        raise StateFileError(
            "threshold curve requested via --taus but no --state file given"
        )

    t0 = time.perf_counter()
    report = evaluate(g, pred, truth, split, state=state, taus=taus)
    manifest.add_timing("evaluate", time.perf_counter() - t0)

    _report_artifacts(report, out, manifest, not args.no_figures)
    manifest.write(out / "manifest.json")
    _print_report(report)
    return EXIT_OK


def cmd_all(args) -> int:
    parameters = _infer_params_dict(args)
    parameters.update({
        "granularity": args.granularity,
        "pseudocount": args.pseudocount,
        "taus": list(args.taus) if args.taus else list(DEFAULT_TAUS),
        "figures": not args.no_figures,
    })
    manifest = RunManifest("all", parameters)
    out = _outdir(args)
    g, idmap = _load_graph(args, manifest)
    ages = _load_ages(args, idmap, manifest)
    if int((ages >= 0).sum()) < 2:
        raise LabelFileError("need at least two labeled nodes present in the graph")

    binning = _binning(args)
    if args.granularity == "category":
        hstore = LabelStore(len(idmap), binning.d, binning.bin_ages(ages))
        axis = list(binning.names)
    else:
        hstore = year_store(ages)
        axis = list(range(hstore.d))
    _homophily_artifacts(g, hstore, axis, args.pseudocount, out, manifest,
                         not args.no_figures)

    labels = LabelStore(len(idmap), binning.d, binning.bin_ages(ages))
    split, result, pred = _infer_pipeline(g, idmap, labels, args, out, manifest)

    taus = args.taus if args.taus else DEFAULT_TAUS
    t0 = time.perf_counter()
    report = evaluate(g, pred, labels, split, state=result.state, taus=taus)
    manifest.add_timing("evaluate", time.perf_counter() - t0)
    _report_artifacts(report, out, manifest, not args.no_figures)
    manifest.write(out / "manifest.json")
    _print_report(report)
    return EXIT_OK


# ---- parser ----

def _add_io_args(p, *, labels_required=True):
    p.add_argument("--edges", required=True, help="edge list file")
    p.add_argument("--labels", required=labels_required, help="id,age label file")
    p.add_argument("--delimiter", choices=sorted(_DELIMS), default="comma",
                   help="field delimiter in input files (default comma)")
    p.add_argument("--bins", type=_bins_arg, default=None, metavar="B1,B2,...",
                   help="age category upper bounds (default 24,34,50)")


def _add_infer_args(p):
    p.add_argument("--lambda", dest="lam", type=_unit_float, default=0.5,
                   help="neighbor weight in [0,1] (default 0.5)")
    p.add_argument("--max-iters", type=_pos_int, default=20)
    p.add_argument("--tol", type=_pos_float, default=1e-6,
                   help="L-inf convergence tolerance (default 1e-6)")
    p.add_argument("--val-fraction", type=_open_fraction, default=0.2,
                   help="validation share of labeled nodes (default 0.2)")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument("--stratified-split", action="store_true",
                   help="mirror the label histogram in the validation set")
    p.add_argument("--constrained", action="store_true",
                   help="also write quota-constrained predictions")
    p.add_argument("--constrain-scope", choices=("all", "nonseed"), default="all",
                   help="nodes covered by the constrained assignment")
    p.add_argument("--clamp-seeds", action="store_true",
                   help="reset seed rows to one-hot after each iteration")
    p.add_argument("--threads", type=_pos_int, default=os.cpu_count() or 1,
                   help="worker threads for the diffusion update")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="homodiff",
        description="Demographic inference on communication graphs: "
                    "homophily diagnostics, label diffusion, evaluation.",
    )
    parser.add_argument("--version", action="version", version=f"homodiff {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a planted-homophily benchmark graph")
    p.add_argument("--out", required=True)
    p.add_argument("--groups", type=_pos_int, default=4)
    p.add_argument("--group-size", type=_pos_int, default=2500)
    p.add_argument("--intra-degree", type=_nonneg_float, default=8.0,
                   help="mean same-group degree (default 8)")
    p.add_argument("--inter-degree", type=_nonneg_float, default=3.0,
                   help="mean cross-group degree (default 3)")
    p.add_argument("--p-in", type=_unit_float, default=None,
                   help="within-group edge probability (overrides degrees)")
    p.add_argument("--p-out", type=_unit_float, default=None,
                   help="cross-group edge probability (overrides degrees)")
    p.add_argument("--labeled-fraction", type=_closed_fraction, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bins", type=_bins_arg, default=None, metavar="B1,B2,...")
    p.add_argument("--delimiter", choices=sorted(_DELIMS), default="comma")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("homophily", help="communication, surrogate, and social-effect matrices")
    _add_io_args(p)
    p.add_argument("--granularity", choices=("category", "year"), default="category",
                   help="label axis: binned categories or raw age years")
    p.add_argument("--pseudocount", type=_nonneg_float, default=0.0,
                   help="additive smoothing inside the logs (default 0)")
    p.add_argument("--no-figures", action="store_true", help="skip PNG rendering")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_homophily)

    p = sub.add_parser("infer", help="split labels, diffuse, and assign categories")
    _add_io_args(p)
    _add_infer_args(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("evaluate", help="stratified accuracy report for predictions")
    _add_io_args(p)
    p.add_argument("--split", required=True, help="split JSON from infer")
    p.add_argument("--predictions", required=True, help="prediction CSV")
    p.add_argument("--state", default=None, help="state checkpoint (for the tau curve)")
    p.add_argument("--taus", type=_taus_list, default=None, metavar="T1,T2,...",
                   help="confidence thresholds (needs --state)")
    p.add_argument("--no-figures", action="store_true", help="skip PNG rendering")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("all", help="homophily + infer + evaluate in one output dir")
    _add_io_args(p)
    _add_infer_args(p)
    p.add_argument("--granularity", choices=("category", "year"), default="category")
    p.add_argument("--pseudocount", type=_nonneg_float, default=0.0)
    p.add_argument("--taus", type=_taus_list, default=None, metavar="T1,T2,...")
    p.add_argument("--no-figures", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_all)

    return parser


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on parameter errors
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (InputError, FileNotFoundError, IsADirectoryError,
            PermissionError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM


if __name__ == "__main__":
    sys.exit(main())
