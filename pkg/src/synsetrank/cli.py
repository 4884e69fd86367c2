"""Command-line front end: ``rank``, ``grid``, ``compare`` and ``gen``."""

from __future__ import annotations

import argparse
import csv
import io
import logging
import os
import shutil
import sys
import tempfile
from pathlib import Path

from .evaluation import (
    DEFAULT_MORO_KS,
    PAPER_GRID,
    GridSpec,
    compare_table,
    grid_search_common,
    grid_search_per_relation,
)
from .graph import (
    augment_with_reverse_labels,
    load_edge_list,
    load_label_weights,
    uniform_weights,
)
from .markov import WalkParams
from .rankers import (
    format_ranking,
    load_frequencies,
    rank_frequency,
    rank_moro,
    rank_pagerank,
    rank_synsetrank,
)
from .synthbench import PlantedSpec, generate_benchmark, load_benchmark, load_dataset

log = logging.getLogger("synsetrank")

METHODS = ("frequency", "moro", "pagerank", "synsetrank")


class CommandError(Exception):
    pass


def _write_atomic(path, text):
    """Write ``text`` to ``path`` via a temp file so failures leave nothing behind."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text, path):
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        _write_atomic(path, text)


def _fmt(x):
    return f"{x:.12g}"


# -- rank ---------------------------------------------------------------------


def cmd_rank(args):
    walk_flags = {"alpha": args.alpha, "beta": args.beta, "steps": args.steps}
    if args.method in ("frequency", "moro"):
        given = [f"--{k}" for k, v in walk_flags.items() if v is not None]
        if given:
            log.warning("--method %s ignores %s", args.method, ", ".join(given))
    if args.method != "moro" and args.top_k is not None:
        log.warning("--method %s ignores --top-k", args.method)

    graph = load_edge_list(args.edges, args.nodes, args.labels)
    base_labels = graph.label_count
    if args.reverse_augment:
        graph = augment_with_reverse_labels(graph)
    if args.weights:
        weights = load_label_weights(
            args.weights, graph.label_count, base_labels if args.reverse_augment else None
        )
    else:
        weights = uniform_weights(graph)
    p0 = load_frequencies(args.freq, graph.node_count)

    if args.method == "frequency":
        ranking = rank_frequency(p0)
    elif args.method == "moro":
        if args.top_k is None:
            raise CommandError("--method moro requires --top-k")
        ranking = rank_moro(graph, p0, args.top_k)
    else:
        missing = [f"--{k}" for k, v in walk_flags.items() if v is None]
        if missing:
            raise CommandError(f"--method {args.method} requires {', '.join(missing)}")
        params = WalkParams(args.alpha, args.beta, args.steps)
        ranker = rank_pagerank if args.method == "pagerank" else rank_synsetrank
        ranking = ranker(graph, weights, p0, params)

    _emit(format_ranking(ranking), args.out)
    return 0


# -- grid ---------------------------------------------------------------------


def _grid_from_args(args):
    return GridSpec(
        tuple(args.alphas) if args.alphas else PAPER_GRID.alphas,
        tuple(args.betas) if args.betas else PAPER_GRID.betas,
        tuple(args.steps_list) if args.steps_list else PAPER_GRID.steps_list,
    )


def _load_many(path, args):
    path = Path(path)
    if (path / "edges.tsv").is_file():
        return [load_dataset(path, args.reverse_augment, args.weights)]
    return load_benchmark(path, args.reverse_augment, args.weights)


GRID_HEADER = ["relation", "method", "alpha", "beta", "steps", "validation_auc", "test_auc"]


def _grid_row(name, method, params, val, test):
    return [name, method, _fmt(params.alpha), _fmt(params.beta), params.steps, _fmt(val), _fmt(test)]


def cmd_grid(args):
    grid = _grid_from_args(args)
    rows, configs = [], []
    if args.common is not None:
        datasets = _load_many(args.common, args)
        res = grid_search_common(datasets, args.method, grid, args.jobs)
        rows.append(_grid_row("common", args.method, res.best_params,
                              res.best_validation_auc, res.mean_test_auc))
        for ds in datasets:
            rows.append(_grid_row(ds.name, args.method, res.best_params,
                                  res.validation_aucs[ds.name], res.test_aucs[ds.name]))
        configs = [("common", p, v) for p, v in res.per_config]
    else:
        if args.data is None:
            raise CommandError("grid needs --data DIR or --common DIR")
        for ds in _load_many(args.data, args):
            res = grid_search_per_relation(ds, args.method, grid, args.jobs)
            rows.append(_grid_row(ds.name, args.method, res.best_params,
                                  res.best_validation_auc, res.test_auc))
            configs.extend((ds.name, p, v) for p, v in res.per_config)

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(GRID_HEADER)
    writer.writerows(rows)
    if args.configs:
        cbuf = io.StringIO()
        cw = csv.writer(cbuf, lineterminator="\n")
        cw.writerow(["relation", "alpha", "beta", "steps", "validation_auc"])
        for name, p, v in configs:
            cw.writerow([name, _fmt(p.alpha), _fmt(p.beta), p.steps, _fmt(v)])
        _write_atomic(args.configs, cbuf.getvalue())
    _emit(buf.getvalue(), args.out)
    return 0


# -- compare ------------------------------------------------------------------


def cmd_compare(args):
    datasets = load_benchmark(args.data, args.reverse_augment, args.weights)
    report = compare_table(datasets, _grid_from_args(args), tuple(args.moro_ks), args.jobs)
    if args.csv:
        _write_atomic(args.csv, report.to_csv())
    sys.stdout.write(report.to_text())
    return 0


# -- gen ----------------------------------------------------------------------


def cmd_gen(args):
    if args.relations < 1:
        raise CommandError("--relations must be at least 1")
    out = Path(args.out)
    if out.exists() and any(out.iterdir()):
        raise CommandError(f"output directory {out} is not empty")
    overrides = {
        k: v for k, v in (
            ("node_count", args.nodes),
            ("label_count", args.labels),
            ("relevant_cluster_size", args.cluster_size),
        ) if v is not None
    }
    template = PlantedSpec(**overrides)
    template.validate()
    out.parent.mkdir(parents=True, exist_ok=True)
    staging = Path(tempfile.mkdtemp(dir=out.parent, prefix=f".{out.name}."))
    try:
        generate_benchmark(staging, args.relations, args.seed, template)
        out.mkdir(exist_ok=True)
        for child in sorted(staging.iterdir()):
            os.replace(child, out / child.name)
    finally:
        shutil.rmtree(staging, ignore_errors=True)
    return 0


# -- parser -------------------------------------------------------------------


def _add_graph_options(p):
    p.add_argument("--weights", help="label<TAB>weight file; unlisted labels weigh 1.0")
    p.add_argument(
        "--no-reverse-augment", dest="reverse_augment", action="store_false",
        help="do not add reversed copies of every edge label",
    )


def _add_grid_options(p):
    p.add_argument("--alphas", type=float, nargs="+", help="taxation grid (default 0.0..1.0 step 0.2)")
    p.add_argument("--betas", type=float, nargs="+", help="self-link grid (default 0.0..1.0 step 0.2)")
    p.add_argument("--steps-list", type=int, nargs="+", help="walk lengths (default 1..5)")
    p.add_argument("--jobs", type=int, default=None,
                   help="worker threads (default: $SYNSETRANK_JOBS or CPU count)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="synsetrank",
        description="Rank graph nodes by relevance with degree-adjusted random walks.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rank", help="rank nodes of one graph")
    p.add_argument("--method", choices=METHODS, required=True)
    p.add_argument("--edges", required=True, help="src<TAB>dst<TAB>label edge list")
    p.add_argument("--freq", required=True, help="node<TAB>frequency file")
    p.add_argument("--nodes", type=int, help="node count (else read from the edge-list header)")
    p.add_argument("--labels", type=int, help="label count (else read from the edge-list header)")
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--top-k", type=int, help="seed count for --method moro")
    p.add_argument("--seed", type=int, default=0, help="accepted for reproducible batch scripts; ranking is deterministic")
    p.add_argument("--out", help="ranking TSV path (default: stdout)")
    _add_graph_options(p)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("grid", help="grid-search walk parameters on validation AUC")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--data", help="relation directory, or a directory of them")
    src.add_argument("--common", help="directory of relations sharing one parameter setting")
    p.add_argument("--method", choices=("pagerank", "synsetrank"), default="synsetrank")
    p.add_argument("--out", help="result CSV path (default: stdout)")
    p.add_argument("--configs", help="also write every grid point's validation AUC here")
    _add_grid_options(p)
    _add_graph_options(p)
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("compare", help="test-AUC table of all six method columns")
    p.add_argument("data", help="directory of relation directories")
    p.add_argument("--csv", help="also write the table as CSV")
    p.add_argument("--moro-ks", type=int, nargs="+", default=list(DEFAULT_MORO_KS))
    _add_grid_options(p)
    _add_graph_options(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("gen", help="generate a planted benchmark")
    p.add_argument("--relations", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--nodes", type=int)
    p.add_argument("--labels", type=int)
    p.add_argument("--cluster-size", type=int)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except (CommandError, ValueError, OSError) as exc:
        print(f"synsetrank {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
