"""ROC-AUC evaluation and grid search over walk parameters."""

from __future__ import annotations

import csv
import io
import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import rankdata

from .graph import weighted_out_degree
from .markov import (
    WalkParams,
    build_row_normalized,
    build_transition,
    initial_state,
    walk_trajectory,
)
from .rankers import (
    Ranking,
    degree_adjust,
    make_ranking,
    moro_scores,
    normalize_frequency,
    rank_frequency,
)

__all__ = [
    "GoldLabels",
    "RelationDataset",
    "GridSpec",
    "GridResult",
    "CommonGridResult",
    "ComparisonReport",
    "PAPER_GRID",
    "DEFAULT_MORO_KS",
    "auc",
    "auc_bruteforce",
    "grid_search_per_relation",
    "grid_search_common",
    "tune_moro",
    "compare_table",
    "load_gold",
    "save_gold",
]

WALK_METHODS = ("pagerank", "synsetrank")
DEFAULT_MORO_KS = (10, 25, 50, 100, 200)


@dataclass(frozen=True, eq=False)
class GoldLabels:
    """Binary relevance labels for an annotated subset of nodes."""

    nodes: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=np.int64).ravel()
        labels = np.asarray(self.labels).astype(bool).ravel()
        if nodes.shape != labels.shape:
            raise ValueError("nodes and labels must have the same length")
        if np.unique(nodes).size != nodes.size:
            raise ValueError("gold labels list a node more than once")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "labels", labels)

    @property
    def positives(self):
        return self.nodes[self.labels]

    @property
    def negatives(self):
        return self.nodes[~self.labels]


def load_gold(path):
    """Read ``node<TAB>0|1`` rows."""
    nodes, labels = [], []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2 or parts[1] not in ("0", "1"):
                raise ValueError(f"{path}:{lineno}: expected 'node<TAB>0|1'")
            try:
                nodes.append(int(parts[0]))
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-integer node id") from None
            labels.append(parts[1] == "1")
    return GoldLabels(np.array(nodes, dtype=np.int64), np.array(labels, dtype=bool))


def save_gold(gold, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for node, lab in zip(gold.nodes.tolist(), gold.labels.tolist()):
            fh.write(f"{node}\t{int(lab)}\n")


def _scores_of(ranking):
    if isinstance(ranking, Ranking):
        return ranking.scores
    return np.asarray(ranking, dtype=np.float64)


def auc(ranking, gold):
    """Area under the ROC curve of ``ranking`` on the gold-labelled nodes.

    Mann-Whitney statistic with mid-ranks, so a tied positive/negative pair
    counts one half. ``ranking`` may be a :class:`Ranking` or a score vector.
    """
    scores = _scores_of(ranking)
    n_pos = int(gold.labels.sum())
    n_neg = gold.labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC undefined: gold labels need both classes")
    if gold.nodes.size and (gold.nodes.min() < 0 or gold.nodes.max() >= scores.size):
        raise ValueError("gold labels reference nodes outside the ranking")
    s = scores[gold.nodes]
    r = rankdata(s, method="average")
    # Mid-ranks are half-integers, so twice the U statistic is an exact integer.
    u2 = int(round(2.0 * r[gold.labels].sum())) - n_pos * (n_pos + 1)
    total2 = 2 * n_pos * n_neg
    # Divide the smaller side so that auc(s) + auc(-s) == 1 holds bitwise.
    if 2 * u2 <= total2:
        return u2 / total2
    return 1.0 - (total2 - u2) / total2


def auc_bruteforce(scores, gold):
    """Pairwise-enumeration AUC; O(P * N), used as an independent check."""
    scores = _scores_of(scores)
    pos = scores[gold.positives]
    neg = scores[gold.negatives]
    if pos.size == 0 or neg.size == 0:
        raise ValueError("AUC undefined: gold labels need both classes")
    wins = 0.0
    for a in pos:
        for b in neg:
            if a > b:
                wins += 1.0
            elif a == b:
                wins += 0.5
    return wins / (pos.size * neg.size)


@dataclass(eq=False)
class RelationDataset:
    """One relation: graph, label weights, frequencies and gold splits."""

    name: str
    graph: object
    weights: np.ndarray
    p0: np.ndarray
    validation: GoldLabels
    test: GoldLabels

    def __post_init__(self):
        self.p0 = normalize_frequency(self.p0)
        if self.p0.size != self.graph.node_count:
            raise ValueError("frequency vector length does not match the graph")
        for split in (self.validation, self.test):
            if not (split.labels.any() and (~split.labels).any()):
                raise ValueError(f"{self.name}: gold split lacks one of the classes")


@dataclass(frozen=True)
class GridSpec:
    """Ordered walk-parameter grid; enumerated alpha-major, then beta, then steps."""

    alphas: tuple
    betas: tuple
    steps_list: tuple

    def __post_init__(self):
        for name in ("alphas", "betas", "steps_list"):
            vals = tuple(getattr(self, name))
            if not vals:
                raise ValueError(f"grid {name} must be non-empty")
            object.__setattr__(self, name, vals)
        tuple(self)  # WalkParams rejects out-of-range values

    def __iter__(self):
        for a, b, t in itertools.product(self.alphas, self.betas, self.steps_list):
            yield WalkParams(float(a), float(b), int(t))

    def __len__(self):
        return len(self.alphas) * len(self.betas) * len(self.steps_list)


PAPER_GRID = GridSpec(
    alphas=tuple(round(0.2 * i, 1) for i in range(6)),
    betas=tuple(round(0.2 * i, 1) for i in range(6)),
    steps_list=(1, 2, 3, 4, 5),
)


@dataclass
class GridResult:
    method: str
    best_params: WalkParams
    best_validation_auc: float
    per_config: list
    test_auc: float


@dataclass
class CommonGridResult:
    method: str
    best_params: WalkParams
    best_validation_auc: float
    per_config: list
    test_aucs: dict
    mean_test_auc: float
    validation_aucs: dict = field(default_factory=dict)


def _start_distribution(ds, method):
    if method == "pagerank":
        return normalize_frequency(ds.p0)
    if method == "synsetrank":
        return degree_adjust(ds.p0, weighted_out_degree(ds.graph, ds.weights))
    raise ValueError(f"unknown walk method {method!r}; expected one of {WALK_METHODS}")


def _cell_scores(q_prime, start, alpha, beta, steps_list):
    """Walk scores for one (alpha, beta) cell at every requested step count."""
    ts = build_transition(q_prime, start, (alpha, beta))
    traj = walk_trajectory(ts, initial_state(start), max(steps_list))
    return {t: traj[t - 1][:-1] for t in steps_list}


def _grid_validation_aucs(ds, method, grid, jobs=None):
    q_prime = build_row_normalized(ds.graph, ds.weights)
    steps = tuple(int(t) for t in grid.steps_list)
    cells = list(itertools.product(grid.alphas, grid.betas))
    try:
        start = _start_distribution(ds, method)
    except ValueError as exc:
        # Config-independent failure: every grid point would fail, report the first.
        first = next(iter(grid))
        raise ValueError(
            f"{ds.name}: {method} failed at alpha={first.alpha}, beta={first.beta}, "
            f"steps={first.steps}: {exc}"
        ) from exc

    def evaluate(cell):
        alpha, beta = cell
        try:
            by_t = _cell_scores(q_prime, start, alpha, beta, steps)
        except ValueError as exc:
            raise ValueError(
                f"{ds.name}: {method} failed at alpha={alpha}, beta={beta}: {exc}"
            ) from exc
        return [
            (WalkParams(float(alpha), float(beta), t),
             auc(make_ranking(by_t[t], ds.p0), ds.validation))
            for t in steps
        ]

    jobs = _resolve_jobs(jobs)
    if jobs > 1 and len(cells) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(evaluate, cells))
    else:
        chunks = [evaluate(c) for c in cells]
    return [row for chunk in chunks for row in chunk]


def _argmax_first(values):
    # Strict > keeps the earliest config on ties.
    best = 0
    for i, v in enumerate(values):
        if v > values[best]:
            best = i
    return best


def _resolve_jobs(jobs):
    if jobs is None:
        env = os.environ.get("SYNSETRANK_JOBS")
        jobs = int(env) if env else (os.cpu_count() or 1)
    return max(1, int(jobs))


def score_walk(ds, method, params):
    """Node scores of ``method`` on ``ds`` at ``params``."""
    q_prime = build_row_normalized(ds.graph, ds.weights)
    start = _start_distribution(ds, method)
    return _cell_scores(q_prime, start, params.alpha, params.beta, (params.steps,))[
        params.steps
    ]


def grid_search_per_relation(ds, method, grid=PAPER_GRID, jobs=None):
    """Pick the validation-AUC-maximising grid point; report its test AUC.

    Every configuration is evaluated. Ties go to the first configuration in
    enumeration order.
    """
    return _per_relation_from_table(
        ds, method, _grid_validation_aucs(ds, method, grid, jobs)
    )


def _per_relation_from_table(ds, method, per_config):
    best = _argmax_first([v for _, v in per_config])
    params, val = per_config[best]
    test = auc(make_ranking(score_walk(ds, method, params), ds.p0), ds.test)
    return GridResult(method, params, val, per_config, test)


def grid_search_common(datasets, method, grid=PAPER_GRID, jobs=None):
    """Pick one grid point maximising the unweighted mean validation AUC."""
    datasets = list(datasets)
    if not datasets:
        raise ValueError("common grid search needs at least one dataset")
    tables = [_grid_validation_aucs(ds, method, grid, jobs) for ds in datasets]
    return _common_from_tables(datasets, method, tables)


def _common_from_tables(datasets, method, tables):
    configs = [p for p, _ in tables[0]]
    means = [float(np.mean([tab[i][1] for tab in tables])) for i in range(len(configs))]
    best = _argmax_first(means)
    params = configs[best]
    test_aucs = {}
    val_aucs = {}
    for ds, tab in zip(datasets, tables):
        val_aucs[ds.name] = tab[best][1]
        test_aucs[ds.name] = auc(
            make_ranking(score_walk(ds, method, params), ds.p0), ds.test
        )
    return CommonGridResult(
        method,
        params,
        means[best],
        list(zip(configs, means)),
        test_aucs,
        float(np.mean(list(test_aucs.values()))),
        val_aucs,
    )


def tune_moro(ds, ks=DEFAULT_MORO_KS):
    """Choose Moro's ``top_k`` on validation AUC; returns ``(k, val_auc, test_auc)``."""
    n = ds.graph.node_count
    ks = [k for k in ks if 1 <= k <= n] or [min(n, max(ks))]
    vals = [auc(moro_scores(ds.graph, ds.p0, k)[0], ds.validation) for k in ks]
    best = _argmax_first(vals)
    k = ks[best]
    return k, vals[best], auc(moro_scores(ds.graph, ds.p0, k)[0], ds.test)


METHOD_COLUMNS = (
    "Frequency",
    "Moro",
    "PageRank",
    "PageRank (common)",
    "SynRank",
    "SynRank (common)",
)


@dataclass
class ComparisonReport:
    """Test AUC per relation and method, plus the tuned settings behind them."""

    relations: list
    table: np.ndarray
    details: dict = field(default_factory=dict)

    @property
    def averages(self):
        return self.table.mean(axis=0)

    def column(self, name):
        return self.table[:, METHOD_COLUMNS.index(name)]

    def rows(self):
        body = [[name] + [f"{v:.4f}" for v in row] for name, row in zip(self.relations, self.table)]
        body.append(["Average AUC"] + [f"{v:.4f}" for v in self.averages])
        return body

    def to_text(self):
        header = ["Relation", *METHOD_COLUMNS]
        rows = [header] + self.rows()
        widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
        lines = []
        for j, r in enumerate(rows):
            cells = [r[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(r[1:], widths[1:])]
            lines.append("  ".join(cells).rstrip())
            if j == 0 or j == len(rows) - 2:
                lines.append("-" * len(lines[-1]))
        return "\n".join(lines) + "\n"

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["relation", *METHOD_COLUMNS])
        writer.writerows(self.rows())
        return buf.getvalue()


def compare_table(datasets, grid=PAPER_GRID, moro_ks=DEFAULT_MORO_KS, jobs=None):
    """Test AUC of all six method columns on every dataset."""
    datasets = list(datasets)
    if not datasets:
        raise ValueError("comparison needs at least one dataset")

    details = {"moro_k": {}, "pagerank": {}, "synsetrank": {}}
    tables = {"pagerank": [], "synsetrank": []}
    table = np.zeros((len(datasets), len(METHOD_COLUMNS)))
    for i, ds in enumerate(datasets):
        table[i, 0] = auc(rank_frequency(ds.p0), ds.test)
        k, _, table[i, 1] = tune_moro(ds, moro_ks)
        details["moro_k"][ds.name] = k
        for col, method in ((2, "pagerank"), (4, "synsetrank")):
            per_config = _grid_validation_aucs(ds, method, grid, jobs)
            tables[method].append(per_config)
            res = _per_relation_from_table(ds, method, per_config)
            table[i, col] = res.test_auc
            details[method][ds.name] = res.best_params

    for col, method in ((3, "pagerank"), (5, "synsetrank")):
        common = _common_from_tables(datasets, method, tables[method])
        table[:, col] = [common.test_aucs[ds.name] for ds in datasets]
        details[f"{method}_common"] = common.best_params

    return ComparisonReport([ds.name for ds in datasets], table, details)
