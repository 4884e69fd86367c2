"""Exit criteria. Each test records one PASS/FAIL line in the terminal summary."""

import csv
import time

import numpy as np
import pytest

from conftest import make_g4_fwd, random_graph, record_criterion
from synsetrank.cli import main
from synsetrank.evaluation import PAPER_GRID, GoldLabels, auc, auc_bruteforce, grid_search_common
from synsetrank.graph import LabeledGraph, augment_with_reverse_labels, uniform_weights, weighted_out_degree
from synsetrank.markov import (
    WalkParams,
    build_row_normalized,
    build_transition,
    initial_state,
    monte_carlo_walk,
    walk,
    walk_trajectory,
)
from synsetrank.rankers import degree_adjust, rank_pagerank, rank_synsetrank
from synsetrank.synthbench import PlantedSpec, benchmark_specs, generate_planted

GRID_VALUES = PAPER_GRID.alphas


@pytest.fixture(scope="module")
def random_graphs():
    rng = np.random.default_rng(20240501)
    graphs = []
    for _ in range(100):
        n = int(rng.integers(1, 501))
        n_labels = int(rng.integers(1, 9))
        aug = bool(rng.integers(2))
        if aug:
            n_labels = max(1, n_labels // 2)  # at most 8 labels after augmentation
        graphs.append((random_graph(rng, n, n_labels, augment=aug), rng.dirichlet(np.ones(n))))
    return graphs


def test_c1_row_stochasticity(random_graphs):
    t0 = time.perf_counter()
    worst = 0.0
    dangling_rows = 0
    for g, restart in random_graphs:
        qp = build_row_normalized(g, uniform_weights(g))
        dangling_rows += int(np.sum(np.diff(qp.indptr) == 0))
        for a in GRID_VALUES:
            for b in GRID_VALUES:
                ts = build_transition(qp, restart, (a, b))
                worst = max(worst, float(np.max(np.abs(ts.row_sums() - 1.0))))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-12 and elapsed <= 30 and dangling_rows > 0
    record_criterion(1, "row stochasticity incl. dangling rows", ok,
                     f"max |row sum - 1| = {worst:.2e}, {dangling_rows} dangling rows, {elapsed:.1f}s")
    assert dangling_rows > 0
    assert worst <= 1e-12
    assert elapsed <= 30


def test_c2_mass_conservation(random_graphs):
    worst = 0.0
    for g, restart in random_graphs:
        qp = build_row_normalized(g, uniform_weights(g))
        for a in GRID_VALUES:
            for b in GRID_VALUES:
                ts = build_transition(qp, restart, (a, b))
                traj = walk_trajectory(ts, initial_state(restart), 50)
                worst = max(worst, max(abs(p.sum() - 1.0) for p in traj))
    record_criterion(2, "mass conservation t = 1..50", worst <= 1e-10, f"max drift {worst:.2e}")
    assert worst <= 1e-10


def test_c3_worked_fixture_g4():
    g4 = augment_with_reverse_labels(make_g4_fwd())
    w = uniform_weights(g4)
    p0 = np.array([0.5, 0.5, 0.0, 0.0])
    params = WalkParams(0.0, 0.0, 1)
    sr = rank_synsetrank(g4, w, p0, params).scores
    pr = rank_pagerank(g4, w, p0, params).scores
    err_sr = np.max(np.abs(sr - [0.2, 0.2, 0.4, 0.2]))
    err_pr = np.max(np.abs(pr - [0.25, 1 / 6, 5 / 12, 1 / 6]))
    ok = err_sr <= 1e-12 and err_pr <= 1e-12
    record_criterion(3, "G4 worked fixture", ok, f"errors {err_sr:.1e} / {err_pr:.1e}")
    assert err_sr <= 1e-12
    assert err_pr <= 1e-12


def _equal_influence_error(g, p0):
    w = uniform_weights(g)
    d = weighted_out_degree(g, w)
    p_hat = degree_adjust(p0, d)
    ts = build_transition(build_row_normalized(g, w), p_hat, (0.0, 0.0))
    q = ts.matrix.toarray()
    mult = sum(m.toarray() for m in g.adjacency)
    z = float(np.sum(p0 / p0.sum() * d))
    worst = 0.0
    for i in np.flatnonzero(d > 0):
        for j in np.flatnonzero(mult[i]):
            delivered = p_hat[i] * q[i, j]  # mass moved i -> j in one step
            per_edge = delivered / mult[i, j]
            worst = max(worst, abs(per_edge - p0[i] / p0.sum() / z))
    return worst


def test_c4_equal_influence():
    worst = _equal_influence_error(augment_with_reverse_labels(make_g4_fwd()), np.array([0.5, 0.5, 0, 0]))
    rng = np.random.default_rng(77)
    for _ in range(50):
        n = int(rng.integers(2, 80))
        g = random_graph(rng, n, int(rng.integers(1, 4)))
        p0 = rng.random(n) * (rng.random(n) < 0.5)
        d = weighted_out_degree(g, uniform_weights(g))
        p0[int(np.argmax(d))] += 1.0
        worst = max(worst, _equal_influence_error(g, p0))
    record_criterion(4, "equal per-edge influence under degree adjustment", worst <= 1e-12,
                     f"max error {worst:.1e}")
    assert worst <= 1e-12


def test_c5_monte_carlo_oracle():
    rng = np.random.default_rng(5)
    g = random_graph(rng, 200, 4, density=4.0 / 200, augment=True)
    p0 = rng.random(200) * (rng.random(200) < 0.3)
    p0[0] += 0.5
    p0 /= p0.sum()
    ts = build_transition(build_row_normalized(g, uniform_weights(g)), p0, (0.2, 0.2))
    start = initial_state(p0)
    t0 = time.perf_counter()
    mc = monte_carlo_walk(ts, start, 3, 10**6, seed=2024)
    elapsed = time.perf_counter() - t0
    err = float(np.max(np.abs(walk(ts, start, 3) - mc)))
    ok = err <= 5e-3 and elapsed <= 60
    record_criterion(5, "Monte-Carlo oracle, 1e6 walkers", ok, f"max error {err:.1e}, {elapsed:.1f}s")
    assert err <= 5e-3
    assert elapsed <= 60


def _random_regular(rng, n, k):
    # k labels, each a random permutation: every node has one out- and one in-edge per label
    src = np.tile(np.arange(n), k)
    dst = np.concatenate([rng.permutation(n) for _ in range(k)])
    lab = np.repeat(np.arange(k), n)
    return augment_with_reverse_labels(LabeledGraph.from_edges(n, k, src, dst, lab))


def test_c6_regular_graph_equivalence():
    rng = np.random.default_rng(6)
    mismatches = 0
    for _ in range(20):
        n, k = int(rng.integers(5, 60)), int(rng.integers(1, 5))
        g = _random_regular(rng, n, k)
        w = uniform_weights(g)
        assert np.ptp(weighted_out_degree(g, w)) == 0
        p0 = rng.random(n) * (rng.random(n) < 0.5)
        p0[0] += 1.0
        for params in PAPER_GRID:
            pr = rank_pagerank(g, w, p0, params)
            sr = rank_synsetrank(g, w, p0, params)
            mismatches += not np.array_equal(pr.order, sr.order)
    record_criterion(6, "regular-graph SynsetRank == PageRank orders", mismatches == 0,
                     f"{mismatches} mismatching (graph, config) pairs of 3600")
    assert mismatches == 0


def test_c7_auc_oracle():
    rng = np.random.default_rng(7)
    worst = 0.0
    antisym_ok = True
    for _ in range(1000):
        n = int(rng.integers(2, 120))
        scores = np.round(rng.normal(size=n), int(rng.integers(0, 3)))  # rounding creates ties
        labels = rng.random(n) < rng.uniform(0.05, 0.95)
        labels[rng.choice(n, 2, replace=False)] = [True, False]
        gold = GoldLabels(np.arange(n), labels)
        worst = max(worst, abs(auc(scores, gold) - auc_bruteforce(scores, gold)))
        antisym_ok &= auc(scores, gold) + auc(-scores, gold) == 1.0
    ok = worst <= 1e-12 and antisym_ok
    record_criterion(7, "fast AUC == brute-force AUC; exact antisymmetry", ok, f"max error {worst:.1e}")
    assert worst <= 1e-12
    assert antisym_ok


def test_c8_grid_protocol():
    assert len(PAPER_GRID) == 180 and len(list(PAPER_GRID)) == 180
    template = PlantedSpec(node_count=400, relevant_cluster_size=15, seed_count=5,
                           noise_node_count=10, max_degree=80)
    datasets = [generate_planted(s, name=f"r{i}") for i, s in enumerate(benchmark_specs(3, 8, template))]
    res = grid_search_common(datasets, "synsetrank", PAPER_GRID, jobs=1)
    means = [
        np.mean([auc(rank_synsetrank(d.graph, d.weights, d.p0, params), d.validation) for d in datasets])
        for params in PAPER_GRID
    ]
    best = int(np.argmax(means))  # first maximum, same tie rule
    ok = (
        len(res.per_config) == 180
        and res.best_params == list(PAPER_GRID)[best]
        and abs(res.best_validation_auc - means[best]) <= 1e-15
    )
    record_criterion(8, "paper grid = 180 configs; common search = exhaustive argmax", ok,
                     f"best {res.best_params}, mean val AUC {res.best_validation_auc:.4f}")
    assert len(res.per_config) == 180
    assert res.best_params == list(PAPER_GRID)[best]
    assert res.best_validation_auc == pytest.approx(means[best], abs=1e-15)


def test_c9_directional_benchmark(tmp_path, capsys):
    t0 = time.perf_counter()
    assert main(["gen", "--relations", "13", "--seed", "7", "--out", str(tmp_path / "bench")]) == 0
    table = tmp_path / "table.csv"
    assert main(["compare", str(tmp_path / "bench"), "--csv", str(table)]) == 0
    elapsed = time.perf_counter() - t0
    report = capsys.readouterr().out
    rows = list(csv.reader(table.read_text().splitlines()))
    header, avg = rows[0], rows[-1]
    assert avg[0] == "Average AUC" and len(rows) == 15
    mean = dict(zip(header[1:], map(float, avg[1:])))
    syn, pr, freq = mean["SynRank"], mean["PageRank"], mean["Frequency"]
    ok = syn >= pr + 0.02 and syn >= freq + 0.03 and elapsed <= 600
    record_criterion(9, "directional benchmark (13 relations, seed 7)", ok,
                     f"SynRank {syn:.4f}, PageRank {pr:.4f}, Frequency {freq:.4f}, {elapsed:.0f}s")
    print(report)
    assert syn >= pr + 0.02
    assert syn >= freq + 0.03
    assert elapsed <= 600
