import dataclasses
import filecmp

import numpy as np
import pytest

from synsetrank.evaluation import GoldLabels, auc
from synsetrank.graph import augment_with_reverse_labels
from synsetrank.rankers import rank_frequency
from synsetrank.synthbench import (
    DATASET_FILES,
    PlantedSpec,
    benchmark_specs,
    generate_benchmark,
    generate_planted,
    load_benchmark,
    load_dataset,
    write_dataset,
)

SMALL = PlantedSpec(node_count=400, relevant_cluster_size=15, seed_count=5, noise_node_count=10,
                    max_degree=80, rng_seed=11)


def test_deterministic_files(tmp_path):
    for d in ("a", "b"):
        write_dataset(generate_planted(SMALL, name="x"), tmp_path / d, SMALL)
    for f in DATASET_FILES:
        assert filecmp.cmp(tmp_path / "a" / f, tmp_path / "b" / f, shallow=False)


def test_different_seeds_differ():
    a = generate_planted(SMALL)
    b = generate_planted(dataclasses.replace(SMALL, rng_seed=12))
    assert not a.graph.same_edges(b.graph)


def test_no_noise_frequency_baseline_is_perfect_on_mentioned_nodes():
    ds = generate_planted(dataclasses.replace(SMALL, noise_frequency_mass=0.0))
    mentioned = np.flatnonzero(ds.p0 > 0)
    ranking = rank_frequency(ds.p0)
    for split in (ds.validation, ds.test):
        pos = split.positives
        assert np.all(np.isin(mentioned[np.isin(mentioned, split.nodes)], pos))
        keep = ~split.labels | np.isin(split.nodes, mentioned)
        sub = GoldLabels(split.nodes[keep], split.labels[keep])
        assert auc(ranking, sub) == 1.0


def test_paper_like_ratio():
    ds = generate_planted(PlantedSpec(node_count=3000, pos_neg_ratio=35.0, rng_seed=4))
    labels = np.concatenate([ds.validation.labels, ds.test.labels])
    n_pos = int(labels.sum())
    assert n_pos == 80
    assert 2800 <= labels.size <= 2900
    assert (labels.size - n_pos) / n_pos == pytest.approx(35, rel=0.05)


def test_splits_disjoint_and_valid():
    ds = generate_planted(SMALL)
    assert not set(ds.validation.nodes) & set(ds.test.nodes)
    for split in (ds.validation, ds.test):
        assert split.labels.any() and (~split.labels).any()
    assert ds.p0.sum() == pytest.approx(1.0) and np.all(ds.p0 >= 0)
    g = ds.graph
    assert g.augmented and g.label_count == 2 * SMALL.label_count
    src, dst, lab = g.edge_triples()
    assert src.max() < g.node_count and dst.max() < g.node_count


def test_infeasible_spec():
    with pytest.raises(ValueError, match="cluster"):
        generate_planted(dataclasses.replace(SMALL, relevant_cluster_size=400))


def test_write_load_roundtrip(tmp_path):
    ds = generate_planted(SMALL, name="x")
    write_dataset(ds, tmp_path / "x", SMALL)
    back = load_dataset(tmp_path / "x")
    assert back.graph.same_edges(ds.graph)
    np.testing.assert_allclose(back.p0, ds.p0, rtol=1e-11)
    np.testing.assert_array_equal(back.validation.nodes, ds.validation.nodes)
    np.testing.assert_array_equal(back.test.labels, ds.test.labels)
    raw = load_dataset(tmp_path / "x", reverse_augment=False)
    assert augment_with_reverse_labels(raw.graph).same_edges(ds.graph)


def test_benchmark_subseeds(tmp_path):
    specs = benchmark_specs(3, 7)
    assert len({s.rng_seed for s in specs}) == 3
    assert [s.rng_seed for s in specs] == [s.rng_seed for s in benchmark_specs(3, 7)]
    paths = generate_benchmark(tmp_path, 3, 7, SMALL)
    assert [p.rsplit("/", 1)[1] for p in paths] == ["rel00", "rel01", "rel02"]
    assert [d.name for d in load_benchmark(tmp_path)] == ["rel00", "rel01", "rel02"]
    with pytest.raises(ValueError):
        benchmark_specs(0, 7)
