"""Seeded planted-relevance benchmark.

Each generated relation has a hidden relevant cluster wired to a handful of
frequent, high-degree seed nodes. The frequency vector only covers the seeds
plus some low-degree distractors; the cluster itself is never mentioned, so
recovering it requires propagating mass through the graph.
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .evaluation import GoldLabels, RelationDataset, load_gold, save_gold
from .graph import (
    LabeledGraph,
    augment_with_reverse_labels,
    forward_part,
    load_edge_list,
    load_label_weights,
    save_edge_list,
    uniform_weights,
)
from .rankers import load_frequencies, save_frequencies

__all__ = [
    "PlantedSpec",
    "generate_planted",
    "generate_benchmark",
    "write_dataset",
    "load_dataset",
    "load_benchmark",
    "DATASET_FILES",
]

DATASET_FILES = ("edges.tsv", "freq.tsv", "gold.valid.tsv", "gold.test.tsv", "spec.txt")


@dataclass(frozen=True)
class PlantedSpec:
    """Parameters of one planted relation.

    ``degree_skew`` is the exponent of the power-law out-degree distribution;
    the ``seed_count`` largest sampled degrees go to the seeds.
    ``pos_neg_ratio`` is the number of labelled negatives per positive.
    """

    node_count: int = 3000
    label_count: int = 8
    relevant_cluster_size: int = 60
    seed_count: int = 20
    seed_frequency_mass: float = 0.7
    noise_frequency_mass: float = 0.3
    noise_node_count: int = 40
    degree_skew: float = 2.2
    min_degree: int = 2
    max_degree: int = 300
    target_degree_bias: float = 1.0
    seed_links_per_member: int = 3
    cluster_links_per_member: int = 2
    pos_neg_ratio: float = 35.0
    rng_seed: int = 0

    def validate(self):
        n = self.node_count
        if self.relevant_cluster_size < 1 or self.seed_count < 1:
            raise ValueError("cluster and seed sets must be non-empty")
        if self.relevant_cluster_size >= n:
            raise ValueError(
                f"relevant cluster ({self.relevant_cluster_size}) must be smaller "
                f"than the graph ({n} nodes)"
            )
        relevant = self.relevant_cluster_size + self.seed_count
        if relevant + max(self.noise_node_count, 1) > n:
            raise ValueError("cluster, seeds and noise nodes do not fit in the graph")
        if self.label_count < 1:
            raise ValueError("need at least one edge label")
        if not 0 < self.seed_frequency_mass <= 1:
            raise ValueError("seed_frequency_mass must lie in (0, 1]")
        if self.noise_frequency_mass < 0:
            raise ValueError("noise_frequency_mass must be non-negative")
        if self.noise_frequency_mass > 0 and self.noise_node_count < 1:
            raise ValueError("noise mass needs at least one noise node")
        if self.degree_skew <= 1:
            raise ValueError("degree_skew must exceed 1")
        if not 0 <= self.min_degree <= self.max_degree:
            raise ValueError("need 0 <= min_degree <= max_degree")
        if self.pos_neg_ratio <= 0:
            raise ValueError("pos_neg_ratio must be positive")

    def to_text(self):
        return "".join(f"{f.name}\t{getattr(self, f.name)}\n" for f in dataclasses.fields(self))


def _power_law_degrees(rng, n, spec):
    u = rng.random(n)
    deg = np.floor(spec.min_degree * (1.0 - u) ** (-1.0 / (spec.degree_skew - 1.0)))
    return np.minimum(deg, spec.max_degree).astype(np.int64)


def _split(rng, nodes):
    nodes = rng.permutation(nodes)
    half = (nodes.size + 1) // 2
    return nodes[:half], nodes[half:]


def generate_planted(spec, name="relation", reverse_augment=True):
    """Generate one planted relation as a :class:`RelationDataset`.

    Positives are the cluster plus the seeds. Validation and test gold are
    disjoint, class-stratified halves of the labelled nodes.
    """
    spec.validate()
    rng = np.random.default_rng(spec.rng_seed)
    n, n_lab = spec.node_count, spec.label_count
    c, s = spec.relevant_cluster_size, spec.seed_count

    perm = rng.permutation(n)
    cluster, seeds, others = perm[:c], perm[c:c + s], perm[c + s:]

    deg = _power_law_degrees(rng, n, spec)
    top = np.argsort(-deg, kind="stable")[:s]
    rest = np.setdiff1d(np.arange(n), top)
    out_deg = np.empty(n, dtype=np.int64)
    out_deg[seeds] = rng.permutation(deg[top])
    non_seed = np.setdiff1d(np.arange(n), seeds)
    out_deg[non_seed] = rng.permutation(deg[rest])

    src = np.repeat(np.arange(n), out_deg)
    # Targets drawn in proportion to out-degree, so hubs are hubs both ways.
    pull = (out_deg + 1.0) ** spec.target_degree_bias
    dst = rng.choice(n, size=src.size, p=pull / pull.sum())
    keep = dst != src
    src, dst = src[keep], dst[keep]

    k_seed = min(spec.seed_links_per_member, s)
    seed_src = np.concatenate([rng.choice(seeds, size=k_seed, replace=False) for _ in cluster])
    seed_dst = np.repeat(cluster, k_seed)

    k_intra = min(spec.cluster_links_per_member, c - 1)
    intra_src = np.repeat(cluster, k_intra)
    intra_dst = np.concatenate(
        [rng.choice(cluster[cluster != m], size=k_intra, replace=False) for m in cluster]
    ) if k_intra else np.zeros(0, dtype=np.int64)

    all_src = np.concatenate([src, seed_src, intra_src])
    all_dst = np.concatenate([dst, seed_dst, intra_dst])
    labels = rng.integers(0, n_lab, size=all_src.size)
    graph = LabeledGraph.from_edges(n, n_lab, all_src, all_dst, labels)

    freq = np.zeros(n)
    freq[seeds] = spec.seed_frequency_mass * rng.dirichlet(np.ones(s))
    if spec.noise_frequency_mass > 0:
        noise = rng.choice(others, size=spec.noise_node_count, replace=False)
        freq[noise] += spec.noise_frequency_mass / spec.noise_node_count

    positives = np.concatenate([cluster, seeds])
    n_neg = min(others.size, int(round(spec.pos_neg_ratio * positives.size)))
    negatives = rng.choice(others, size=n_neg, replace=False)
    pos_v, pos_t = _split(rng, positives)
    neg_v, neg_t = _split(rng, negatives)

    def gold(pos, neg):
        nodes = np.concatenate([pos, neg])
        labels_ = np.concatenate([np.ones(pos.size, bool), np.zeros(neg.size, bool)])
        order = np.argsort(nodes)
        return GoldLabels(nodes[order], labels_[order])

    if reverse_augment:
        graph = augment_with_reverse_labels(graph)
    return RelationDataset(
        name, graph, uniform_weights(graph), freq, gold(pos_v, neg_v), gold(pos_t, neg_t)
    )


def write_dataset(ds, directory, spec=None):
    """Write ``ds`` in the standard TSV layout under ``directory``.

    The edge list holds forward labels only; reverse labels are rebuilt on load.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    graph = forward_part(ds.graph) if ds.graph.augmented else ds.graph
    save_edge_list(graph, directory / "edges.tsv")
    save_frequencies(ds.p0, directory / "freq.tsv")
    save_gold(ds.validation, directory / "gold.valid.tsv")
    save_gold(ds.test, directory / "gold.test.tsv")
    text = spec.to_text() if spec is not None else ""
    (directory / "spec.txt").write_text(f"name\t{ds.name}\n{text}", encoding="utf-8")


def load_dataset(directory, reverse_augment=True, weights_path=None, name=None):
    """Load a relation directory written by :func:`write_dataset`."""
    directory = Path(directory)
    graph = load_edge_list(directory / "edges.tsv")
    base_labels = graph.label_count
    if reverse_augment:
        graph = augment_with_reverse_labels(graph)
    if weights_path is not None:
        weights = load_label_weights(
            weights_path, graph.label_count, base_labels if reverse_augment else None
        )
    else:
        weights = uniform_weights(graph)
    freq = load_frequencies(directory / "freq.tsv", graph.node_count)
    return RelationDataset(
        name or directory.name,
        graph,
        weights,
        freq,
        load_gold(directory / "gold.valid.tsv"),
        load_gold(directory / "gold.test.tsv"),
    )


def relation_dirs(root):
    """Sorted sub-directories of ``root`` that contain an ``edges.tsv``."""
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(f"{root} is not a directory")
    return sorted(p for p in root.iterdir() if (p / "edges.tsv").is_file())


def load_benchmark(root, reverse_augment=True, weights_path=None):
    dirs = relation_dirs(root)
    if not dirs:
        raise ValueError(f"no relation directories under {root}")
    return [load_dataset(d, reverse_augment, weights_path) for d in dirs]


def benchmark_specs(relations, seed, template=None):
    """Per-relation specs with sub-seeds spawned from ``seed``."""
    if relations < 1:
        raise ValueError("need at least one relation")
    template = template or PlantedSpec()
    children = np.random.SeedSequence(seed).spawn(relations)
    return [
        dataclasses.replace(template, rng_seed=int(child.generate_state(1)[0]))
        for child in children
    ]


def generate_benchmark(out, relations, seed, template=None):
    """Write ``relations`` planted datasets to ``out/rel00``, ``out/rel01``, ..."""
    specs = benchmark_specs(relations, seed, template)
    width = max(2, len(str(relations - 1)))
    paths = []
    for i, spec in enumerate(specs):
        name = f"rel{i:0{width}d}"
        ds = generate_planted(spec, name=name, reverse_augment=False)
        path = os.path.join(out, name)
        write_dataset(ds, path, spec)
        paths.append(path)
    return paths
