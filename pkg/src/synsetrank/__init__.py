"""Relevance ranking of graph nodes by degree-adjusted random walks."""

from .evaluation import (
    PAPER_GRID,
    GoldLabels,
    GridSpec,
    RelationDataset,
    auc,
    compare_table,
    grid_search_common,
    grid_search_per_relation,
)
from .graph import (
    LabeledGraph,
    augment_with_reverse_labels,
    load_edge_list,
    uniform_weights,
    weighted_out_degree,
)
from .markov import WalkParams, build_row_normalized, build_transition, walk
from .rankers import (
    Ranking,
    degree_adjust,
    rank_frequency,
    rank_moro,
    rank_pagerank,
    rank_synsetrank,
)
from .synthbench import PlantedSpec, generate_planted

__version__ = "0.1.0"

__all__ = [
    "WalkParams",
    "build_row_normalized",
    "build_transition",
    "walk",
    "PlantedSpec",
    "generate_planted",
    "PAPER_GRID",
    "GoldLabels",
    "GridSpec",
    "RelationDataset",
    "auc",
    "compare_table",
    "grid_search_common",
    "grid_search_per_relation",
    "LabeledGraph",
    "augment_with_reverse_labels",
    "load_edge_list",
    "uniform_weights",
    "weighted_out_degree",
    "Ranking",
    "degree_adjust",
    "rank_frequency",
    "rank_moro",
    "rank_pagerank",
    "rank_synsetrank",
]
