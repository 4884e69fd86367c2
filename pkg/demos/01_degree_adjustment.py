"""
Degree adjustment on a four-node graph
======================================

A small labeled graph shows why the walk is restarted from a
degree-adjusted distribution rather than from raw frequencies.
"""

# %%
# The graph has two labels. Label 0 links node 0 to nodes 1, 2 and 3;
# label 1 links node 1 to node 2. Reverse augmentation adds a reversed
# copy of each label, so relevance can flow against the edge direction too.
import numpy as np

from synsetrank import (
    LabeledGraph,
    WalkParams,
    augment_with_reverse_labels,
    build_row_normalized,
    degree_adjust,
    rank_pagerank,
    rank_synsetrank,
    uniform_weights,
    weighted_out_degree,
)

fwd = LabeledGraph.from_edges(4, 2, [0, 0, 0, 1], [1, 2, 3, 2], [0, 0, 0, 1])
g = augment_with_reverse_labels(fwd)
w = uniform_weights(g)
print("labels after augmentation:", g.label_count)
print("out-degree:", weighted_out_degree(g, w))

# %%
# Nodes 0 and 1 are equally frequent. Node 0 has three neighbours, node 1
# only two, so a plain walk spreads node 0's mass more thinly.
p0 = np.array([0.5, 0.5, 0.0, 0.0])
print("row-normalised transitions:\n", build_row_normalized(g, w).toarray())

# %%
# One plain step (no taxation, no self-links):
params = WalkParams(alpha=0.0, beta=0.0, steps=1)
print("PageRank scores:  ", rank_pagerank(g, w, p0, params).scores)

# %%
# Multiplying frequencies by degree first makes every edge carry the same
# mass per unit of frequency, whatever the degree of its source.
p_hat = degree_adjust(p0, weighted_out_degree(g, w))
print("adjusted start:   ", p_hat)
print("SynsetRank scores:", rank_synsetrank(g, w, p0, params).scores)

# %%
# Each edge out of node 0 and out of node 1 now delivers 0.2.
q = build_row_normalized(g, w).toarray()
print("per-edge mass from node 0:", p_hat[0] * q[0, 1])
print("per-edge mass from node 1:", p_hat[1] * q[1, 0])
