"""Node rankers: Frequency, Moro-style tiers, PageRank and SynsetRank.

All rankers return a :class:`Ranking`. Ties in score are broken by higher
original frequency, then by lower node index, so orders are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import weighted_out_degree
from .markov import build_row_normalized, build_transition, initial_state, walk

__all__ = [
    "Ranking",
    "make_ranking",
    "normalize_frequency",
    "degree_adjust",
    "rank_frequency",
    "rank_pagerank",
    "rank_synsetrank",
    "rank_moro",
    "walk_scores",
    "load_frequencies",
    "save_ranking",
]


@dataclass(frozen=True, eq=False)
class Ranking:
    """Per-node ``scores`` and the induced ``order`` (best first)."""

    scores: np.ndarray
    order: np.ndarray

    def __len__(self):
        return self.scores.size

    def ranks(self):
        """0-based position of each node in ``order``."""
        r = np.empty_like(self.order)
        r[self.order] = np.arange(self.order.size)
        return r


def make_ranking(scores, freq):
    """Sort by score desc, then frequency desc, then node index asc."""
    scores = np.asarray(scores, dtype=np.float64)
    freq = np.asarray(freq, dtype=np.float64)
    idx = np.arange(scores.size)
    order = np.lexsort((idx, -freq, -scores))
    return Ranking(scores, order)


def normalize_frequency(p0):
    """L1-normalise a raw frequency vector."""
    p0 = np.asarray(p0, dtype=np.float64).ravel()
    if not np.all(np.isfinite(p0)) or np.any(p0 < 0):
        raise ValueError("frequencies must be finite and non-negative")
    total = p0.sum()
    if total <= 0:
        raise ValueError("empty frequency distribution")
    return p0 / total


def degree_adjust(p0, d):
    """Degree-reweighted start distribution ``(p0 * d) / ||p0 * d||_1``.

    Raises ``ValueError`` when every node carrying frequency mass has zero
    degree; there is no fallback to ``p0``.
    """
    p0 = np.asarray(p0, dtype=np.float64).ravel()
    d = np.asarray(d, dtype=np.float64).ravel()
    if p0.shape != d.shape:
        raise ValueError(f"length mismatch: p0 has {p0.size}, d has {d.size}")
    if np.any(d < 0) or not np.all(np.isfinite(d)):
        raise ValueError("degrees must be finite and non-negative")
    top = d.max() if d.size else 0.0
    # Scaling d to [0, 1] first leaves p0 bit-identical when all degrees agree.
    prod = p0 * (d / top) if top > 0 else np.zeros_like(p0)
    if not prod.sum() > 0:
        raise ValueError(
            "degree-adjusted distribution is all zero: every frequent node is isolated"
        )
    return normalize_frequency(prod)


def rank_frequency(p0):
    p = normalize_frequency(p0)
    return make_ranking(p, p)


def walk_scores(g, weights, start, params, q_prime=None):
    """Node part of the walk distribution after ``params.steps`` steps.

    ``start`` doubles as the restart distribution. The sink-source entry is
    dropped.
    """
    if q_prime is None:
        q_prime = build_row_normalized(g, weights)
    ts = build_transition(q_prime, start, params)
    p = walk(ts, initial_state(start), params.steps)
    return p[:-1]


def rank_pagerank(g, weights, p0, params):
    """Rank by the taxed walk started and restarted from ``p0``."""
    p = normalize_frequency(p0)
    return make_ranking(walk_scores(g, weights, p, params), p)


def rank_synsetrank(g, weights, p0, params):
    """Rank by the walk started and restarted from the degree-adjusted ``p0``.

    Adjusting by out-degree makes the mass a node pushes along each of its
    edges proportional to its frequency alone, so frequent hubs influence
    their neighbours as strongly as frequent low-degree nodes do.
    """
    p = normalize_frequency(p0)
    p_hat = degree_adjust(p0, weighted_out_degree(g, weights))
    return make_ranking(walk_scores(g, weights, p_hat, params), p)


def moro_scores(g, p0, top_k):
    p = normalize_frequency(p0)
    n = p.size
    if not 1 <= top_k <= n:
        raise ValueError(f"top_k must lie in [1, {n}], got {top_k}")
    rel = p / p.max()
    order = np.lexsort((np.arange(n), -p))
    seeds = np.zeros(n, dtype=bool)
    seeds[order[:top_k]] = True

    near = np.zeros(n, dtype=bool)
    for mat in g.adjacency:
        near |= np.asarray(mat[seeds].sum(axis=0)).ravel() > 0
        near |= np.asarray(mat[:, seeds].sum(axis=1)).ravel() > 0
    near &= ~seeds
    return rel + 2.0 * seeds + 1.0 * near, p


def rank_moro(g, p0, top_k):
    """Three-tier ranking: top-``top_k`` frequent seeds, their neighbours, rest.

    Within a tier, nodes are ordered by frequency relative to the maximum.
    Neighbourhood ignores edge direction.
    """
    scores, p = moro_scores(g, p0, top_k)
    return make_ranking(scores, p)


def load_frequencies(path, node_count):
    """Read ``node<TAB>frequency`` rows into a dense length-``node_count`` vector.

    Repeated nodes accumulate. Unlisted nodes get frequency 0.
    """
    freq = np.zeros(node_count, dtype=np.float64)
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'node<TAB>frequency'")
            try:
                node, value = int(parts[0]), float(parts[1])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: unparsable frequency row") from None
            if not 0 <= node < node_count:
                raise ValueError(f"{path}:{lineno}: node {node} out of range")
            if not (np.isfinite(value) and value >= 0):
                raise ValueError(f"{path}:{lineno}: frequency must be non-negative")
            freq[node] += value
    return freq


def save_frequencies(freq, path):
    freq = np.asarray(freq, dtype=np.float64)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for node in np.flatnonzero(freq).tolist():
            fh.write(f"{node}\t{freq[node]:.12g}\n")


def format_ranking(ranking):
    lines = [
        f"{pos}\t{node}\t{ranking.scores[node]:.12g}\n"
        for pos, node in enumerate(ranking.order.tolist(), start=1)
    ]
    return "".join(lines)


def save_ranking(ranking, path):
    """Write ``rank<TAB>node<TAB>score`` rows, rank starting at 1."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_ranking(ranking))
