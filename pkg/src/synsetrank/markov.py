"""Taxed, self-looped random walk on a labeled graph.

The walk lives on ``N + 1`` states: the graph nodes plus one sink-source
state. Every step each node keeps a share ``beta`` of its (untaxed) mass,
spreads the rest over its weighted out-edges, and loses a share ``alpha``
to the sink-source, which re-emits everything it holds according to the
restart distribution. Nodes without out-edges send their whole non-staying
mass to the sink-source.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.sparse as sp

__all__ = [
    "WalkParams",
    "TransitionSystem",
    "build_row_normalized",
    "build_transition",
    "initial_state",
    "walk",
    "walk_trajectory",
    "monte_carlo_walk",
]

_RESTART_TOL = 1e-9
_CLAMP_TOL = 1e-15


@dataclass(frozen=True, order=True)
class WalkParams:
    """Walk hyperparameters: taxation ``alpha``, self-link ``beta``, ``steps``."""

    alpha: float
    beta: float
    steps: int

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must lie in [0, 1], got {self.beta}")
        if int(self.steps) != self.steps or self.steps < 1:
            raise ValueError(f"steps must be a positive integer, got {self.steps}")


def build_row_normalized(g, weights):
    """Row-normalised weighted adjacency ``Q'`` of shape ``(N, N)``.

    ``Q'[i, j] = sum_l w_l E_l[i, j] / d_i``. Rows with ``d_i = 0`` are left
    empty; they are routed to the sink-source by :func:`build_transition`.
    """
    adj = g.weighted_adjacency(weights)
    deg = np.asarray(adj.sum(axis=1)).ravel()
    inv = np.zeros_like(deg)
    np.divide(1.0, deg, out=inv, where=deg > 0)
    q = sp.diags(inv) @ adj
    q = sp.csr_matrix(q)
    q.eliminate_zeros()
    q.sort_indices()
    return q


@dataclass(frozen=True, eq=False)
class TransitionSystem:
    """Row-stochastic ``(N+1) x (N+1)`` transition matrix.

    The last state is the sink-source. ``matrix`` is CSR; ``restart`` is the
    length-``N`` distribution of the sink-source row and ``sink_column`` the
    length-``N`` vector ``k`` of per-node absorption probabilities.
    """

    matrix: sp.csr_matrix
    restart: np.ndarray
    sink_column: np.ndarray
    params: tuple = field(default=(0.0, 0.0))

    @property
    def size(self):
        return self.matrix.shape[0]

    @property
    def node_count(self):
        return self.matrix.shape[0] - 1

    @cached_property
    def _transposed(self):
        # p^T Q computed as Q^T p; CSR of Q^T gives a fixed reduction order.
        qt = self.matrix.T.tocsr()
        qt.sort_indices()
        return qt

    def step(self, p):
        return self._transposed @ p

    def row_sums(self):
        return np.asarray(self.matrix.sum(axis=1)).ravel()


def _as_distribution(p, n, what):
    p = np.asarray(p, dtype=np.float64).ravel()
    if p.shape != (n,):
        raise ValueError(f"{what} must have length {n}, got {p.size}")
    if not np.all(np.isfinite(p)):
        raise ValueError(f"{what} contains non-finite entries")
    neg = p < 0
    if np.any(p[neg] < -_CLAMP_TOL):
        raise ValueError(f"{what} has negative entries")
    if neg.any():
        p = np.where(neg, 0.0, p)
    return p


def build_transition(q_prime, restart, params):
    """Assemble the augmented chain from ``Q'`` and a restart distribution.

    Parameters
    ----------
    q_prime : (N, N) sparse matrix
        Output of :func:`build_row_normalized`; rows sum to 1 or 0.
    restart : (N,) array_like
        Distribution the sink-source re-emits. Must sum to 1 within 1e-9.
    params : WalkParams or (alpha, beta) tuple
        Only ``alpha`` and ``beta`` are used here.

    Returns
    -------
    TransitionSystem
    """
    if isinstance(params, WalkParams):
        alpha, beta = params.alpha, params.beta
    else:
        alpha, beta = (float(x) for x in params[:2])
        WalkParams(alpha, beta, 1)

    q_prime = sp.csr_matrix(q_prime, dtype=np.float64)
    n = q_prime.shape[0]
    restart = _as_distribution(restart, n, "restart distribution")
    if abs(restart.sum() - 1.0) > _RESTART_TOL:
        raise ValueError(
            f"restart distribution must sum to 1, sums to {restart.sum():.12g}"
        )

    has_out = np.diff(q_prime.indptr) > 0
    k = np.where(has_out, alpha, 1.0 - (1.0 - alpha) * beta)

    stay = (1.0 - alpha) * beta
    move = (1.0 - alpha) * (1.0 - beta)
    # Self-link diagonal stacks on top of any self-loop already in Q'.
    block = move * q_prime + stay * sp.identity(n, format="csr")

    top = sp.hstack([block, sp.csr_matrix(k.reshape(-1, 1))])
    bottom = sp.csr_matrix(np.append(restart, 0.0).reshape(1, -1))
    q = sp.vstack([top, bottom], format="csr")
    q.eliminate_zeros()
    q.sort_indices()
    return TransitionSystem(q, restart, k, (alpha, beta))


def initial_state(p0):
    """Node distribution ``p0`` extended with a zero sink-source entry."""
    p0 = np.asarray(p0, dtype=np.float64).ravel()
    return np.append(p0, 0.0)


def walk(ts, start, steps):
    """Distribution after ``steps`` transitions, ``start^T Q^steps``.

    No renormalisation is applied; ``steps = 0`` returns ``start``.
    """
    p = _as_distribution(start, ts.size, "start distribution")
    if steps < 0:
        raise ValueError("steps must be non-negative")
    for _ in range(int(steps)):
        p = ts.step(p)
    return p


def walk_trajectory(ts, start, steps):
    """List of distributions after 1, 2, ..., ``steps`` transitions."""
    p = _as_distribution(start, ts.size, "start distribution")
    out = []
    for _ in range(int(steps)):
        p = ts.step(p)
        out.append(p)
    return out


def monte_carlo_walk(ts, start, steps, walkers, seed):
    """Empirical distribution of ``walkers`` simulated trajectories.

    Independent check on :func:`walk`: each walker draws its start state from
    ``start`` and then ``steps`` successor states from the rows of ``Q``.
    Deterministic for a fixed ``seed``.
    """
    if walkers < 1:
        raise ValueError("need at least one walker")
    start = _as_distribution(start, ts.size, "start distribution")
    rng = np.random.default_rng(seed)

    q = ts.matrix.copy()
    q.eliminate_zeros()
    indptr, indices = q.indptr, q.indices
    rows = np.repeat(np.arange(q.shape[0]), np.diff(indptr))
    # Per-row cumulative sums, offset by row index so one global
    # searchsorted can locate the sampled column.
    within = np.cumsum(q.data) - np.repeat(
        np.concatenate(([0.0], np.cumsum(q.data)))[indptr[:-1]], np.diff(indptr)
    )
    keys = rows + within

    cdf = np.cumsum(start)
    state = np.searchsorted(cdf, rng.random(walkers) * cdf[-1], side="right")
    state = np.minimum(state, ts.size - 1)
    for _ in range(int(steps)):
        u = rng.random(walkers)
        pos = np.searchsorted(keys, state + u, side="right")
        pos = np.clip(pos, indptr[state], indptr[state + 1] - 1)
        state = indices[pos]
    return np.bincount(state, minlength=ts.size) / walkers
