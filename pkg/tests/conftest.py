import numpy as np
import pytest

from synsetrank.graph import LabeledGraph, augment_with_reverse_labels


def make_g4_fwd():
    # label 0 (A): 0->1, 0->2, 0->3; label 1 (B): 1->2
    return LabeledGraph.from_edges(4, 2, [0, 0, 0, 1], [1, 2, 3, 2], [0, 0, 0, 1])


def random_graph(rng, n, n_labels, density=None, augment=None, dangling=0.1):
    """Random labeled digraph; a share of nodes is forced to have no out-edges."""
    if density is None:
        density = rng.uniform(0.5, 6.0) / max(n, 1)
    m = rng.binomial(n * n * n_labels, min(density, 1.0) / n_labels) if n else 0
    src = rng.integers(0, n, size=m)
    dst = rng.integers(0, n, size=m)
    lab = rng.integers(0, n_labels, size=m)
    dead = rng.random(n) < dangling
    keep = ~dead[src]
    g = LabeledGraph.from_edges(n, n_labels, src[keep], dst[keep], lab[keep])
    if augment is None:
        augment = bool(rng.integers(2))
    return augment_with_reverse_labels(g) if augment else g


def dense_transition(g, w, restart, alpha, beta):
    """Dense Q built entry by entry from the block formula."""
    n = g.node_count
    a = np.zeros((n, n))
    src, dst, lab = g.edge_triples()
    for s, d, l in zip(src, dst, lab):
        a[s, d] += w[l]
    q = np.zeros((n + 1, n + 1))
    for i in range(n):
        tot = a[i].sum()
        for j in range(n):
            if tot > 0:
                q[i, j] = (1 - alpha) * (1 - beta) * a[i, j] / tot
        q[i, i] += (1 - alpha) * beta
        q[i, n] = alpha if tot > 0 else 1 - (1 - alpha) * beta
    q[n, :n] = restart
    return q


@pytest.fixture
def g4_fwd():
    return make_g4_fwd()


@pytest.fixture
def g4():
    return augment_with_reverse_labels(make_g4_fwd())


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# -- acceptance report ----------------------------------------------------------

ACCEPTANCE_RESULTS = {}


def record_criterion(number, title, passed, detail=""):
    ACCEPTANCE_RESULTS[number] = (title, bool(passed), detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        title, passed, detail = ACCEPTANCE_RESULTS[number]
        status = "PASS" if passed else "FAIL"
        suffix = f" ({detail})" if detail else ""
        terminalreporter.write_line(f"[{status}] {number}. {title}{suffix}")
