"""Edge-labeled directed graphs.

A :class:`LabeledGraph` holds one binary adjacency matrix per edge label,
all sharing the same node universe ``0 .. N-1``. Each label is stored as a
sorted CSR matrix so that transition construction is a single sparse sum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

__all__ = [
    "GraphFormatError",
    "LabeledGraph",
    "augment_with_reverse_labels",
    "forward_part",
    "load_edge_list",
    "save_edge_list",
    "load_label_weights",
    "uniform_weights",
    "weighted_out_degree",
]


class GraphFormatError(ValueError):
    """Raised for malformed or out-of-range graph input."""


@dataclass(frozen=True, eq=False)
class LabeledGraph:
    """Directed multigraph with one binary edge set per label.

    Use :meth:`from_edges` to build one; the constructor trusts its input.

    Attributes
    ----------
    node_count : int
        Number of nodes ``N``.
    label_count : int
        Number of edge labels ``L``.
    adjacency : tuple of scipy.sparse.csr_matrix
        ``L`` binary ``N x N`` matrices with sorted, duplicate-free indices.
    augmented : bool
        Whether the second half of the labels are reversed copies of the first.
    """

    node_count: int
    label_count: int
    adjacency: tuple
    augmented: bool = False

    @classmethod
    def from_edges(cls, node_count, label_count, src, dst, label, augmented=False):
        """Build a graph from parallel ``src``, ``dst``, ``label`` arrays.

        Duplicate ``(src, dst)`` pairs within a label collapse to one edge.
        """
        if node_count < 0 or label_count < 0:
            raise GraphFormatError("node_count and label_count must be non-negative")
        src = np.asarray(src, dtype=np.int64).ravel()
        dst = np.asarray(dst, dtype=np.int64).ravel()
        label = np.asarray(label, dtype=np.int64).ravel()
        if not (src.shape == dst.shape == label.shape):
            raise GraphFormatError("src, dst and label must have the same length")
        if src.size:
            if src.min() < 0 or dst.min() < 0 or max(src.max(), dst.max()) >= node_count:
                raise GraphFormatError("node out of range")
            if label.min() < 0 or label.max() >= label_count:
                raise GraphFormatError("label out of range")

        mats = []
        for lab in range(label_count):
            sel = label == lab
            mats.append(_binary_csr(src[sel], dst[sel], node_count))
        return cls(int(node_count), int(label_count), tuple(mats), bool(augmented))

    def edges(self, label):
        """Return ``(src, dst)`` index arrays of one label, in CSR order."""
        mat = self.adjacency[label]
        src = np.repeat(np.arange(self.node_count), np.diff(mat.indptr))
        return src, mat.indices.astype(np.int64)

    def edge_triples(self):
        """Return ``(src, dst, label)`` arrays over all labels."""
        parts = [self.edges(lab) + (lab,) for lab in range(self.label_count)]
        if not parts:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty, empty
        src = np.concatenate([p[0] for p in parts])
        dst = np.concatenate([p[1] for p in parts])
        lab = np.concatenate([np.full(p[0].size, p[2], dtype=np.int64) for p in parts])
        return src, dst, lab

    @property
    def edge_count(self):
        return sum(int(m.nnz) for m in self.adjacency)

    def edge_counts(self):
        """Number of edges ``|E_l|`` per label."""
        return np.array([m.nnz for m in self.adjacency], dtype=np.int64)

    def weighted_adjacency(self, weights):
        """Sparse ``N x N`` matrix ``sum_l w_l E_l`` (CSR)."""
        weights = _check_weights(self, weights)
        total = sp.csr_matrix((self.node_count, self.node_count), dtype=np.float64)
        for w, mat in zip(weights, self.adjacency):
            if w != 0.0:
                total = total + w * mat
        total.sum_duplicates()
        total.sort_indices()
        return total

    def same_edges(self, other):
        if (self.node_count, self.label_count) != (other.node_count, other.label_count):
            return False
        return all((a != b).nnz == 0 for a, b in zip(self.adjacency, other.adjacency))


def _binary_csr(src, dst, n):
    data = np.ones(src.size, dtype=np.float64)
    mat = sp.csr_matrix((data, (src, dst)), shape=(n, n))
    mat.sum_duplicates()
    mat.data[:] = 1.0
    mat.sort_indices()
    return mat


def _check_weights(g, weights):
    weights = np.asarray(weights, dtype=np.float64).ravel()
    if weights.shape != (g.label_count,):
        raise ValueError(
            f"weight vector has length {weights.size}, graph has {g.label_count} labels"
        )
    if np.any(weights < 0) or not np.all(np.isfinite(weights)):
        raise ValueError("label weights must be finite and non-negative")
    return weights


def uniform_weights(g):
    """All-ones label weight vector for ``g``."""
    return np.ones(g.label_count, dtype=np.float64)


def augment_with_reverse_labels(g):
    """Add, for every label ``l``, a label ``l + L`` holding the reversed edges.

    Self-loops map onto themselves.
    """
    if g.augmented:
        raise ValueError("graph is already augmented with reverse labels")
    reversed_ = tuple(m.T.tocsr(copy=True) for m in g.adjacency)
    for m in reversed_:
        m.sort_indices()
    return LabeledGraph(
        g.node_count, 2 * g.label_count, g.adjacency + reversed_, augmented=True
    )


def forward_part(g):
    """Drop the reverse labels of an augmented graph."""
    if not g.augmented:
        raise ValueError("graph is not augmented")
    half = g.label_count // 2
    return LabeledGraph(g.node_count, half, g.adjacency[:half], augmented=False)


def weighted_out_degree(g, weights):
    """Weighted out-degree ``d_i = sum_j sum_l w_l E_l[i, j]``."""
    weights = _check_weights(g, weights)
    d = np.zeros(g.node_count, dtype=np.float64)
    for w, mat in zip(weights, g.adjacency):
        d += w * np.diff(mat.indptr)
    return d


# -- TSV I/O -----------------------------------------------------------------

_HEADER_PREFIX = "#"


def _parse_header(line):
    # "# nodes=N labels=L"
    fields = dict(
        tok.split("=", 1) for tok in line.lstrip("#").split() if "=" in tok
    )
    try:
        return int(fields["nodes"]), int(fields["labels"])
    except (KeyError, ValueError):
        return None


def load_edge_list(path, node_count=None, label_count=None):
    """Read a ``src<TAB>dst<TAB>label`` edge list.

    Lines starting with ``#`` are comments. A leading ``# nodes=N labels=L``
    header supplies the universe sizes when they are not passed explicitly;
    explicit arguments win. Blank lines are skipped.

    Raises
    ------
    GraphFormatError
        On unparsable lines (with the line number) or out-of-range ids.
    """
    src, dst, lab, linenos = [], [], [], []
    header = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            if line.startswith(_HEADER_PREFIX):
                if header is None and not src:
                    header = _parse_header(line)
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise GraphFormatError(
                    f"{path}:{lineno}: expected 3 tab-separated fields, got {len(parts)}"
                )
            try:
                s, d, l = (int(p) for p in parts)
            except ValueError:
                raise GraphFormatError(f"{path}:{lineno}: non-integer field") from None
            src.append(s)
            dst.append(d)
            lab.append(l)
            linenos.append(lineno)

    if node_count is None or label_count is None:
        if header is None:
            raise GraphFormatError(
                f"{path}: node/label counts not given and no '# nodes=N labels=L' header"
            )
        node_count = header[0] if node_count is None else node_count
        label_count = header[1] if label_count is None else label_count

    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    lab = np.asarray(lab, dtype=np.int64)
    bad = (src < 0) | (src >= node_count) | (dst < 0) | (dst >= node_count)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise GraphFormatError(
            f"{path}:{linenos[i]}: node out of range in edge ({src[i]}, {dst[i]}, {lab[i]}), N={node_count}"
        )
    bad = (lab < 0) | (lab >= label_count)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise GraphFormatError(
            f"{path}:{linenos[i]}: label out of range in edge ({src[i]}, {dst[i]}, {lab[i]}), L={label_count}"
        )
    return LabeledGraph.from_edges(node_count, label_count, src, dst, lab)


def save_edge_list(g, path):
    """Write ``g`` as an edge-list TSV with a ``# nodes=N labels=L`` header."""
    src, dst, lab = g.edge_triples()
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# nodes={g.node_count} labels={g.label_count}\n")
        for s, d, l in zip(src.tolist(), dst.tolist(), lab.tolist()):
            fh.write(f"{s}\t{d}\t{l}\n")


def load_label_weights(path, label_count, base_label_count=None):
    """Read a ``label<TAB>weight`` file into a length-``label_count`` vector.

    Unlisted labels default to 1.0. If ``base_label_count`` is given (the
    label count before reverse augmentation), an unlisted reverse label
    ``l + base_label_count`` inherits the weight listed for ``l``.
    """
    given = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise GraphFormatError(f"{path}:{lineno}: expected 'label<TAB>weight'")
            try:
                lab, w = int(parts[0]), float(parts[1])
            except ValueError:
                raise GraphFormatError(f"{path}:{lineno}: unparsable label weight") from None
            if not 0 <= lab < label_count:
                raise GraphFormatError(f"{path}:{lineno}: label {lab} out of range")
            if not (np.isfinite(w) and w >= 0):
                raise GraphFormatError(f"{path}:{lineno}: weight must be non-negative")
            given[lab] = w

    weights = np.ones(label_count, dtype=np.float64)
    for lab, w in given.items():
        weights[lab] = w
    if base_label_count is not None:
        for lab in range(base_label_count, label_count):
            fwd = lab - base_label_count
            if lab not in given and fwd in given:
                weights[lab] = given[fwd]
    return weights
