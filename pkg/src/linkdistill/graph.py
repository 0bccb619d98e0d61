"""Immutable undirected graph in compressed adjacency (CSR) form.

All heuristics and samplers read from this structure; it is frozen after
construction and safe to share across workers.
"""

import logging

import numpy as np

logger = logging.getLogger(__name__)


class Graph:
    """Undirected simple graph with sorted flat adjacency.

    ``offsets`` has length ``num_nodes + 1``; the neighbors of node ``i``
    are ``neighbor_ids[offsets[i]:offsets[i+1]]``, strictly increasing.
    """

    __slots__ = ("num_nodes", "num_edges", "offsets", "neighbor_ids", "_frozen")

    def __init__(self, num_nodes, offsets, neighbor_ids, num_edges):
        self.num_nodes = int(num_nodes)
        self.num_edges = int(num_edges)
        self.offsets = offsets
        self.neighbor_ids = neighbor_ids
        offsets.setflags(write=False)
        neighbor_ids.setflags(write=False)
        self._frozen = True

    def __setattr__(self, name, value):
        if getattr(self, "_frozen", False):
            raise AttributeError("Graph is immutable after construction")
        object.__setattr__(self, name, value)

    def __repr__(self):
        return f"Graph(num_nodes={self.num_nodes}, num_edges={self.num_edges})"

    def neighbors(self, i):
        """Sorted neighbor ids of node ``i`` (read-only view)."""
        self._check_node(i)
        return self.neighbor_ids[self.offsets[i]:self.offsets[i + 1]]

    def degree(self, i):
        self._check_node(i)
        return int(self.offsets[i + 1] - self.offsets[i])

    def degrees(self):
        """Degree of every node as an int64 array."""
        return np.diff(self.offsets)

    def has_edge(self, i, j):
        self._check_node(i)
        self._check_node(j)
        nbrs = self.neighbor_ids[self.offsets[i]:self.offsets[i + 1]]
        k = np.searchsorted(nbrs, j)
        return k < len(nbrs) and nbrs[k] == j

    def edges(self):
        """Canonical edge array of shape (num_edges, 2) with u < v."""
        src = np.repeat(np.arange(self.num_nodes, dtype=np.int64), self.degrees())
        dst = self.neighbor_ids.astype(np.int64)
        mask = src < dst
        return np.stack([src[mask], dst[mask]], axis=1)

    def _check_node(self, i):
        if not 0 <= i < self.num_nodes:
            raise ValueError(f"node {i} out of range [0, {self.num_nodes})")


def build_graph(edge_pairs, num_nodes=None):
    """Build a canonical Graph from raw (u, v) pairs.

    Duplicate edges (either orientation) and self-loops are dropped; the
    dropped counts are logged. Node ids must be < ``num_nodes`` when given,
    otherwise ``num_nodes`` is inferred as max id + 1.
    """
    pairs = np.asarray(edge_pairs, dtype=np.int64).reshape(-1, 2)
    if pairs.size and pairs.min() < 0:
        raise ValueError("negative node id in edge list")
    if num_nodes is None:
        num_nodes = int(pairs.max()) + 1 if pairs.size else 0
    elif pairs.size and pairs.max() >= num_nodes:
        raise ValueError(
            f"node id {int(pairs.max())} out of range for num_nodes={num_nodes}")

    n_self = 0
    n_dup = 0
    if pairs.size:
        self_mask = pairs[:, 0] == pairs[:, 1]
        n_self = int(self_mask.sum())
        pairs = pairs[~self_mask]
        lo = np.minimum(pairs[:, 0], pairs[:, 1])
        hi = np.maximum(pairs[:, 0], pairs[:, 1])
        keys = np.unique(lo * num_nodes + hi)
        n_dup = pairs.shape[0] - keys.shape[0]
        lo, hi = keys // num_nodes, keys % num_nodes
    else:
        lo = hi = np.empty(0, dtype=np.int64)
    if n_self or n_dup:
        logger.info("build_graph dropped %d self-loops and %d duplicate edges",
                    n_self, n_dup)

    src = np.concatenate([lo, hi])
    dst = np.concatenate([hi, lo])
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    offsets = np.zeros(num_nodes + 1, dtype=np.int64)
    np.add.at(offsets, src + 1, 1)
    offsets = np.cumsum(offsets)
    return Graph(num_nodes, offsets, dst, len(lo))


def intersect_neighbors(g, i, j):
    """Sorted common neighbors of i and j (merge of two sorted lists)."""
    a = g.neighbors(i)
    b = g.neighbors(j)
    if len(a) > len(b):
        a, b = b, a
    if len(a) == 0:
        return a
    idx = np.searchsorted(b, a)
    idx[idx == len(b)] = 0  # out-of-range probes can never match; any valid slot works
    return a[b[idx] == a]


class FeatureMatrix:
    """Dense row-major node feature matrix, one row per node."""

    __slots__ = ("num_nodes", "dim", "values")

    def __init__(self, values):
        values = np.ascontiguousarray(values, dtype=np.float32)
        if values.ndim != 2:
            raise ValueError("feature matrix must be 2-D")
        if not np.isfinite(values).all():
            raise ValueError("feature matrix contains NaN or Inf")
        self.values = values
        self.num_nodes, self.dim = values.shape

    def row(self, i):
        if not 0 <= i < self.num_nodes:
            raise ValueError(f"node {i} out of range [0, {self.num_nodes})")
        return self.values[i]


FEATURE_MAGIC = b"EHDMFEA1"


def load_edge_list(path):
    """Read a plain-text edge list: two ints per line, '#' lines ignored."""
    pairs = []
    with open(path) as f:
        for ln, line in enumerate(f, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{ln}: expected two integers, got {line!r}")
            u, v = int(parts[0]), int(parts[1])
            if u < 0 or v < 0:
                raise ValueError(f"{path}:{ln}: negative node id")
            pairs.append((u, v))
    return np.asarray(pairs, dtype=np.int64).reshape(-1, 2)


def save_edge_list(path, pairs, header=None):
    with open(path, "w") as f:
        if header:
            f.write(f"# {header}\n")
        for u, v in np.asarray(pairs, dtype=np.int64).reshape(-1, 2):
            f.write(f"{u} {v}\n")


def save_features(path, features):
    """Binary feature file: magic, N and F as u64 LE, then f32 LE rows."""
    values = features.values if isinstance(features, FeatureMatrix) else np.asarray(features, dtype=np.float32)
    with open(path, "wb") as f:
        f.write(FEATURE_MAGIC)
        np.asarray(values.shape, dtype="<u8").tofile(f)
        values.astype("<f4").tofile(f)


def load_features(path):
    """Load node features from the binary format or a CSV fallback."""
    with open(path, "rb") as f:
        magic = f.read(8)
        if magic == FEATURE_MAGIC:
            n, d = np.fromfile(f, dtype="<u8", count=2)
            values = np.fromfile(f, dtype="<f4", count=int(n) * int(d))
            if values.size != int(n) * int(d):
                raise ValueError(f"{path}: truncated feature file")
            return FeatureMatrix(values.reshape(int(n), int(d)))
    values = np.loadtxt(path, delimiter=",", dtype=np.float32, ndmin=2)
    return FeatureMatrix(values)
