"""Graph-proximity teacher scores: CN, AA, RA and capped shortest path.

All scores are computed on an immutable Graph (for distillation, the
training graph only) and are symmetric in the node pair. Batch scoring
has a sparse-matrix fast path for the three local heuristics; CSP runs a
bidirectional BFS per pair, each side expanding at most tau/2 levels.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .graph import intersect_neighbors

HEURISTIC_TAGS = ("CN", "AA", "RA", "CSP")


@dataclass(frozen=True)
class HeuristicKind:
    tag: str
    tau: int | None = None

    def __post_init__(self):
        if self.tag not in HEURISTIC_TAGS:
            raise ValueError(f"unknown heuristic tag {self.tag!r}")
        if self.tag == "CSP":
            if self.tau is None or self.tau < 2 or self.tau % 2 != 0:
                raise ValueError("CSP needs an even cap tau >= 2")
        elif self.tau is not None:
            raise ValueError(f"{self.tag} takes no tau")

    def __str__(self):
        return self.tag if self.tau is None else f"{self.tag}(tau={self.tau})"


@dataclass(frozen=True)
class ScoredPair:
    i: int
    j: int
    score: float


def score_cn(g, i, j):
    """Number of common neighbors of i and j."""
    return float(len(intersect_neighbors(g, i, j)))


def score_aa(g, i, j):
    """Sum of 1/ln(deg(k)) over common neighbors k (deg(k) >= 2 always)."""
    common = intersect_neighbors(g, i, j)
    if len(common) == 0:
        return 0.0
    degs = (g.offsets[common + 1] - g.offsets[common]).astype(np.float64)
    return float(np.sum(1.0 / np.log(degs)))


def score_ra(g, i, j):
    """Sum of reciprocal degrees over common neighbors."""
    common = intersect_neighbors(g, i, j)
    if len(common) == 0:
        return 0.0
    degs = (g.offsets[common + 1] - g.offsets[common]).astype(np.float64)
    return float(np.sum(1.0 / degs))


def bidirectional_bfs_distance(g, i, j, max_dist):
    """Unweighted shortest-path length, or None when it exceeds max_dist.

    Expands the smaller frontier level by level, at most ceil(max_dist/2)
    levels per side, so a distance-max_dist pair is still detected at the
    meeting layer.
    """
    g._check_node(i)
    g._check_node(j)
    if i == j:
        return 0
    offsets, nbrs = g.offsets, g.neighbor_ids
    half = (max_dist + 1) // 2
    dist_a = {i: 0}
    dist_b = {j: 0}
    frontier_a, frontier_b = [i], [j]
    depth_a = depth_b = 0
    best = None
    while frontier_a and frontier_b:
        bound = max_dist if best is None else min(best - 1, max_dist)
        if depth_a + depth_b + 1 > bound:
            break
        # pick the cheaper side; respect the per-side level cap
        expand_a = len(frontier_a) <= len(frontier_b)
        if expand_a and depth_a >= half:
            expand_a = False
        if not expand_a and depth_b >= half:
            expand_a = True
            if depth_a >= half:
                break
        if expand_a:
            mine, other = dist_a, dist_b
            depth_a += 1
            depth = depth_a
            frontier = frontier_a
        else:
            mine, other = dist_b, dist_a
            depth_b += 1
            depth = depth_b
            frontier = frontier_b
        nxt = []
        for u in frontier:
            for v in nbrs[offsets[u]:offsets[u + 1]]:
                v = int(v)
                if v in mine:
                    continue
                mine[v] = depth
                nxt.append(v)
                if v in other:
                    cand = depth + other[v]
                    if best is None or cand < best:
                        best = cand
        if expand_a:
            frontier_a = nxt
        else:
            frontier_b = nxt
    if best is not None and best <= max_dist:
        return best
    return None


def score_csp(g, i, j, tau):
    """1/min(tau, SP(i, j)); unreachable-within-tau pairs score 1/tau."""
    if tau < 2 or tau % 2 != 0:
        raise ValueError("tau must be an even integer >= 2")
    if i == j:
        raise ValueError("CSP is undefined for i == j")
    d = bidirectional_bfs_distance(g, i, j, tau)
    if d is None:
        return 1.0 / tau
    return 1.0 / min(tau, d)


def _adjacency_csr(g):
    data = np.ones(len(g.neighbor_ids), dtype=np.float64)
    return sp.csr_matrix((data, g.neighbor_ids.astype(np.int64), g.offsets),
                         shape=(g.num_nodes, g.num_nodes))


def score_pairs(g, pairs, kind, block=65536):
    """Vectorized batch scoring; returns a float64 array aligned with pairs."""
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    if pairs.size and (pairs.min() < 0 or pairs.max() >= g.num_nodes):
        raise ValueError("node id out of range in pair batch")
    out = np.zeros(len(pairs), dtype=np.float64)
    if len(pairs) == 0:
        return out
    if kind.tag == "CSP":
        if np.any(pairs[:, 0] == pairs[:, 1]):
            raise ValueError("CSP is undefined for i == j")
        for k, (i, j) in enumerate(pairs):
            out[k] = score_csp(g, int(i), int(j), kind.tau)
        return out
    adj = _adjacency_csr(g)
    if kind.tag == "CN":
        weighted = adj
    else:
        degs = g.degrees().astype(np.float64)
        with np.errstate(divide="ignore"):
            w = 1.0 / np.log(degs) if kind.tag == "AA" else 1.0 / degs
        w[~np.isfinite(w)] = 0.0  # degree <= 1 nodes are never common neighbors
        weighted = adj.multiply(w[np.newaxis, :]).tocsr()
    for start in range(0, len(pairs), block):
        src = pairs[start:start + block, 0]
        dst = pairs[start:start + block, 1]
        out[start:start + block] = np.asarray(
            adj[src].multiply(weighted[dst]).sum(axis=1)).ravel()
    return out


def score_batch(g, pairs, kind):
    """Elementwise heuristic scores as ScoredPair records, order preserved."""
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    scores = score_pairs(g, pairs, kind)
    return [ScoredPair(int(i), int(j), float(s)) for (i, j), s in zip(pairs, scores)]


def normalize_guidance(score_lists):
    """Per-anchor max normalization into [0, 1]; all-zero rows stay zero."""
    out = []
    for scores in score_lists:
        scores = np.asarray(scores, dtype=np.float64)
        if scores.size and scores.min() < 0:
            raise ValueError("heuristic scores must be nonnegative")
        top = scores.max() if scores.size else 0.0
        out.append(scores / top if top > 0 else np.zeros_like(scores))
    return out
