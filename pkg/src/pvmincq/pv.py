"""Empirical perturbed-variation divergence between two point clouds.

Two samples are close under this divergence when every point of one has a
partner within epsilon in the other: build the bipartite graph of
within-epsilon pairs, take a maximum matching, and score the fraction of
unmatched points on each side.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from ._kernels import max_bipartite_matching


@dataclass(frozen=True)
class EpsilonGraph:
    """Bipartite graph joining source/target points at distance <= epsilon."""

    n_source: int
    n_target: int
    edges: np.ndarray  # (E, 2) int64 rows (source_index, target_index)
    epsilon: float

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        object.__setattr__(self, "edges", edges)

    @property
    def n_edges(self) -> int:
        return self.edges.shape[0]

    def adjacency_csr(self):
        """(indptr, indices) of the source -> target adjacency, sorted."""
        counts = np.bincount(self.edges[:, 0], minlength=self.n_source)
        indptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
        return indptr, np.ascontiguousarray(self.edges[:, 1])


@dataclass(frozen=True)
class MatchingResult:
    """A maximum matching with the unmatched counts and divergence value."""

    pairs: np.ndarray  # (k, 2) int64 rows (source_index, target_index)
    unmatched_source: int
    unmatched_target: int
    pv_value: float

    def __post_init__(self):
        object.__setattr__(
            self, "pairs", np.asarray(self.pairs, dtype=np.int64).reshape(-1, 2)
        )


def _points_of(sample) -> np.ndarray:
    pts = sample.points if hasattr(sample, "points") else sample
    pts = np.asarray(pts, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.shape[0] == 0:
        raise ValueError("samples must be nonempty")
    return pts


def build_graph(source_points, target_points, epsilon: float) -> EpsilonGraph:
    """Edges join every (source, target) pair at Euclidean distance <= epsilon."""
    if epsilon <= 0:
        raise ValueError("epsilon must be > 0")
    src = _points_of(source_points)
    tgt = _points_of(target_points)
    if src.shape[1] != tgt.shape[1]:
        raise ValueError(
            f"dimension mismatch: {src.shape[1]} vs {tgt.shape[1]}"
        )
    close = cdist(src, tgt) <= epsilon
    edges = np.argwhere(close)  # row-major order: sorted by source then target
    return EpsilonGraph(src.shape[0], tgt.shape[0], edges, float(epsilon))


def max_matching(graph: EpsilonGraph) -> MatchingResult:
    """Maximum-cardinality matching on the epsilon graph plus the divergence.

    The matching cardinality (hence the divergence value and unmatched
    counts) is unique; the specific pairing returned is whichever the
    algorithm finds.
    """
    indptr, indices = graph.adjacency_csr()
    pair_left, _, size = max_bipartite_matching(
        indptr, indices, graph.n_source, graph.n_target
    )
    matched = np.nonzero(pair_left >= 0)[0]
    pairs = np.column_stack([matched, pair_left[matched]])
    unmatched_s = graph.n_source - size
    unmatched_t = graph.n_target - size
    pv_value = 0.5 * (
        unmatched_s / graph.n_source + unmatched_t / graph.n_target
    )
    return MatchingResult(pairs, unmatched_s, unmatched_t, float(pv_value))


def pv_estimate(source_points, target_points, epsilon: float) -> float:
    """The divergence value in [0, 1]; 0 iff a matching saturates both sides."""
    return max_matching(build_graph(source_points, target_points, epsilon)).pv_value
