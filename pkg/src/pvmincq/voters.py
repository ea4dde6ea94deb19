"""Gaussian-kernel voter sets and their output matrices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist


@dataclass(frozen=True)
class VoterSet:
    """Gaussian-kernel voters, one per center, sharing the width gamma."""

    centers: np.ndarray
    gamma: float

    def __post_init__(self):
        centers = np.asarray(self.centers, dtype=np.float64)
        if centers.ndim != 2 or centers.shape[0] == 0:
            raise ValueError("centers must be a nonempty (H, d) array")
        if self.gamma <= 0:
            raise ValueError("gamma must be > 0")
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "gamma", float(self.gamma))

    def __len__(self) -> int:
        return self.centers.shape[0]

    @property
    def dim(self) -> int:
        return self.centers.shape[1]


@dataclass(frozen=True)
class VoteMatrix:
    """Matrix of voter outputs, entry (i, j) = h_j(x_i), each in (0, 1]."""

    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise ValueError("values must be a 2-d array")
        object.__setattr__(self, "values", values)

    @property
    def n_points(self) -> int:
        return self.values.shape[0]

    @property
    def n_voters(self) -> int:
        return self.values.shape[1]


def gaussian_kernel(x, c, gamma: float) -> float:
    """exp(-gamma * ||x - c||^2); in (0, 1], symmetric in x and c."""
    x = np.asarray(x, dtype=np.float64).ravel()
    c = np.asarray(c, dtype=np.float64).ravel()
    if x.shape != c.shape:
        raise ValueError(f"dimension mismatch: {x.shape[0]} vs {c.shape[0]}")
    if gamma <= 0:
        raise ValueError("gamma must be > 0")
    diff = x - c
    return float(np.exp(-gamma * (diff @ diff)))


def build_voters(training_points, gamma: float) -> VoterSet:
    """One voter per training point, centered at it."""
    points = np.asarray(training_points, dtype=np.float64)
    if points.ndim != 2 or points.shape[0] == 0:
        raise ValueError("training_points must be a nonempty (n, d) array")
    return VoterSet(points.copy(), gamma)


def kernel_values(points, centers, gamma: float) -> np.ndarray:
    """Gaussian kernel between each point (rows) and each center (columns)."""
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    centers = np.atleast_2d(np.asarray(centers, dtype=np.float64))
    if points.shape[1] != centers.shape[1]:
        raise ValueError(
            f"dimension mismatch: points are {points.shape[1]}-d, "
            f"centers are {centers.shape[1]}-d"
        )
    return np.exp(-gamma * cdist(points, centers, "sqeuclidean"))


def vote_matrix(voters: VoterSet, sample_points) -> VoteMatrix:
    """Evaluate every voter on every sample point."""
    pts = sample_points.points if hasattr(sample_points, "points") else sample_points
    return VoteMatrix(kernel_values(pts, voters.centers, voters.gamma))
