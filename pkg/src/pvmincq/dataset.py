"""Rotating two-moons benchmark data and CSV point-cloud files."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

LABEL_VALUES = (-1.0, 1.0)


class CsvFormatError(ValueError):
    """Raised when a point-cloud CSV file violates the expected format."""


def _as_points(points) -> np.ndarray:
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise ValueError("points must be a nonempty (n, d) array")
    return pts


@dataclass(frozen=True)
class LabeledSample:
    """A point cloud in R^d with one label in {-1, +1} per point."""

    points: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        pts = _as_points(self.points)
        labels = np.asarray(self.labels, dtype=np.float64).ravel()
        if labels.shape[0] != pts.shape[0]:
            raise ValueError(
                f"{pts.shape[0]} points but {labels.shape[0]} labels"
            )
        if not np.isin(labels, LABEL_VALUES).all():
            raise ValueError("labels must be -1 or +1")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def subset(self, indices) -> "LabeledSample":
        idx = np.asarray(indices)
        return LabeledSample(self.points[idx], self.labels[idx])

    def unlabeled(self) -> "UnlabeledSample":
        return UnlabeledSample(self.points)


@dataclass(frozen=True)
class UnlabeledSample:
    """A point cloud in R^d without labels."""

    points: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "points", _as_points(self.points))

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


def generate_moons(
    n_per_class: int,
    noise_std: float = 0.1,
    rotation_deg: float = 0.0,
    seed: int = 0,
) -> LabeledSample:
    """Sample the two-moons point cloud, optionally rotated.

    Class +1 lies on the upper unit semicircle centered at the origin,
    class -1 on the lower unit semicircle centered at (1, 0.5). Arc
    positions are drawn uniformly, isotropic Gaussian noise of standard
    deviation ``noise_std`` is added, and the whole cloud is then rotated
    anticlockwise by ``rotation_deg`` about the centroid of the noiseless
    configuration. Deterministic for a given ``seed``.
    """
    if n_per_class < 1:
        raise ValueError("n_per_class must be >= 1")
    if noise_std < 0:
        raise ValueError("noise_std must be >= 0")
    rng = np.random.default_rng(seed)
    t_pos = rng.uniform(0.0, np.pi, n_per_class)
    t_neg = rng.uniform(0.0, np.pi, n_per_class)
    pos = np.column_stack([np.cos(t_pos), np.sin(t_pos)])
    neg = np.column_stack([1.0 - np.cos(t_neg), 0.5 - np.sin(t_neg)])
    points = np.vstack([pos, neg])
    center = points.mean(axis=0)
    points = points + rng.normal(0.0, noise_std, size=points.shape)
    theta = np.deg2rad(rotation_deg)
    rot = np.array(
        [[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]]
    )
    points = (points - center) @ rot.T + center
    labels = np.concatenate([np.ones(n_per_class), -np.ones(n_per_class)])
    return LabeledSample(points, labels)


def _parse_row(fields: list[str], row_number: int, labeled: bool):
    values = []
    for field in fields:
        text = field.strip()
        try:
            values.append(float(text))
        except ValueError:
            raise CsvFormatError(
                f"non-numeric value {text!r} (row {row_number})"
            ) from None
    if labeled:
        label = values[-1]
        if label not in LABEL_VALUES:
            raise CsvFormatError(f"label must be -1 or +1 (row {row_number})")
        return values[:-1], label
    return values, None


def read_csv(path, labeled: bool = True, header: bool = False):
    """Read a point-cloud CSV; the last column is the label when ``labeled``.

    Returns a LabeledSample or an UnlabeledSample. Raises CsvFormatError on
    ragged rows, non-numeric fields, labels outside {-1, +1}, or an empty
    file; messages carry the 1-based data-row number.
    """
    points, labels = [], []
    width = None
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        if header:
            next(reader, None)
        for row_number, fields in enumerate(reader, start=1):
            if not fields:
                continue
            if width is None:
                width = len(fields)
                min_width = 2 if labeled else 1
                if width < min_width:
                    raise CsvFormatError(
                        f"expected at least {min_width} columns, got {width} "
                        f"(row {row_number})"
                    )
            elif len(fields) != width:
                raise CsvFormatError(
                    f"inconsistent row width: expected {width} fields, got "
                    f"{len(fields)} (row {row_number})"
                )
            coords, label = _parse_row(fields, row_number, labeled)
            points.append(coords)
            if labeled:
                labels.append(label)
    if not points:
        raise CsvFormatError("empty dataset")
    if labeled:
        return LabeledSample(np.array(points), np.array(labels))
    return UnlabeledSample(np.array(points))


def write_csv(sample, path, header: bool = False) -> None:
    """Write a sample as CSV; full float precision so read_csv round-trips."""
    labeled = isinstance(sample, LabeledSample)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        if header:
            cols = [f"x{i + 1}" for i in range(sample.dim)]
            if labeled:
                cols.append("label")
            writer.writerow(cols)
        for i in range(len(sample)):
            row = [repr(float(v)) for v in sample.points[i]]
            if labeled:
                row.append(str(int(sample.labels[i])))
            writer.writerow(row)
