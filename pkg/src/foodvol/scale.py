"""Metric scale recovery from reference-object corner points.

A planar reference object of known physical square size is detected
upstream and its corner points triangulated into the (unitless)
reconstruction frame. The meters-per-model-unit factor is

    s = square_size_real / median(adjacent corner distances)

where the distances run over grid-adjacent corner pairs (same row,
neighboring column; same column, neighboring row) — exactly the pairs
whose physical separation is one square edge. The median makes the
estimate robust to a minority of poorly triangulated corners.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGridError, InvalidGridError


@dataclass(frozen=True)
class CornerGrid:
    """Row-major grid of 3D corner points plus the physical square size.

    ``corners[r * cols + c]`` is the corner in grid row ``r``, column
    ``c``; ``square_size_real`` is the edge length of one checkerboard
    square in meters.
    """

    corners: np.ndarray
    rows: int
    cols: int
    square_size_real: float

    def __post_init__(self):
        rows, cols = int(self.rows), int(self.cols)
        if rows < 2 or cols < 2:
            raise InvalidGridError(f"grid must be at least 2x2, got {rows}x{cols}")
        size = float(self.square_size_real)
        if not np.isfinite(size) or size <= 0.0:
            raise InvalidGridError(f"square_size_real must be positive, got {size}")
        try:
            corners = np.ascontiguousarray(self.corners, dtype=np.float64)
        except ValueError as exc:
            raise InvalidGridError(f"corners are not a numeric array: {exc}") from None
        if corners.ndim != 2 or corners.shape[1] != 3:
            raise InvalidGridError(f"corners must have shape (n, 3), got {corners.shape}")
        if corners.shape[0] != rows * cols:
            raise InvalidGridError(
                f"expected {rows * cols} corners for a {rows}x{cols} grid, "
                f"got {corners.shape[0]}"
            )
        if not np.isfinite(corners).all():
            raise InvalidGridError("corners contain non-finite coordinates")
        corners.setflags(write=False)
        object.__setattr__(self, "corners", corners)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "square_size_real", size)


@dataclass(frozen=True)
class ScaleEstimate:
    """Result of scale estimation; keeps the distances for diagnostics."""

    s: float
    median_distance: float
    distance_count: int
    distances: np.ndarray

    def __post_init__(self):
        distances = np.ascontiguousarray(self.distances, dtype=np.float64)
        distances.setflags(write=False)
        object.__setattr__(self, "distances", distances)


def adjacent_corner_distances(grid: CornerGrid) -> np.ndarray:
    """Euclidean distances of all grid-adjacent corner pairs.

    Order is deterministic: horizontal pairs in row-major order first,
    then vertical pairs in column-major order; the count is
    ``rows*(cols-1) + cols*(rows-1)``. Raises DegenerateGridError when
    any adjacent pair coincides.
    """
    lattice = grid.corners.reshape(grid.rows, grid.cols, 3)
    horizontal = np.linalg.norm(np.diff(lattice, axis=1), axis=2)
    vertical = np.linalg.norm(np.diff(lattice, axis=0), axis=2)
    distances = np.concatenate([horizontal.ravel(), vertical.ravel(order="F")])
    if np.any(distances == 0.0):
        raise DegenerateGridError("adjacent grid corners coincide")
    return distances


def scale_from_distances(square_size_real: float, distances) -> ScaleEstimate:
    """Scale factor from an already-measured list of adjacent distances.

    The median of an even-length distance list is the mean of its two
    central elements.
    """
    size = float(square_size_real)
    if not np.isfinite(size) or size <= 0.0:
        raise InvalidGridError(f"square_size_real must be positive, got {size}")
    distances = np.ascontiguousarray(distances, dtype=np.float64).ravel()
    if distances.size == 0:
        raise DegenerateGridError("no adjacent corner distances")
    if not np.isfinite(distances).all() or np.any(distances <= 0.0):
        raise DegenerateGridError("adjacent corner distances must be positive and finite")
    median = float(np.median(distances))
    return ScaleEstimate(
        s=size / median,
        median_distance=median,
        distance_count=int(distances.size),
        distances=distances,
    )


def estimate_scale(grid: CornerGrid) -> ScaleEstimate:
    """Meters-per-model-unit factor from one corner grid."""
    return scale_from_distances(grid.square_size_real, adjacent_corner_distances(grid))


def load_corner_grid(path) -> CornerGrid:
    """Read a corner grid from JSON.

    Expected document: ``{"rows": R, "cols": C, "square_size_real_m": L,
    "corners": [[x, y, z], ...]}`` with corners in row-major order.
    """
    with open(path, "r", encoding="utf-8") as handle:
        doc = json.load(handle)
    if not isinstance(doc, dict):
        raise InvalidGridError(f"{path}: corner file must hold a JSON object")
    missing = [k for k in ("rows", "cols", "square_size_real_m", "corners") if k not in doc]
    if missing:
        raise InvalidGridError(f"{path}: missing fields {missing}")
    try:
        return CornerGrid(
            corners=np.asarray(doc["corners"], dtype=np.float64),
            rows=doc["rows"],
            cols=doc["cols"],
            square_size_real=doc["square_size_real_m"],
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InvalidGridError):
            raise
        raise InvalidGridError(f"{path}: {exc}") from None


def save_corner_grid(grid: CornerGrid, path) -> None:
    """Write a corner grid as JSON (inverse of ``load_corner_grid``)."""
    doc = {
        "rows": grid.rows,
        "cols": grid.cols,
        "square_size_real_m": grid.square_size_real,
        "corners": [[float(x) for x in row] for row in grid.corners],
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(doc, handle, indent=2)
        handle.write("\n")
