"""Surface sampling, Chamfer distance, and volume percentage errors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .errors import EmptyCloudError, NonPositiveVolumeError, ZeroAreaMeshError
from .mesh import TriangleMesh


@dataclass(frozen=True)
class SampledCloud:
    """Points drawn from a mesh surface, tagged with their provenance.

    Regenerating with the same mesh, count and seed reproduces the exact
    same points.
    """

    points: np.ndarray
    source_mesh_id: str
    sample_count: int
    seed: int

    def __post_init__(self):
        points = np.ascontiguousarray(self.points, dtype=np.float64)
        if points.ndim != 2 or points.shape[1] != 3:
            raise ValueError(f"points must have shape (n, 3), got {points.shape}")
        if points.shape[0] != self.sample_count:
            raise ValueError(
                f"sample_count is {self.sample_count} but {points.shape[0]} points given"
            )
        points.setflags(write=False)
        object.__setattr__(self, "points", points)

    def transformed(self, transform) -> SampledCloud:
        """Same cloud with a RigidTransform applied to every point."""
        return SampledCloud(
            points=transform.apply(self.points),
            source_mesh_id=self.source_mesh_id,
            sample_count=self.sample_count,
            seed=self.seed,
        )


@dataclass(frozen=True)
class ChamferResult:
    """Bidirectional nearest-neighbor distance summary.

    ``value`` is always the average of the two directional reductions;
    with the default mean reduction that is the usual (un-squared)
    Chamfer distance.
    """

    value: float
    forward_mean: float
    backward_mean: float


def _cloud_points(cloud, name: str) -> np.ndarray:
    pts = np.asarray(getattr(cloud, "points", cloud), dtype=np.float64)
    if pts.size == 0:
        raise EmptyCloudError(f"{name} cloud is empty")
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise ValueError(f"{name} must be an (n, 3) point array, got shape {pts.shape}")
    return pts


def sample_surface(mesh: TriangleMesh, n: int, seed: int, mesh_id: str = "") -> SampledCloud:
    """Draw ``n`` area-weighted uniform points from the mesh surface.

    Faces are chosen proportionally to their area, then a point is placed
    uniformly inside each chosen triangle (barycentric sampling with the
    square folded onto the simplex). Deterministic for a fixed seed;
    zero-area (degenerate) faces are never selected.
    """
    n = int(n)
    if n < 1:
        raise ValueError(f"sample count must be >= 1, got {n}")
    v0 = mesh.vertices[mesh.faces[:, 0]]
    v1 = mesh.vertices[mesh.faces[:, 1]]
    v2 = mesh.vertices[mesh.faces[:, 2]]
    areas = 0.5 * np.linalg.norm(np.cross(v1 - v0, v2 - v0), axis=1)
    total = float(areas.sum())
    if mesh.n_faces == 0 or total <= 0.0:
        raise ZeroAreaMeshError("mesh has no face with positive area")

    rng = np.random.default_rng(seed)
    cumulative = np.cumsum(areas)
    picks = rng.random(n) * cumulative[-1]
    face_idx = np.searchsorted(cumulative, picks, side="right")
    np.clip(face_idx, 0, mesh.n_faces - 1, out=face_idx)

    uv = rng.random((n, 2))
    fold = uv.sum(axis=1) > 1.0
    uv[fold] = 1.0 - uv[fold]
    points = (
        v0[face_idx]
        + uv[:, :1] * (v1[face_idx] - v0[face_idx])
        + uv[:, 1:] * (v2[face_idx] - v0[face_idx])
    )
    return SampledCloud(points=points, source_mesh_id=mesh_id, sample_count=n, seed=int(seed))


def chamfer_distance(a, b, *, squared: bool = False, reduction: str = "mean") -> ChamferResult:
    """Symmetric nearest-neighbor distance between two point clouds.

    Default convention: mean un-squared Euclidean NN distance in each
    direction, averaged over the two directions. ``squared=True`` squares
    each NN distance first; ``reduction='sum'`` totals instead of
    averaging within a direction. Exact k-d tree neighbors, so the result
    is deterministic and symmetric under swapping ``a`` and ``b``.
    """
    if reduction not in ("mean", "sum"):
        raise ValueError(f"reduction must be 'mean' or 'sum', got {reduction!r}")
    pa = _cloud_points(a, "first")
    pb = _cloud_points(b, "second")
    forward, _ = cKDTree(pb).query(pa, workers=-1)
    backward, _ = cKDTree(pa).query(pb, workers=-1)
    if squared:
        forward = np.square(forward)
        backward = np.square(backward)
    reduce = np.mean if reduction == "mean" else np.sum
    forward_value = float(reduce(forward))
    backward_value = float(reduce(backward))
    return ChamferResult(
        value=(forward_value + backward_value) / 2.0,
        forward_mean=forward_value,
        backward_mean=backward_value,
    )


def ape(v_true: float, v_pred: float) -> float:
    """Absolute percentage error ``|v_true - v_pred| / v_true * 100``."""
    v_true = float(v_true)
    if not np.isfinite(v_true) or v_true <= 0.0:
        raise NonPositiveVolumeError(f"true volume must be positive, got {v_true}")
    return abs(v_true - float(v_pred)) / v_true * 100.0


def mape(pairs) -> float:
    """Mean of ``ape`` over (v_true, v_pred) pairs."""
    values = [ape(v_true, v_pred) for v_true, v_pred in pairs]
    if not values:
        raise ValueError("mape needs at least one (v_true, v_pred) pair")
    return float(np.mean(values))
