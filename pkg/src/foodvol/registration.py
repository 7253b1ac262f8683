"""Rigid alignment: closed-form least-squares fitting and point-to-point ICP.

``best_rigid_fit`` solves the orthogonal Procrustes problem for paired
points (cross-covariance SVD with reflection correction), and ``icp``
alternates exact nearest-neighbor correspondence with that closed-form
fit. Initialization translates the source centroid onto the target
centroid; scale is never estimated here.

RMSE is measured after each applied increment against freshly recomputed
nearest neighbors, which makes the per-iteration RMSE sequence monotone
non-increasing (each half-step — refit and re-correspondence — can only
lower the summed squared distances). With a ``max_correspondence_distance``
cutoff the correspondence set itself changes between iterations and that
guarantee no longer holds.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .errors import EmptyCloudError, RegistrationError

_ROTATION_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class RigidTransform:
    """Proper rigid motion ``x -> rotation @ x + translation``."""

    rotation: np.ndarray
    translation: np.ndarray

    def __eq__(self, other):
        if not isinstance(other, RigidTransform):
            return NotImplemented
        return np.array_equal(self.rotation, other.rotation) and np.array_equal(
            self.translation, other.translation
        )

    def __hash__(self):
        return hash((self.rotation.tobytes(), self.translation.tobytes()))

    def __post_init__(self):
        rotation = np.ascontiguousarray(self.rotation, dtype=np.float64)
        translation = np.ascontiguousarray(self.translation, dtype=np.float64)
        if rotation.shape != (3, 3):
            raise ValueError(f"rotation must be 3x3, got {rotation.shape}")
        if translation.shape != (3,):
            raise ValueError(f"translation must be a 3-vector, got {translation.shape}")
        if not (np.isfinite(rotation).all() and np.isfinite(translation).all()):
            raise ValueError("transform contains non-finite entries")
        gram_error = np.abs(rotation.T @ rotation - np.eye(3)).max()
        if gram_error > _ROTATION_TOL:
            raise ValueError(f"rotation is not orthonormal (max deviation {gram_error:.3e})")
        det = np.linalg.det(rotation)
        if abs(det - 1.0) > _ROTATION_TOL:
            raise ValueError(f"rotation determinant is {det:.12f}, expected +1")
        rotation.setflags(write=False)
        translation.setflags(write=False)
        object.__setattr__(self, "rotation", rotation)
        object.__setattr__(self, "translation", translation)

    @classmethod
    def identity(cls) -> RigidTransform:
        return cls(np.eye(3), np.zeros(3))

    def apply(self, points) -> np.ndarray:
        """Transform one (3,) point or an (n, 3) batch."""
        pts = np.asarray(points, dtype=np.float64)
        return pts @ self.rotation.T + self.translation

    def compose(self, inner: RigidTransform) -> RigidTransform:
        """Transform equal to applying ``inner`` first, then ``self``."""
        return RigidTransform(
            self.rotation @ inner.rotation,
            self.rotation @ inner.translation + self.translation,
        )

    def inverse(self) -> RigidTransform:
        rt = self.rotation.T
        return RigidTransform(rt.copy(), -(rt @ self.translation))

    def to_json_dict(self) -> dict:
        """Row-major 3x3 matrix plus 3-vector, as plain lists."""
        return {
            "rotation": [[float(x) for x in row] for row in self.rotation],
            "translation": [float(x) for x in self.translation],
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> RigidTransform:
        return cls(np.asarray(doc["rotation"], dtype=np.float64),
                   np.asarray(doc["translation"], dtype=np.float64))

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(self.to_json_dict(), handle, indent=2)
            handle.write("\n")

    @classmethod
    def load(cls, path) -> RigidTransform:
        with open(path, "r", encoding="utf-8") as handle:
            return cls.from_json_dict(json.load(handle))


@dataclass(frozen=True)
class IcpParams:
    """Knobs for ``icp``.

    ``seed`` is reserved for subsampling strategies; the current
    implementation uses every source point and draws no random numbers.
    """

    max_iterations: int = 50
    convergence_eps: float = 1e-8
    max_correspondence_distance: float | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not self.convergence_eps > 0.0:
            raise ValueError("convergence_eps must be > 0")
        if self.max_correspondence_distance is not None and not (
            self.max_correspondence_distance > 0.0
        ):
            raise ValueError("max_correspondence_distance must be positive when set")


@dataclass(frozen=True)
class IcpResult:
    """Cumulative source-to-target transform plus convergence diagnostics.

    ``rmse_history[0]`` is the RMSE at the centroid-initialized pose and
    each later entry follows one applied increment, so
    ``len(rmse_history) == iterations_used + 1``.
    """

    transform: RigidTransform
    final_rmse: float
    iterations_used: int
    converged: bool
    rmse_history: tuple[float, ...] = field(repr=False)


def _point_array(cloud, name: str) -> np.ndarray:
    pts = np.asarray(getattr(cloud, "points", cloud), dtype=np.float64)
    if pts.size == 0:
        raise EmptyCloudError(f"{name} cloud is empty")
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise ValueError(f"{name} must be an (n, 3) point array, got shape {pts.shape}")
    return pts


def best_rigid_fit(source_points, target_points) -> RigidTransform:
    """Proper rigid transform minimizing sum ||R s_i + t - t_i||^2.

    Closed form: SVD of the centered cross-covariance, with the smallest
    singular direction flipped when the raw solution would be a
    reflection. Requires >= 3 pairs that are not (near-)collinear.
    """
    src = _point_array(source_points, "source")
    tgt = _point_array(target_points, "target")
    if src.shape[0] != tgt.shape[0]:
        raise RegistrationError(
            f"point lists differ in length ({src.shape[0]} vs {tgt.shape[0]})"
        )
    if src.shape[0] < 3:
        raise RegistrationError("rigid fitting needs at least 3 point pairs")
    src_centroid = src.mean(axis=0)
    tgt_centroid = tgt.mean(axis=0)
    cross_cov = (src - src_centroid).T @ (tgt - tgt_centroid)
    u, singular, vt = np.linalg.svd(cross_cov)
    if singular[1] <= 1e-12 * max(singular[0], np.finfo(np.float64).tiny):
        raise RegistrationError(
            "degenerate point configuration (coincident or collinear)"
        )
    correction = np.sign(np.linalg.det(vt.T @ u.T))
    rotation = vt.T @ np.diag([1.0, 1.0, correction]) @ u.T
    return RigidTransform(rotation, tgt_centroid - rotation @ src_centroid)


def _rms(distances: np.ndarray) -> float:
    return float(np.sqrt(np.mean(np.square(distances))))


def icp(source, target, params: IcpParams | None = None) -> IcpResult:
    """Point-to-point ICP mapping ``source`` into the frame of ``target``.

    Accepts SampledClouds or raw (n, 3) arrays. Deterministic: exact
    nearest neighbors (k-d tree), every source point used, centroid
    initialization. Convergence is declared when the RMSE improves by
    less than ``convergence_eps`` between iterations.
    """
    if params is None:
        params = IcpParams()
    src = _point_array(source, "source")
    tgt = _point_array(target, "target")
    tree = cKDTree(tgt)

    cumulative = RigidTransform(np.eye(3), tgt.mean(axis=0) - src.mean(axis=0))
    current = src + cumulative.translation
    distances, nearest = tree.query(current, workers=-1)
    history = [_rms(distances)]
    converged = False
    iterations = 0
    for _ in range(params.max_iterations):
        paired_src, paired_tgt = current, tgt[nearest]
        if params.max_correspondence_distance is not None:
            mask = distances <= params.max_correspondence_distance
            if int(mask.sum()) < 3:
                raise RegistrationError(
                    "fewer than 3 correspondences within max_correspondence_distance"
                )
            paired_src, paired_tgt = current[mask], paired_tgt[mask]
        increment = best_rigid_fit(paired_src, paired_tgt)
        current = increment.apply(current)
        cumulative = increment.compose(cumulative)
        iterations += 1
        distances, nearest = tree.query(current, workers=-1)
        history.append(_rms(distances))
        if history[-2] - history[-1] < params.convergence_eps:
            converged = True
            break
    return IcpResult(
        transform=cumulative,
        final_rmse=history[-1],
        iterations_used=iterations,
        converged=converged,
        rmse_history=tuple(history),
    )
