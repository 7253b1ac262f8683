"""Mesh volume by tetrahedral decomposition, plus metric rescaling.

Every face (v0, v1, v2) spans a tetrahedron with the origin whose signed
volume is ``v0 . (v1 x v2) / 6``. Summing the signed terms and taking one
absolute value at the end gives the exact enclosed volume of any closed,
consistently oriented mesh, wherever the origin sits. Summing per-term
absolute values instead is only correct for meshes star-shaped about the
origin; that variant is kept for comparison.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import NonPositiveScaleError, OpenMeshWarning
from .mesh import TriangleMesh
from .topology import boundary_edge_count

VOLUME_METHODS = ("divergence", "per_face_abs")


@dataclass(frozen=True)
class VolumeResult:
    """Volume of a mesh. ``signed_raw`` keeps the orientation-signed sum."""

    volume: float
    signed_raw: float
    method: str


def volume_divergence(mesh: TriangleMesh) -> VolumeResult:
    """Enclosed volume via the signed tetrahedron sum (the default method).

    Exact for closed oriented meshes regardless of convexity or where the
    origin lies. Open meshes get an OpenMeshWarning: their result depends
    on the position of the origin.
    """
    open_edges = boundary_edge_count(mesh)
    if open_edges:
        warnings.warn(
            f"mesh has {open_edges} boundary edges; enclosed volume is "
            "origin-dependent for open meshes",
            OpenMeshWarning,
            stacklevel=2,
        )
    signed, _ = _kernels.tetra_volume_sums(mesh.vertices, mesh.faces)
    return VolumeResult(volume=abs(signed), signed_raw=signed, method="divergence")


def volume_per_face_abs(mesh: TriangleMesh) -> VolumeResult:
    """Volume with the absolute value taken per tetrahedron term.

    Matches ``volume_divergence`` only for meshes star-shaped about the
    origin (e.g. convex meshes containing it); otherwise it overestimates.
    """
    signed, absolute = _kernels.tetra_volume_sums(mesh.vertices, mesh.faces)
    return VolumeResult(volume=absolute, signed_raw=signed, method="per_face_abs")


def mesh_volume(mesh: TriangleMesh, method: str = "divergence") -> VolumeResult:
    """Dispatch on method name ('divergence' or 'per_face_abs')."""
    if method == "divergence":
        return volume_divergence(mesh)
    if method == "per_face_abs":
        return volume_per_face_abs(mesh)
    raise ValueError(f"unknown volume method {method!r}; expected one of {VOLUME_METHODS}")


def apply_scale(mesh: TriangleMesh, s: float) -> TriangleMesh:
    """Uniformly scale vertex coordinates by ``s`` (meters per model unit).

    Volume scales by ``s**3``; faces are unchanged. ``s`` must be a
    positive finite number.
    """
    s = float(s)
    if not math.isfinite(s) or s <= 0.0:
        raise NonPositiveScaleError(f"scale must be positive and finite, got {s}")
    return TriangleMesh(mesh.vertices * s, mesh.faces.copy())
