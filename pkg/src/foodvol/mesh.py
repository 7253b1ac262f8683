"""The central indexed-triangle mesh type.

Vertices are float64 world coordinates (model units, or meters once a
metric scale has been applied); faces are int64 index triples. Instances
are validated on construction and treated as immutable: every operation
in the package returns a new mesh instead of mutating one in place.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidMeshError


def _as_vertex_array(vertices) -> np.ndarray:
    arr = np.asarray(vertices, dtype=np.float64)
    if arr.size == 0:
        return np.empty((0, 3), dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise InvalidMeshError(f"vertices must have shape (n, 3), got {arr.shape}")
    return np.ascontiguousarray(arr)


def _as_face_array(faces) -> np.ndarray:
    arr = np.asarray(faces)
    if arr.size == 0:
        return np.empty((0, 3), dtype=np.int64)
    if not np.issubdtype(arr.dtype, np.integer):
        raise InvalidMeshError(f"face indices must be integers, got dtype {arr.dtype}")
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise InvalidMeshError(f"faces must have shape (m, 3), got {arr.shape}")
    return np.ascontiguousarray(arr, dtype=np.int64)


@dataclass(frozen=True)
class TriangleMesh:
    """Indexed triangle soup.

    Invariants (enforced at construction):
      * every face index is in ``0..n_vertices-1``
      * all coordinates are finite
      * each face has three distinct vertex indices
    """

    vertices: np.ndarray
    faces: np.ndarray

    def __post_init__(self):
        vertices = _as_vertex_array(self.vertices)
        faces = _as_face_array(self.faces)
        if not np.isfinite(vertices).all():
            raise InvalidMeshError("mesh contains non-finite vertex coordinates")
        if faces.shape[0]:
            if faces.min() < 0 or faces.max() >= vertices.shape[0]:
                raise InvalidMeshError(
                    f"face index out of range for {vertices.shape[0]} vertices"
                )
            a, b, c = faces[:, 0], faces[:, 1], faces[:, 2]
            if not ((a != b) & (b != c) & (a != c)).all():
                raise InvalidMeshError("degenerate face with repeated vertex index")
        vertices.flags.writeable = False
        faces.flags.writeable = False
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "faces", faces)

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def n_faces(self) -> int:
        return self.faces.shape[0]

    def __repr__(self) -> str:
        return f"TriangleMesh(n_vertices={self.n_vertices}, n_faces={self.n_faces})"


def meshes_equal(a: TriangleMesh, b: TriangleMesh, tol: float = 0.0) -> bool:
    """Element-wise equality of two meshes, with optional coordinate tolerance."""
    if a.n_vertices != b.n_vertices or a.n_faces != b.n_faces:
        return False
    if not np.array_equal(a.faces, b.faces):
        return False
    if tol == 0.0:
        return bool(np.array_equal(a.vertices, b.vertices))
    return bool(np.allclose(a.vertices, b.vertices, rtol=0.0, atol=tol))
