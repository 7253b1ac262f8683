"""Vectorized NumPy/SciPy implementations of the hot kernels.

These are the reference implementations and the fallback used when the
compiled extension is unavailable. Both backends fulfil the same
contracts; see `foodvol._kernels` for dispatch.
"""

from __future__ import annotations

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph


def tetra_volume_sums(vertices: np.ndarray, faces: np.ndarray) -> tuple[float, float]:
    """Signed and per-face-absolute sums of origin tetrahedron volumes.

    For each face (v0, v1, v2) the signed tetrahedron volume against the
    origin is ``v0 . (v1 x v2) / 6``. Returns ``(sum, sum of absolutes)``.
    """
    if faces.shape[0] == 0:
        return 0.0, 0.0
    v0 = vertices[faces[:, 0]]
    v1 = vertices[faces[:, 1]]
    v2 = vertices[faces[:, 2]]
    six_signed = np.einsum("ij,ij->i", v0, np.cross(v1, v2))
    return float(six_signed.sum()) / 6.0, float(np.abs(six_signed).sum()) / 6.0


def face_component_labels(faces: np.ndarray, n_vertices: int) -> np.ndarray:
    """Raw vertex-connectivity component label per face.

    Faces sharing any vertex index receive equal labels; label values are
    arbitrary (callers canonicalize). Implemented on the vertex graph with
    edges (v0, v1) and (v1, v2) per face.
    """
    n_faces = faces.shape[0]
    if n_faces == 0:
        return np.empty(0, dtype=np.int64)
    rows = np.concatenate([faces[:, 0], faces[:, 1]])
    cols = np.concatenate([faces[:, 1], faces[:, 2]])
    graph = sparse.coo_matrix(
        (np.ones(rows.shape[0], dtype=np.int8), (rows, cols)),
        shape=(n_vertices, n_vertices),
    )
    _, vertex_labels = csgraph.connected_components(graph, directed=False)
    return vertex_labels[faces[:, 0]].astype(np.int64)


def component_ranges(
    vertices: np.ndarray,
    faces: np.ndarray,
    labels: np.ndarray,
    n_components: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Per-component AABB (mins, maxs) over the vertices used by its faces.

    `labels` must be dense ids in 0..n_components-1, one per face.
    """
    mins = np.full((n_components, 3), np.inf)
    maxs = np.full((n_components, 3), -np.inf)
    if faces.shape[0] == 0:
        return mins, maxs
    corner_labels = np.repeat(labels, 3)
    corners = vertices[faces.ravel()]
    np.minimum.at(mins, corner_labels, corners)
    np.maximum.at(maxs, corner_labels, corners)
    return mins, maxs
