"""Connected-component analysis and isolated-piece removal.

Components are defined over faces by shared vertex *index* (not geometric
proximity): two faces touch iff they reference a common vertex. A
component's "diameter" is the Euclidean diagonal of the axis-aligned
bounding box of its vertices — O(n), deterministic, and the measure used
by the usual "remove isolated pieces w.r.t. diameter" cleanups.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import UnknownComponentError
from .mesh import TriangleMesh


@dataclass(frozen=True)
class ComponentLabeling:
    """Per-face component ids, dense in ``0..component_count-1``.

    Ids are assigned in order of each component's first (smallest) face
    index, so labelings are reproducible across runs and backends.
    """

    component_of_face: np.ndarray
    component_count: int

    def __post_init__(self):
        labels = np.ascontiguousarray(self.component_of_face, dtype=np.int64)
        labels.setflags(write=False)
        object.__setattr__(self, "component_of_face", labels)


@dataclass(frozen=True)
class ComponentStats:
    """Size and bounding box of one component."""

    component_id: int
    n_faces: int
    n_vertices: int
    bbox_min: np.ndarray
    bbox_max: np.ndarray

    @property
    def diameter(self) -> float:
        return float(np.linalg.norm(self.bbox_max - self.bbox_min))


def connected_components(mesh: TriangleMesh) -> ComponentLabeling:
    """Partition faces into vertex-connectivity classes.

    An empty mesh yields zero components.
    """
    raw = _kernels.face_component_labels(mesh.faces, mesh.n_vertices)
    if raw.shape[0] == 0:
        return ComponentLabeling(np.empty(0, dtype=np.int64), 0)
    _, first_index, inverse = np.unique(raw, return_index=True, return_inverse=True)
    order = np.argsort(first_index, kind="stable")
    rank = np.empty(order.shape[0], dtype=np.int64)
    rank[order] = np.arange(order.shape[0], dtype=np.int64)
    return ComponentLabeling(rank[inverse.ravel()], int(order.shape[0]))


def _require_component(labeling: ComponentLabeling, component_id) -> int:
    if not isinstance(component_id, numbers.Integral):
        raise UnknownComponentError(f"component id must be an integer, got {component_id!r}")
    cid = int(component_id)
    if cid < 0 or cid >= labeling.component_count:
        raise UnknownComponentError(
            f"component id {cid} out of range (have {labeling.component_count} components)"
        )
    return cid


def component_bounding_boxes(
    mesh: TriangleMesh, labeling: ComponentLabeling
) -> tuple[np.ndarray, np.ndarray]:
    """(mins, maxs) of shape (k, 3): per-component AABBs over used vertices."""
    return _kernels.component_ranges(
        mesh.vertices, mesh.faces, labeling.component_of_face, labeling.component_count
    )


def component_diameters(mesh: TriangleMesh, labeling: ComponentLabeling) -> np.ndarray:
    """AABB diagonal of every component, shape (component_count,)."""
    mins, maxs = component_bounding_boxes(mesh, labeling)
    if labeling.component_count == 0:
        return np.empty(0, dtype=np.float64)
    return np.linalg.norm(maxs - mins, axis=1)


def component_diameter(mesh: TriangleMesh, labeling: ComponentLabeling, component_id) -> float:
    """AABB diagonal of one component; raises UnknownComponentError for bad ids."""
    cid = _require_component(labeling, component_id)
    return float(component_diameters(mesh, labeling)[cid])


def component_stats(mesh: TriangleMesh, labeling: ComponentLabeling) -> tuple[ComponentStats, ...]:
    """Per-component face count, distinct-vertex count and bounding box."""
    k = labeling.component_count
    if k == 0:
        return ()
    mins, maxs = component_bounding_boxes(mesh, labeling)
    face_counts = np.bincount(labeling.component_of_face, minlength=k)
    vertex_component = np.full(mesh.n_vertices, -1, dtype=np.int64)
    vertex_component[mesh.faces.ravel()] = np.repeat(labeling.component_of_face, 3)
    vertex_counts = np.bincount(vertex_component[vertex_component >= 0], minlength=k)
    return tuple(
        ComponentStats(
            component_id=i,
            n_faces=int(face_counts[i]),
            n_vertices=int(vertex_counts[i]),
            bbox_min=mins[i].copy(),
            bbox_max=maxs[i].copy(),
        )
        for i in range(k)
    )


def submesh(mesh: TriangleMesh, faces) -> TriangleMesh:
    """Mesh restricted to the given faces, with unreferenced vertices dropped.

    ``faces`` is a boolean mask of length n_faces or an array of face
    indices. Relative vertex and face order is preserved.
    """
    selector = np.asarray(faces)
    if selector.dtype == np.bool_:
        if selector.shape != (mesh.n_faces,):
            raise ValueError(
                f"face mask has shape {selector.shape}, expected ({mesh.n_faces},)"
            )
        kept = mesh.faces[selector]
    else:
        kept = mesh.faces[np.asarray(faces, dtype=np.int64).reshape(-1)]
    used = np.zeros(mesh.n_vertices, dtype=bool)
    used[kept.ravel()] = True
    remap = np.cumsum(used, dtype=np.int64) - 1
    new_faces = remap[kept] if kept.size else np.empty((0, 3), dtype=np.int64)
    return TriangleMesh(mesh.vertices[used], new_faces)


def remove_isolated_pieces(mesh: TriangleMesh, delta: float = 0.05) -> TriangleMesh:
    """Drop small disconnected pieces, keeping the largest-diameter one.

    A component survives iff its diameter strictly exceeds ``delta`` times
    the maximum component diameter (ties at exactly the threshold are
    removed); components achieving the maximum diameter itself are always
    retained, so the result is never empty for a non-empty input. The
    operation is idempotent, and unreferenced vertices are dropped even
    when every component survives.
    """
    delta = float(delta)
    if not np.isfinite(delta) or not 0.0 <= delta <= 1.0:
        raise ValueError(f"delta must be a ratio in [0, 1], got {delta}")
    labeling = connected_components(mesh)
    if labeling.component_count <= 1:
        return submesh(mesh, np.ones(mesh.n_faces, dtype=bool))
    diameters = component_diameters(mesh, labeling)
    largest = diameters.max()
    keep = (diameters > delta * largest) | (diameters == largest)
    return submesh(mesh, keep[labeling.component_of_face])


def boundary_edge_count(mesh: TriangleMesh) -> int:
    """Number of undirected edges referenced by exactly one face."""
    if mesh.n_faces == 0:
        return 0
    f = mesh.faces
    edges = np.concatenate([f[:, [0, 1]], f[:, [1, 2]], f[:, [2, 0]]])
    edges = np.sort(edges, axis=1)
    keys = edges[:, 0] * np.int64(mesh.n_vertices) + edges[:, 1]
    _, counts = np.unique(keys, return_counts=True)
    return int(np.count_nonzero(counts == 1))


def is_closed(mesh: TriangleMesh) -> bool:
    """True when the mesh has no boundary edges."""
    return boundary_edge_count(mesh) == 0
