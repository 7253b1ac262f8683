"""Deterministic generators of analytic test assets.

Every mesh produced here is closed, consistently outward-oriented and
centered on the origin, with a known analytic volume:

* box a*b*c  -> volume a*b*c
* icosphere  -> converges to (4/3)*pi*r^3 from below with subdivision
* torus      -> converges to 2*pi^2*R*r^2

``make_corner_grid`` fabricates reference-object corner points with a
known true scale, standing in for upstream checkerboard detection, and
``make_multi_component`` plants disjoint decoy pieces at controlled
relative diameters for cleaning tests.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import FixtureError, InvalidGridError
from .mesh import TriangleMesh
from .registration import RigidTransform
from .scale import CornerGrid

FIXTURE_KINDS = ("box", "icosphere", "torus", "multi_component", "corner_grid")

_BOX_FACES = np.array(
    [
        [0, 2, 1], [0, 3, 2],  # bottom (-z)
        [4, 5, 6], [4, 6, 7],  # top (+z)
        [0, 1, 5], [0, 5, 4],  # front (-y)
        [2, 3, 7], [2, 7, 6],  # back (+y)
        [0, 4, 7], [0, 7, 3],  # left (-x)
        [1, 2, 6], [1, 6, 5],  # right (+x)
    ],
    dtype=np.int64,
)

# Icosahedron with edge 2, vertices on a golden rectangle triple; faces
# wound counterclockwise seen from outside.
_ICO_T = (1.0 + math.sqrt(5.0)) / 2.0
_ICO_VERTICES = np.array(
    [
        [-1, _ICO_T, 0], [1, _ICO_T, 0], [-1, -_ICO_T, 0], [1, -_ICO_T, 0],
        [0, -1, _ICO_T], [0, 1, _ICO_T], [0, -1, -_ICO_T], [0, 1, -_ICO_T],
        [_ICO_T, 0, -1], [_ICO_T, 0, 1], [-_ICO_T, 0, -1], [-_ICO_T, 0, 1],
    ],
    dtype=np.float64,
)
_ICO_FACES = np.array(
    [
        [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
        [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
        [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
        [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
    ],
    dtype=np.int64,
)


def _require_positive(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise FixtureError(f"{name} must be positive and finite, got {value}")
    return value


def make_box(a: float, b: float, c: float) -> TriangleMesh:
    """Closed 12-triangle box with edge lengths (a, b, c), centered at origin."""
    a = _require_positive("a", a)
    b = _require_positive("b", b)
    c = _require_positive("c", c)
    hx, hy, hz = a / 2.0, b / 2.0, c / 2.0
    vertices = np.array(
        [
            [-hx, -hy, -hz], [hx, -hy, -hz], [hx, hy, -hz], [-hx, hy, -hz],
            [-hx, -hy, hz], [hx, -hy, hz], [hx, hy, hz], [-hx, hy, hz],
        ]
    )
    return TriangleMesh(vertices, _BOX_FACES.copy())


def make_icosphere(r: float, subdivisions: int = 3) -> TriangleMesh:
    """Sphere approximation: subdivided icosahedron, vertices at radius r.

    Each subdivision splits every triangle into four, reprojecting edge
    midpoints onto the sphere; the enclosed volume increases toward
    (4/3)*pi*r^3 from below.
    """
    r = _require_positive("radius", r)
    subdivisions = int(subdivisions)
    if not 0 <= subdivisions <= 6:
        raise FixtureError(f"subdivisions must be in 0..6, got {subdivisions}")
    vertices = [v * (r / np.linalg.norm(v)) for v in _ICO_VERTICES]
    faces = [tuple(f) for f in _ICO_FACES]
    for _ in range(subdivisions):
        midpoint_index: dict[tuple[int, int], int] = {}

        def midpoint(i: int, j: int) -> int:
            key = (i, j) if i < j else (j, i)
            cached = midpoint_index.get(key)
            if cached is not None:
                return cached
            mid = (vertices[i] + vertices[j]) / 2.0
            vertices.append(mid * (r / np.linalg.norm(mid)))
            midpoint_index[key] = len(vertices) - 1
            return midpoint_index[key]

        next_faces = []
        for va, vb, vc in faces:
            ab, bc, ca = midpoint(va, vb), midpoint(vb, vc), midpoint(vc, va)
            next_faces += [(va, ab, ca), (vb, bc, ab), (vc, ca, bc), (ab, bc, ca)]
        faces = next_faces
    return TriangleMesh(np.array(vertices), np.array(faces, dtype=np.int64))


def make_torus(
    major_radius: float,
    minor_radius: float,
    major_segments: int = 96,
    minor_segments: int = 48,
) -> TriangleMesh:
    """Closed torus around the z-axis (tube center circle radius
    ``major_radius``, tube radius ``minor_radius``)."""
    major_radius = _require_positive("major_radius", major_radius)
    minor_radius = _require_positive("minor_radius", minor_radius)
    if minor_radius >= major_radius:
        raise FixtureError("minor_radius must be smaller than major_radius")
    if major_segments < 3 or minor_segments < 3:
        raise FixtureError("torus needs at least 3 segments in each direction")
    u = 2.0 * np.pi * np.arange(major_segments) / major_segments
    v = 2.0 * np.pi * np.arange(minor_segments) / minor_segments
    ring = major_radius + minor_radius * np.cos(v)[None, :]
    vertices = np.empty((major_segments, minor_segments, 3))
    vertices[..., 0] = ring * np.cos(u)[:, None]
    vertices[..., 1] = ring * np.sin(u)[:, None]
    vertices[..., 2] = np.broadcast_to(minor_radius * np.sin(v)[None, :], ring.shape)

    i = np.repeat(np.arange(major_segments), minor_segments)
    j = np.tile(np.arange(minor_segments), major_segments)
    a = i * minor_segments + j
    b = ((i + 1) % major_segments) * minor_segments + j
    c = ((i + 1) % major_segments) * minor_segments + (j + 1) % minor_segments
    d = i * minor_segments + (j + 1) % minor_segments
    faces = np.concatenate(
        [np.stack([a, b, c], axis=1), np.stack([a, c, d], axis=1)], axis=0
    )
    return TriangleMesh(vertices.reshape(-1, 3), faces.astype(np.int64))


def make_corner_grid(
    rows: int,
    cols: int,
    spacing: float,
    square_size_real: float,
    pose: RigidTransform | None = None,
    noise_sigma: float = 0.0,
    seed: int = 0,
) -> CornerGrid:
    """Planar corner grid with true scale ``square_size_real / spacing``.

    The grid lies in the local xy-plane at ``spacing`` model units between
    neighbors, is moved by ``pose`` if given, and optionally gets
    isotropic Gaussian noise (deterministic per seed) applied afterwards —
    mimicking triangulation error in the reconstruction frame.
    """
    if rows < 2 or cols < 2:
        raise InvalidGridError(f"grid must be at least 2x2, got {rows}x{cols}")
    spacing = float(spacing)
    if not math.isfinite(spacing) or spacing <= 0.0:
        raise InvalidGridError(f"spacing must be positive, got {spacing}")
    if noise_sigma < 0.0:
        raise InvalidGridError(f"noise_sigma must be >= 0, got {noise_sigma}")
    lattice = np.zeros((rows, cols, 3))
    lattice[..., 0] = np.arange(cols)[None, :] * spacing
    lattice[..., 1] = np.arange(rows)[:, None] * spacing
    corners = lattice.reshape(-1, 3)
    if pose is not None:
        corners = pose.apply(corners)
    if noise_sigma > 0.0:
        corners = corners + np.random.default_rng(seed).normal(
            0.0, noise_sigma, corners.shape
        )
    return CornerGrid(corners, rows, cols, square_size_real)


def _aabb_diagonal(vertices: np.ndarray) -> float:
    return float(np.linalg.norm(vertices.max(axis=0) - vertices.min(axis=0)))


def _aabbs_overlap(mesh_a: TriangleMesh, mesh_b: TriangleMesh) -> bool:
    a_min, a_max = mesh_a.vertices.min(axis=0), mesh_a.vertices.max(axis=0)
    b_min, b_max = mesh_b.vertices.min(axis=0), mesh_b.vertices.max(axis=0)
    return bool(np.all(a_min <= b_max) and np.all(b_min <= a_max))


def concat_meshes(meshes) -> TriangleMesh:
    """Stack meshes into one, offsetting face indices; order is preserved."""
    meshes = list(meshes)
    if not meshes:
        return TriangleMesh(np.empty((0, 3)), np.empty((0, 3), dtype=np.int64))
    vertex_blocks, face_blocks, offset = [], [], 0
    for mesh in meshes:
        vertex_blocks.append(mesh.vertices)
        face_blocks.append(mesh.faces + offset)
        offset += mesh.n_vertices
    return TriangleMesh(np.concatenate(vertex_blocks), np.concatenate(face_blocks))


def make_multi_component(base, decoys) -> TriangleMesh:
    """Base fixture plus disjoint decoy pieces at given relative diameters.

    ``decoys`` is an iterable of ``(spec, relative_diameter, offset)``:
    each decoy mesh is rescaled so its AABB diagonal equals
    ``relative_diameter`` times the base's, then translated by ``offset``
    (model units). Components must stay AABB-disjoint or FixtureError is
    raised; the base comes first, so it is component 0 of the result.
    """
    base_spec = _as_fixture_spec(base)
    base_mesh = _build_mesh_fixture(base_spec)
    base_diameter = _aabb_diagonal(base_mesh.vertices)
    parts = [base_mesh]
    for entry in decoys:
        spec, relative_diameter, offset = entry
        relative_diameter = float(relative_diameter)
        if not 0.0 < relative_diameter <= 1.0:
            raise FixtureError(
                f"relative_diameter must be in (0, 1], got {relative_diameter}"
            )
        decoy_mesh = _build_mesh_fixture(_as_fixture_spec(spec))
        decoy_diameter = _aabb_diagonal(decoy_mesh.vertices)
        factor = relative_diameter * base_diameter / decoy_diameter
        offset = np.asarray(offset, dtype=np.float64).reshape(3)
        parts.append(TriangleMesh(decoy_mesh.vertices * factor + offset, decoy_mesh.faces))
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            if _aabbs_overlap(parts[i], parts[j]):
                raise FixtureError(
                    f"fixture components {i} and {j} have overlapping bounding boxes"
                )
    return concat_meshes(parts)


@dataclass(frozen=True)
class FixtureSpec:
    """Declarative description of one fixture, JSON-loadable.

    ``params`` holds the keyword arguments of the matching ``make_*``
    function; for ``multi_component`` it holds ``base`` (a nested spec)
    and ``decoys`` (a list of ``{"spec": ..., "relative_diameter": ...,
    "offset": [x, y, z]}``).
    """

    kind: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.kind not in FIXTURE_KINDS:
            raise FixtureError(
                f"unknown fixture kind {self.kind!r}; expected one of {FIXTURE_KINDS}"
            )

    @property
    def analytic_truth(self) -> dict:
        """Known volume (mesh kinds) or scale (corner grids) for this spec.

        Mesh volumes are the smooth-limit values: discretized fixtures
        approach them as resolution grows (per-kind tolerances are pinned
        in the test suite).
        """
        p = self.params
        try:
            if self.kind == "box":
                return {"volume": float(p["a"]) * float(p["b"]) * float(p["c"])}
            if self.kind == "icosphere":
                return {"volume": 4.0 / 3.0 * math.pi * float(p["r"]) ** 3}
            if self.kind == "torus":
                return {
                    "volume": 2.0
                    * math.pi**2
                    * float(p["major_radius"])
                    * float(p["minor_radius"]) ** 2
                }
            if self.kind == "corner_grid":
                return {"scale": float(p["square_size_real"]) / float(p["spacing"])}
            return _as_fixture_spec(p["base"]).analytic_truth
        except KeyError as exc:
            raise FixtureError(f"{self.kind} spec is missing parameter {exc}") from None


def _as_fixture_spec(obj) -> FixtureSpec:
    if isinstance(obj, FixtureSpec):
        return obj
    if isinstance(obj, dict):
        return FixtureSpec(
            kind=obj.get("kind", ""),
            params=obj.get("params", {}),
            seed=int(obj.get("seed", 0)),
        )
    raise FixtureError(f"expected a FixtureSpec or dict, got {type(obj).__name__}")


def _build_mesh_fixture(spec: FixtureSpec) -> TriangleMesh:
    built = build_fixture(spec)
    if not isinstance(built, TriangleMesh):
        raise FixtureError(f"fixture kind {spec.kind!r} does not produce a mesh")
    return built


def build_fixture(spec: FixtureSpec):
    """Materialize a spec: a TriangleMesh, or a CornerGrid for corner_grid."""
    p = spec.params
    try:
        if spec.kind == "box":
            return make_box(p["a"], p["b"], p["c"])
        if spec.kind == "icosphere":
            return make_icosphere(p["r"], p.get("subdivisions", 3))
        if spec.kind == "torus":
            return make_torus(
                p["major_radius"],
                p["minor_radius"],
                p.get("major_segments", 96),
                p.get("minor_segments", 48),
            )
        if spec.kind == "corner_grid":
            pose = p.get("pose")
            if isinstance(pose, dict):
                pose = RigidTransform.from_json_dict(pose)
            return make_corner_grid(
                p["rows"],
                p["cols"],
                p["spacing"],
                p["square_size_real"],
                pose=pose,
                noise_sigma=p.get("noise_sigma", 0.0),
                seed=spec.seed,
            )
        decoys = [
            (entry["spec"], entry["relative_diameter"], entry["offset"])
            for entry in p.get("decoys", [])
        ]
        return make_multi_component(p["base"], decoys)
    except KeyError as exc:
        raise FixtureError(f"{spec.kind} spec is missing parameter {exc}") from None


def load_fixture_spec(path) -> FixtureSpec:
    """Read a FixtureSpec from a JSON file."""
    with open(path, "r", encoding="utf-8") as handle:
        doc = json.load(handle)
    if not isinstance(doc, dict):
        raise FixtureError(f"{path}: fixture spec must be a JSON object")
    return _as_fixture_spec(doc)
