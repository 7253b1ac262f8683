"""Post-reconstruction mesh toolkit for food volume estimation.

Given a unitless reconstructed scene mesh, reference-object corner points
and optional ground truth, this package cleans the mesh (isolated-piece
removal), recovers metric scale from the reference object, computes the
enclosed volume by tetrahedral decomposition, registers prediction to
ground truth with point-to-point ICP, and scores the result (Chamfer
distance, absolute/mean absolute percentage volume error). A fixture
generator provides analytic meshes and corner grids so the whole pipeline
is testable without any real dataset, and the ``foodvol`` CLI runs
per-scene evaluations into CSV/JSON reports.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .errors import (
    DegenerateGridError,
    EmptyCloudError,
    FixtureError,
    FoodvolError,
    InvalidGridError,
    InvalidMeshError,
    MeshParseError,
    NonPositiveScaleError,
    NonPositiveVolumeError,
    OpenMeshWarning,
    RegistrationError,
    SceneError,
    UnknownComponentError,
    ZeroAreaMeshError,
)
from .fixtures import (
    FixtureSpec,
    build_fixture,
    concat_meshes,
    load_fixture_spec,
    make_box,
    make_corner_grid,
    make_icosphere,
    make_multi_component,
    make_torus,
)
from .harness import (
    EvalParams,
    EvaluationRecord,
    Report,
    SceneManifest,
    aggregate,
    discover_manifests,
    load_manifest,
    read_report,
    run_scene,
    write_report,
)
from .mesh import TriangleMesh, meshes_equal
from .mesh_io import load_mesh, save_mesh
from .metrics import (
    ChamferResult,
    SampledCloud,
    ape,
    chamfer_distance,
    mape,
    sample_surface,
)
from .registration import IcpParams, IcpResult, RigidTransform, best_rigid_fit, icp
from .scale import (
    CornerGrid,
    ScaleEstimate,
    adjacent_corner_distances,
    estimate_scale,
    load_corner_grid,
    save_corner_grid,
    scale_from_distances,
)
from .topology import (
    ComponentLabeling,
    ComponentStats,
    boundary_edge_count,
    component_diameter,
    component_diameters,
    component_stats,
    connected_components,
    is_closed,
    remove_isolated_pieces,
    submesh,
)
from .volume import (
    VolumeResult,
    apply_scale,
    mesh_volume,
    volume_divergence,
    volume_per_face_abs,
)

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "__version__",
    # mesh + I/O
    "TriangleMesh", "meshes_equal", "load_mesh", "save_mesh",
    # topology
    "ComponentLabeling", "ComponentStats", "connected_components",
    "component_diameter", "component_diameters", "component_stats",
    "remove_isolated_pieces", "submesh", "boundary_edge_count", "is_closed",
    # volume
    "VolumeResult", "volume_divergence", "volume_per_face_abs", "mesh_volume",
    "apply_scale",
    # scale
    "CornerGrid", "ScaleEstimate", "adjacent_corner_distances", "estimate_scale",
    "scale_from_distances",
    "load_corner_grid", "save_corner_grid",
    # registration
    "RigidTransform", "IcpParams", "IcpResult", "best_rigid_fit", "icp",
    # metrics
    "SampledCloud", "ChamferResult", "sample_surface", "chamfer_distance",
    "ape", "mape",
    # fixtures
    "FixtureSpec", "build_fixture", "load_fixture_spec", "make_box",
    "make_icosphere", "make_torus", "make_corner_grid", "make_multi_component",
    "concat_meshes",
    # harness
    "SceneManifest", "EvalParams", "EvaluationRecord", "Report", "load_manifest",
    "discover_manifests", "run_scene", "aggregate", "write_report", "read_report",
    # errors
    "FoodvolError", "InvalidMeshError", "MeshParseError", "UnknownComponentError",
    "NonPositiveScaleError", "InvalidGridError", "DegenerateGridError",
    "RegistrationError", "EmptyCloudError", "ZeroAreaMeshError",
    "NonPositiveVolumeError", "FixtureError", "SceneError", "OpenMeshWarning",
]
