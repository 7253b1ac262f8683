"""Shared test fixtures: deterministic synthetic scene directories.

``scene_batch`` builds a 20-scene evaluation corpus in a session tmp dir.
Each scene's ground truth is produced by running the same pipeline the
harness runs (clean -> scale -> volume), so a correct implementation
reproduces the manifest's ground-truth volume bit for bit; two scenes get
a rigidly perturbed ground-truth mesh so ICP has actual work to do.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from foodvol.fixtures import (
    FixtureSpec,
    build_fixture,
    make_corner_grid,
    make_multi_component,
)
from foodvol.harness import UNIT_FACTORS, EvalParams
from foodvol.mesh import TriangleMesh
from foodvol.mesh_io import load_mesh, save_mesh
from foodvol.registration import RigidTransform
from foodvol.scale import estimate_scale, load_corner_grid, save_corner_grid
from foodvol.topology import remove_isolated_pieces
from foodvol.volume import apply_scale, volume_divergence


def rigid(axis, degrees: float, translation=(0.0, 0.0, 0.0)) -> RigidTransform:
    """Convenience constructor: rotation about ``axis`` by ``degrees``."""
    axis = np.asarray(axis, dtype=np.float64)
    rotvec = axis / np.linalg.norm(axis) * math.radians(degrees)
    return RigidTransform(
        Rotation.from_rotvec(rotvec).as_matrix(), np.asarray(translation, dtype=np.float64)
    )


def _spec(kind: str, **params) -> dict:
    return {"kind": kind, "params": params}


def box_spec(a, b, c) -> dict:
    return _spec("box", a=a, b=b, c=c)


def icosphere_spec(r, subdivisions=3) -> dict:
    return _spec("icosphere", r=r, subdivisions=subdivisions)


def torus_spec(major_radius, minor_radius, major_segments=48, minor_segments=24) -> dict:
    return _spec(
        "torus",
        major_radius=major_radius,
        minor_radius=minor_radius,
        major_segments=major_segments,
        minor_segments=minor_segments,
    )


def write_scene(
    scene_dir: Path,
    scene_id: str,
    base: dict,
    *,
    label: str = "",
    unit: str = "ml",
    spacing: float = 1.0,
    square_size_real: float = 0.05,
    decoys=(),
    grid_pose: RigidTransform | None = None,
    delta: float | None = None,
    with_gt_mesh: bool = True,
    with_gt_volume: bool = True,
    gt_perturbation: RigidTransform | None = None,
) -> Path:
    """Write one synthetic scene directory and return its manifest path.

    The manifest's ground-truth volume is what the evaluation pipeline
    itself computes for these inputs (clean at ``delta``, scale from the
    corner file, divergence volume, unit conversion), so the expected APE
    is exactly zero. ``gt_perturbation`` rigidly moves the ground-truth
    mesh without touching the recorded volume.
    """
    scene_dir.mkdir(parents=True, exist_ok=True)
    if decoys:
        mesh = make_multi_component(base, decoys)
    else:
        mesh = build_fixture(FixtureSpec(kind=base["kind"], params=base["params"]))
    food_path = scene_dir / "food.obj"
    save_mesh(mesh, food_path)

    grid = make_corner_grid(7, 10, spacing, square_size_real, pose=grid_pose)
    corners_path = scene_dir / "corners.json"
    save_corner_grid(grid, corners_path)

    # Recompute everything from the files just written so the recorded
    # ground truth matches the harness's arithmetic bit for bit.
    effective_delta = 0.05 if delta is None else delta
    cleaned = remove_isolated_pieces(load_mesh(food_path), effective_delta)
    s = estimate_scale(load_corner_grid(corners_path)).s
    scaled = apply_scale(cleaned, s)
    v_true = volume_divergence(scaled).volume * UNIT_FACTORS[unit]

    doc = {
        "scene_id": scene_id,
        "food_label": label or scene_id,
        "food_mesh": "food.obj",
        "reference_corners": "corners.json",
        "ground_truth_volume_unit": unit,
    }
    if delta is not None:
        doc["delta"] = delta
    if with_gt_volume:
        doc["ground_truth_volume"] = v_true
    if with_gt_mesh:
        gt = scaled
        if gt_perturbation is not None:
            gt = TriangleMesh(gt_perturbation.apply(gt.vertices), gt.faces.copy())
        save_mesh(gt, scene_dir / "gt.obj")
        doc["ground_truth_mesh"] = "gt.obj"
    manifest_path = scene_dir / "manifest.json"
    with open(manifest_path, "w", encoding="utf-8") as handle:
        json.dump(doc, handle, indent=2)
        handle.write("\n")
    return manifest_path


def build_standard_batch(root: Path) -> list[Path]:
    """The 20-scene corpus used by harness, CLI and acceptance tests."""
    small_box = box_spec(1.0, 1.0, 1.0)
    small_sphere = icosphere_spec(1.0, 1)
    scenes = [
        # scene-01 is the designated self-consistency scene: prediction and
        # ground truth coincide and a removable decoy is present.
        dict(base=box_spec(2.0, 3.0, 4.0), label="box-243", unit="ml",
             spacing=0.5, square_size_real=0.012,
             decoys=[(small_box, 0.02, (4.0, 0.0, 0.0))]),
        dict(base=icosphere_spec(1.0), label="sphere-r1", unit="cm3",
             spacing=0.8, square_size_real=0.02,
             grid_pose=rigid((0, 0, 1), 30.0, (0.5, -0.2, 1.0))),
        dict(base=torus_spec(2.0, 0.5), label="torus-2-05", unit="l",
             spacing=1.0, square_size_real=0.05,
             grid_pose=rigid((1, 1, 0), 45.0, (0.0, 2.0, -1.0))),
        dict(base=box_spec(1.0, 1.0, 2.0), label="box-112", unit="mm3",
             spacing=0.25, square_size_real=0.01,
             decoys=[(small_box, 0.03, (3.0, 0.0, 0.0))]),
        dict(base=icosphere_spec(1.5), label="sphere-r15", unit="m3",
             spacing=1.0, square_size_real=1.0,
             grid_pose=rigid((0, 1, 0), 10.0)),
        dict(base=box_spec(3.0, 1.0, 1.0), label="box-311", unit="ml",
             spacing=0.5, square_size_real=0.015,
             decoys=[(small_sphere, 0.04, (0.0, 4.0, 0.0))]),
        # decoy above the threshold: survives cleaning on both sides
        dict(base=box_spec(2.0, 2.0, 2.0), label="box-with-satellite", unit="cm3",
             spacing=2.0, square_size_real=0.05,
             decoys=[(small_box, 0.20, (5.0, 5.0, 5.0))]),
        dict(base=torus_spec(1.5, 0.4), label="torus-15-04", unit="ml",
             spacing=1.0, square_size_real=0.03),
        dict(base=icosphere_spec(0.8, 2), label="sphere-r08", unit="cm3",
             spacing=0.5, square_size_real=0.02,
             decoys=[(small_box, 0.02, (2.5, 0.0, 0.0))]),
        dict(base=box_spec(1.0, 4.0, 2.0), label="box-142", unit="l",
             spacing=0.4, square_size_real=0.02),
        # volume-only ground truth (no mesh -> no Chamfer/ICP fields)
        dict(base=icosphere_spec(1.0), label="volume-only", unit="ml",
             spacing=1.0, square_size_real=0.04, with_gt_mesh=False),
        # no ground truth at all
        dict(base=box_spec(2.0, 1.0, 1.0), label="no-gt", unit="m3",
             spacing=1.0, square_size_real=0.5,
             with_gt_mesh=False, with_gt_volume=False),
        # rigidly perturbed ground-truth meshes: ICP must recover the pose
        dict(base=box_spec(2.0, 3.0, 1.0), label="perturbed-a", unit="ml",
             spacing=0.5, square_size_real=0.012,
             gt_perturbation=rigid((0, 0, 1), 3.0, (0.004, -0.002, 0.003))),
        dict(base=box_spec(1.0, 2.0, 2.0), label="perturbed-b", unit="cm3",
             spacing=0.8, square_size_real=0.02,
             decoys=[(small_box, 0.02, (3.0, 3.0, 0.0))],
             gt_perturbation=rigid((1, 1, 0), 3.0, (-0.003, 0.001, 0.002))),
        dict(base=torus_spec(2.0, 0.6), label="torus-2-06", unit="mm3",
             spacing=1.0, square_size_real=0.01),
        dict(base=icosphere_spec(2.0), label="sphere-r2", unit="l",
             spacing=2.0, square_size_real=0.1,
             grid_pose=rigid((1, 0, 0), 75.0, (1.0, 1.0, 1.0))),
        # decoy diameter exactly below the default threshold: removed
        dict(base=box_spec(5.0, 1.0, 2.0), label="box-512", unit="cm3",
             spacing=0.7, square_size_real=0.021,
             decoys=[(small_box, 0.045, (6.0, 0.0, 0.0))]),
        # manifest overrides delta so a small decoy survives
        dict(base=icosphere_spec(1.2), label="lenient-delta", unit="ml",
             spacing=1.0, square_size_real=0.05, delta=0.02,
             decoys=[(small_box, 0.03, (3.0, 0.0, 0.0))]),
        dict(base=torus_spec(1.8, 0.45), label="torus-18-045", unit="m3",
             spacing=1.5, square_size_real=1.5,
             grid_pose=rigid((0, 1, 1), 120.0, (-2.0, 0.0, 0.5))),
        dict(base=box_spec(2.5, 2.5, 1.0), label="box-two-decoys", unit="ml",
             spacing=0.5, square_size_real=0.02,
             decoys=[(small_box, 0.02, (4.0, 0.0, 0.0)),
                     (small_sphere, 0.04, (0.0, 0.0, 4.0))]),
    ]
    manifests = []
    for i, kwargs in enumerate(scenes, start=1):
        scene_id = f"scene-{i:02d}"
        manifests.append(write_scene(root / scene_id, scene_id, **kwargs))
    return manifests


@pytest.fixture(scope="session")
def batch_params() -> EvalParams:
    # 20k samples keeps the whole batch well under the one-minute budget
    # while leaving Chamfer/ICP numerically meaningful.
    return EvalParams(samples=20_000, seed=0)


@pytest.fixture(scope="session")
def scene_batch(tmp_path_factory) -> tuple[Path, list[Path]]:
    root = tmp_path_factory.mktemp("scene-batch")
    return root, build_standard_batch(root)
