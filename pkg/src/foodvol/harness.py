"""Per-scene evaluation pipeline and multi-scene report aggregation.

A scene is one reconstructed food mesh plus its reference-object corners
and (optionally) ground truth. ``run_scene`` executes the fixed stage
order

    load food mesh -> remove isolated pieces -> estimate scale from
    corners -> apply scale -> volume -> [sample both meshes, Chamfer
    before ICP, ICP, Chamfer after ICP]

and never modifies the reference data or the ground-truth mesh. Volumes
are computed in cubic meters and converted to the unit of the scene's
ground-truth volume so error percentages compare like for like.

``aggregate`` adds mean and sample-stdev (n-1) footer rows and, per named
baseline record set, a relative row

    rel = (baseline_mean - ours_mean) / ours_mean * 100

so positive percentages mean the baseline's error is larger than ours.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import SceneError
from .mesh_io import load_mesh
from .metrics import ape, chamfer_distance, sample_surface
from .registration import IcpParams, IcpResult, RigidTransform, icp
from .scale import estimate_scale, load_corner_grid
from .topology import remove_isolated_pieces
from .volume import apply_scale, volume_divergence

#: Multiplier converting cubic meters into each supported report unit.
UNIT_FACTORS = {"m3": 1.0, "l": 1e3, "ml": 1e6, "cm3": 1e6, "mm3": 1e9}

#: Numeric record fields that get mean / stdev / relative footer entries.
AGGREGATE_FIELDS = (
    "v_pred",
    "v_true",
    "abs_error",
    "ape_percent",
    "chamfer_pre_icp",
    "chamfer_post_icp",
    "scale_s",
)

_CSV_COLUMNS = ("scene_id", "label", "unit") + AGGREGATE_FIELDS


@dataclass(frozen=True)
class SceneManifest:
    """Declarative description of one scene's input artifacts.

    Paths are stored resolved (``load_manifest`` resolves them relative
    to the manifest file). ``ground_truth_volume`` is expressed in
    ``ground_truth_volume_unit``; predictions are converted to that unit
    for comparison.
    """

    scene_id: str
    food_label: str
    food_mesh_path: Path
    reference_corners_path: Path
    ground_truth_mesh_path: Path | None = None
    ground_truth_volume: float | None = None
    ground_truth_volume_unit: str = "m3"
    delta: float = 0.05

    def __post_init__(self):
        if self.ground_truth_volume_unit not in UNIT_FACTORS:
            raise ValueError(
                f"unknown volume unit {self.ground_truth_volume_unit!r}; "
                f"expected one of {sorted(UNIT_FACTORS)}"
            )
        if self.ground_truth_volume is not None and not self.ground_truth_volume > 0:
            raise ValueError(
                f"ground_truth_volume must be positive, got {self.ground_truth_volume}"
            )
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError(f"delta must be in [0, 1], got {self.delta}")


@dataclass(frozen=True)
class EvalParams:
    """Batch-wide evaluation knobs (sampling density, seed, ICP)."""

    samples: int = 100_000
    seed: int = 0
    icp: IcpParams = field(default_factory=IcpParams)

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError(f"samples must be >= 1, got {self.samples}")


@dataclass(frozen=True)
class EvaluationRecord:
    """One scene's results; optional fields stay None when no ground truth
    of the corresponding kind was given. Volumes are in ``unit``."""

    scene_id: str
    label: str
    unit: str
    scale_s: float
    v_pred: float
    v_true: float | None = None
    abs_error: float | None = None
    ape_percent: float | None = None
    chamfer_pre_icp: float | None = None
    chamfer_post_icp: float | None = None
    icp: IcpResult | None = None

    def to_json_dict(self) -> dict:
        doc = {
            "scene_id": self.scene_id,
            "label": self.label,
            "unit": self.unit,
            "scale_s": self.scale_s,
            "v_pred": self.v_pred,
            "v_true": self.v_true,
            "abs_error": self.abs_error,
            "ape_percent": self.ape_percent,
            "chamfer_pre_icp": self.chamfer_pre_icp,
            "chamfer_post_icp": self.chamfer_post_icp,
            "icp": None,
        }
        if self.icp is not None:
            doc["icp"] = {
                "transform": self.icp.transform.to_json_dict(),
                "final_rmse": self.icp.final_rmse,
                "iterations_used": self.icp.iterations_used,
                "converged": self.icp.converged,
                "rmse_history": list(self.icp.rmse_history),
            }
        return doc

    @classmethod
    def from_json_dict(cls, doc: dict) -> EvaluationRecord:
        icp_result = None
        if doc.get("icp") is not None:
            raw = doc["icp"]
            icp_result = IcpResult(
                transform=RigidTransform.from_json_dict(raw["transform"]),
                final_rmse=raw["final_rmse"],
                iterations_used=raw["iterations_used"],
                converged=raw["converged"],
                rmse_history=tuple(raw["rmse_history"]),
            )
        return cls(
            scene_id=doc["scene_id"],
            label=doc["label"],
            unit=doc["unit"],
            scale_s=doc["scale_s"],
            v_pred=doc["v_pred"],
            v_true=doc.get("v_true"),
            abs_error=doc.get("abs_error"),
            ape_percent=doc.get("ape_percent"),
            chamfer_pre_icp=doc.get("chamfer_pre_icp"),
            chamfer_post_icp=doc.get("chamfer_post_icp"),
            icp=icp_result,
        )


@dataclass(frozen=True)
class Report:
    """Per-scene records plus footer statistics.

    ``mean_row``/``stdev_row`` map field name to value over the records
    where the field is present (stdev omitted below two values);
    ``relative_rows`` maps baseline name to its relative-percent row.
    """

    records: tuple[EvaluationRecord, ...]
    mean_row: dict
    stdev_row: dict
    relative_rows: dict

    def to_json_dict(self) -> dict:
        return {
            "records": [record.to_json_dict() for record in self.records],
            "mean": self.mean_row,
            "stdev": self.stdev_row,
            "relative_percent": self.relative_rows,
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> Report:
        return cls(
            records=tuple(EvaluationRecord.from_json_dict(r) for r in doc["records"]),
            mean_row=dict(doc["mean"]),
            stdev_row=dict(doc["stdev"]),
            relative_rows={k: dict(v) for k, v in doc["relative_percent"].items()},
        )


def load_manifest(path, default_delta: float = 0.05) -> SceneManifest:
    """Read a scene manifest; relative paths resolve against its directory.

    Document shape::

        {"scene_id": "...", "food_label": "...", "food_mesh": "food.obj",
         "reference_corners": "corners.json",
         "ground_truth_mesh": "gt.obj",          # optional
         "ground_truth_volume": 123.4,            # optional
         "ground_truth_volume_unit": "ml",        # default "m3"
         "delta": 0.05}                           # default: default_delta

    ``default_delta`` (the CLI's --delta) applies only to manifests that
    do not set their own.
    """
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as handle:
            doc = json.load(handle)
        if not isinstance(doc, dict):
            raise ValueError("manifest must be a JSON object")
        scene_id = doc["scene_id"]
        base = path.resolve().parent

        def resolve(key: str):
            value = doc.get(key)
            return None if value is None else (base / value)

        food_mesh = resolve("food_mesh")
        corners = resolve("reference_corners")
        if food_mesh is None or corners is None:
            raise ValueError("manifest needs 'food_mesh' and 'reference_corners'")
        return SceneManifest(
            scene_id=str(scene_id),
            food_label=str(doc.get("food_label", "")),
            food_mesh_path=food_mesh,
            reference_corners_path=corners,
            ground_truth_mesh_path=resolve("ground_truth_mesh"),
            ground_truth_volume=doc.get("ground_truth_volume"),
            ground_truth_volume_unit=doc.get("ground_truth_volume_unit", "m3"),
            delta=float(doc.get("delta", default_delta)),
        )
    except SceneError:
        raise
    except Exception as exc:
        raise SceneError(str(path), "load-manifest", exc) from exc


def discover_manifests(path) -> list[Path]:
    """All manifest files under a directory (sorted), or the file itself."""
    root = Path(path)
    if root.is_file():
        return [root]
    if root.is_dir():
        direct = root / "manifest.json"
        if direct.is_file():
            return [direct]
        found = sorted(root.rglob("manifest.json"))
        if found:
            return found
    raise FileNotFoundError(f"no manifest.json found under {path}")


def _stage(scene_id: str, stage: str, func, *args, **kwargs):
    try:
        return func(*args, **kwargs)
    except SceneError:
        raise
    except Exception as exc:
        raise SceneError(scene_id, stage, exc) from exc


def run_scene(manifest: SceneManifest, params: EvalParams | None = None) -> EvaluationRecord:
    """Evaluate one scene; every stage failure is tagged with its name.

    The reference corners and the ground-truth mesh are used exactly as
    given — only the food mesh is cleaned and scaled.
    """
    if params is None:
        params = EvalParams()
    sid = manifest.scene_id

    food = _stage(sid, "load-food-mesh", load_mesh, manifest.food_mesh_path)
    cleaned = _stage(sid, "clean", remove_isolated_pieces, food, manifest.delta)
    grid = _stage(sid, "load-corners", load_corner_grid, manifest.reference_corners_path)
    estimate = _stage(sid, "estimate-scale", estimate_scale, grid)
    scaled = _stage(sid, "apply-scale", apply_scale, cleaned, estimate.s)
    volume_m3 = _stage(sid, "volume", volume_divergence, scaled).volume

    factor = UNIT_FACTORS[manifest.ground_truth_volume_unit]
    v_pred = volume_m3 * factor
    v_true = manifest.ground_truth_volume
    abs_error = ape_percent = None
    if v_true is not None:
        abs_error = abs(v_true - v_pred)
        ape_percent = _stage(sid, "ape", ape, v_true, v_pred)

    chamfer_pre = chamfer_post = icp_result = None
    if manifest.ground_truth_mesh_path is not None:
        gt_mesh = _stage(sid, "load-gt-mesh", load_mesh, manifest.ground_truth_mesh_path)
        pred_cloud = _stage(
            sid, "sample-pred", sample_surface,
            scaled, params.samples, params.seed, mesh_id=f"{sid}:pred",
        )
        gt_cloud = _stage(
            sid, "sample-gt", sample_surface,
            gt_mesh, params.samples, params.seed, mesh_id=f"{sid}:gt",
        )
        chamfer_pre = _stage(
            sid, "chamfer-pre-icp", chamfer_distance, pred_cloud, gt_cloud
        ).value
        icp_result = _stage(sid, "icp", icp, pred_cloud, gt_cloud, params.icp)
        chamfer_post = _stage(
            sid, "chamfer-post-icp", chamfer_distance,
            pred_cloud.transformed(icp_result.transform), gt_cloud,
        ).value

    return EvaluationRecord(
        scene_id=sid,
        label=manifest.food_label,
        unit=manifest.ground_truth_volume_unit,
        scale_s=estimate.s,
        v_pred=v_pred,
        v_true=v_true,
        abs_error=abs_error,
        ape_percent=ape_percent,
        chamfer_pre_icp=chamfer_pre,
        chamfer_post_icp=chamfer_post,
        icp=icp_result,
    )


def _column(records, name: str) -> list[float]:
    return [getattr(r, name) for r in records if getattr(r, name) is not None]


def aggregate(records, baselines: dict | None = None) -> Report:
    """Mean/stdev footer rows plus optional relative rows vs baselines.

    ``baselines`` maps a name to a record list (e.g. a previously written
    report's records). Relative percentages are only emitted for fields
    present in both record sets with a nonzero mean of ours.
    """
    records = tuple(records)
    if not records:
        raise ValueError("aggregate needs at least one record")
    mean_row: dict = {}
    stdev_row: dict = {}
    for name in AGGREGATE_FIELDS:
        values = _column(records, name)
        if values:
            mean_row[name] = float(np.mean(values))
        if len(values) >= 2:
            stdev_row[name] = float(np.std(values, ddof=1))
    relative_rows: dict = {}
    for base_name, base_records in (baselines or {}).items():
        row = {}
        for name in AGGREGATE_FIELDS:
            ours = mean_row.get(name)
            base_values = _column(base_records, name)
            if ours and base_values:
                base_mean = float(np.mean(base_values))
                row[name] = (base_mean - ours) / ours * 100.0
        relative_rows[base_name] = row
    return Report(records=records, mean_row=mean_row, stdev_row=stdev_row,
                  relative_rows=relative_rows)


def _format_cell(value) -> str:
    return "" if value is None else f"{value:.4f}"


def write_report(report: Report, path, fmt: str) -> None:
    """Write a report: 'csv' (4-decimal table) or 'json' (full precision)."""
    if fmt == "json":
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(report.to_json_dict(), handle, indent=2)
            handle.write("\n")
        return
    if fmt != "csv":
        raise ValueError(f"unknown report format {fmt!r}; expected 'csv' or 'json'")
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(_CSV_COLUMNS)
        for record in report.records:
            writer.writerow(
                [record.scene_id, record.label, record.unit]
                + [_format_cell(getattr(record, name)) for name in AGGREGATE_FIELDS]
            )
        footers = [("Mean", report.mean_row), ("Stdev.", report.stdev_row)]
        footers += [
            (f"Rel. {name} (%)", row) for name, row in report.relative_rows.items()
        ]
        for title, row in footers:
            writer.writerow(
                [title, "", ""]
                + [_format_cell(row.get(name)) for name in AGGREGATE_FIELDS]
            )


def read_report(path) -> Report:
    """Read back a JSON report written by ``write_report``."""
    with open(path, "r", encoding="utf-8") as handle:
        return Report.from_json_dict(json.load(handle))
