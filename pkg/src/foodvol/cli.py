"""Command-line interface.

Subcommands:

* ``eval``    run the full pipeline over one or many scene manifests and
              write an aggregated CSV/JSON report
* ``fixture`` materialize a JSON fixture spec into mesh/corner files
* ``volume``  print the volume of a mesh file
* ``clean``   remove isolated pieces from a mesh file
* ``scale``   print the metric scale estimated from a corner file

All commands exit 0 on success and 1 with a diagnostic on stderr
otherwise; scene failures name the scene and pipeline stage.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import FoodvolError
from .fixtures import build_fixture, load_fixture_spec
from .harness import (
    EvalParams,
    aggregate,
    discover_manifests,
    load_manifest,
    read_report,
    run_scene,
    write_report,
)
from .mesh_io import load_mesh, save_mesh
from .scale import CornerGrid, estimate_scale, load_corner_grid, save_corner_grid
from .topology import connected_components, remove_isolated_pieces
from .volume import mesh_volume


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="foodvol",
        description="Mesh cleaning, metric scaling, volume and shape metrics "
        "for reconstructed food scenes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate scene manifests and write a report")
    p_eval.add_argument("--manifest", required=True,
                        help="manifest.json file, or a directory searched recursively")
    p_eval.add_argument("--out", required=True, help="report output path")
    p_eval.add_argument("--format", required=True, choices=("csv", "json"))
    p_eval.add_argument("--delta", type=float, default=0.05,
                        help="cleaning threshold for manifests that do not set one "
                        "(default 0.05)")
    p_eval.add_argument("--samples", type=int, default=100_000,
                        help="surface samples per mesh for Chamfer/ICP (default 100000)")
    p_eval.add_argument("--seed", type=int, default=0, help="sampling seed (default 0)")
    p_eval.add_argument("--baseline", action="append", default=[], metavar="NAME=REPORT.json",
                        help="add a relative row against a previous JSON report; repeatable")

    p_fix = sub.add_parser("fixture", help="build a fixture from a JSON spec")
    p_fix.add_argument("--spec", required=True, help="fixture spec JSON file")
    p_fix.add_argument("--out", required=True, help="output directory")

    p_vol = sub.add_parser("volume", help="print the volume of a mesh")
    p_vol.add_argument("--mesh", required=True)
    p_vol.add_argument("--method", choices=("divergence", "per-face-abs"),
                       default="divergence")

    p_clean = sub.add_parser("clean", help="remove isolated pieces from a mesh")
    p_clean.add_argument("--mesh", required=True)
    p_clean.add_argument("--delta", type=float, default=0.05)
    p_clean.add_argument("--out", required=True)

    p_scale = sub.add_parser("scale", help="print the scale estimated from corners")
    p_scale.add_argument("--corners", required=True)

    return parser


def _parse_baselines(entries: list[str]) -> dict:
    baselines = {}
    for entry in entries:
        name, sep, path = entry.partition("=")
        if not sep or not name or not path:
            raise ValueError(f"--baseline expects NAME=REPORT.json, got {entry!r}")
        baselines[name] = read_report(path).records
    return baselines


def _cmd_eval(args) -> int:
    params = EvalParams(samples=args.samples, seed=args.seed)
    baselines = _parse_baselines(args.baseline)
    records = []
    for manifest_path in discover_manifests(args.manifest):
        manifest = load_manifest(manifest_path, default_delta=args.delta)
        record = run_scene(manifest, params)
        records.append(record)
        print(f"{record.scene_id}: v_pred={record.v_pred:.4f} {record.unit}"
              + (f", ape={record.ape_percent:.4f}%" if record.ape_percent is not None else ""))
    report = aggregate(records, baselines)
    write_report(report, args.out, args.format)
    print(f"wrote {args.format} report for {len(records)} scene(s) to {args.out}")
    return 0


def _cmd_fixture(args) -> int:
    spec = load_fixture_spec(args.spec)
    built = build_fixture(spec)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    if isinstance(built, CornerGrid):
        out_path = out_dir / "corners.json"
        save_corner_grid(built, out_path)
    else:
        out_path = out_dir / "mesh.obj"
        save_mesh(built, out_path)
    print(f"wrote {out_path}")
    for key, value in spec.analytic_truth.items():
        print(f"analytic {key}: {value!r}")
    return 0


def _cmd_volume(args) -> int:
    mesh = load_mesh(args.mesh)
    result = mesh_volume(mesh, args.method.replace("-", "_"))
    print(repr(result.volume))
    return 0


def _cmd_clean(args) -> int:
    mesh = load_mesh(args.mesh)
    components_before = connected_components(mesh).component_count
    cleaned = remove_isolated_pieces(mesh, args.delta)
    components_after = connected_components(cleaned).component_count
    save_mesh(cleaned, args.out)
    print(
        f"kept {cleaned.n_faces} of {mesh.n_faces} faces "
        f"({components_after} of {components_before} components); wrote {args.out}"
    )
    return 0


def _cmd_scale(args) -> int:
    estimate = estimate_scale(load_corner_grid(args.corners))
    print(repr(estimate.s))
    return 0


_COMMANDS = {
    "eval": _cmd_eval,
    "fixture": _cmd_fixture,
    "volume": _cmd_volume,
    "clean": _cmd_clean,
    "scale": _cmd_scale,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (FoodvolError, OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
