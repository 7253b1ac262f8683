#!/usr/bin/env python3
"""Benchmark the compiled mesh kernels against the NumPy fallback.

Runs the three hot kernels (tetra volume sums, face component labeling,
per-component bounding ranges) on a few procedurally generated meshes and
prints a wall-clock table. Each timing is the best of ``--repeats`` runs
to suppress scheduler noise.

Usage:
    python3 benchmarks/bench_kernels.py [--repeats 5] [--subdivisions 6]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from foodvol import fixtures
from foodvol._kernels import numpy_backend

try:
    from foodvol._kernels import _fastcore
except ImportError:
    _fastcore = None


def _best_of(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _bench_mesh(name: str, mesh, repeats: int):
    vertices = np.ascontiguousarray(mesh.vertices, dtype=np.float64)
    faces = np.ascontiguousarray(mesh.faces, dtype=np.int64)
    n_vertices = vertices.shape[0]

    backends = [("numpy", numpy_backend)]
    if _fastcore is not None:
        backends.append(("compiled", _fastcore))

    rows = []
    for label, impl in backends:
        labels = impl.face_component_labels(faces, n_vertices)
        labels = np.ascontiguousarray(labels, dtype=np.int64)
        n_components = int(labels.max()) + 1 if labels.size else 0
        timings = {
            "tetra_volume_sums": _best_of(
                lambda: impl.tetra_volume_sums(vertices, faces), repeats
            ),
            "face_component_labels": _best_of(
                lambda: impl.face_component_labels(faces, n_vertices), repeats
            ),
            "component_ranges": _best_of(
                lambda: impl.component_ranges(vertices, faces, labels, n_components),
                repeats,
            ),
        }
        rows.append((label, timings))

    print(f"\n{name}: {n_vertices} vertices, {faces.shape[0]} faces")
    header = f"  {'kernel':<24} " + " ".join(f"{label:>12}" for label, _ in rows)
    if len(rows) == 2:
        header += f" {'speedup':>9}"
    print(header)
    for kernel in ("tetra_volume_sums", "face_component_labels", "component_ranges"):
        cells = [rows_i[1][kernel] for rows_i in rows]
        line = f"  {kernel:<24} " + " ".join(f"{t * 1e3:>10.3f}ms" for t in cells)
        if len(cells) == 2 and cells[1] > 0:
            line += f" {cells[0] / cells[1]:>8.1f}x"
        print(line)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5, help="best-of-k timing")
    parser.add_argument(
        "--subdivisions", type=int, default=6, help="icosphere refinement level"
    )
    args = parser.parse_args(argv)

    if _fastcore is None:
        print("compiled extension not available; timing the NumPy backend only")

    sphere = fixtures.make_icosphere(1.0, subdivisions=args.subdivisions)
    torus = fixtures.make_torus(2.0, 0.5, 256, 128)
    base = {"kind": "icosphere", "params": {"r": 1.0, "subdivisions": 5}}
    decoy = {"kind": "box", "params": {"a": 1.0, "b": 1.0, "c": 1.0}}
    scattered = fixtures.make_multi_component(
        base,
        decoys=[(decoy, 0.02 * (i + 1), (4.0 + 2.0 * i, 0.0, 0.0)) for i in range(8)],
    )

    _bench_mesh(f"icosphere (subdiv={args.subdivisions})", sphere, args.repeats)
    _bench_mesh("torus (256x128)", torus, args.repeats)
    _bench_mesh("icosphere + 8 decoys", scattered, args.repeats)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
