"""Hot-kernel dispatch: compiled extension if built, NumPy otherwise.

The backend is chosen once at import time. Set ``FOODVOL_NUMPY_KERNELS=1``
to force the NumPy backend even when the extension is available (used by
the benchmark and the backend-equivalence tests).
"""

from __future__ import annotations

import os

import numpy as np

from . import numpy_backend

if os.environ.get("FOODVOL_NUMPY_KERNELS") == "1":
    _impl = numpy_backend
    BACKEND = "numpy"
else:
    try:
        from . import _fastcore as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = numpy_backend
        BACKEND = "numpy"


def _c_f64(arr) -> np.ndarray:
    return np.ascontiguousarray(arr, dtype=np.float64)


def _c_i64(arr) -> np.ndarray:
    return np.ascontiguousarray(arr, dtype=np.int64)


def tetra_volume_sums(vertices, faces) -> tuple[float, float]:
    return _impl.tetra_volume_sums(_c_f64(vertices), _c_i64(faces))


def face_component_labels(faces, n_vertices: int) -> np.ndarray:
    return _impl.face_component_labels(_c_i64(faces), n_vertices)


def component_ranges(vertices, faces, labels, n_components: int):
    return _impl.component_ranges(
        _c_f64(vertices), _c_i64(faces), _c_i64(labels), n_components
    )
