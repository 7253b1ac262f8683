# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled single-pass implementations of the hot kernels.

Contracts match `foodvol._kernels.numpy_backend`; float results may differ
from the NumPy backend in the last few ulps because summation order differs.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def tetra_volume_sums(const double[:, ::1] vertices, const long long[:, ::1] faces):
    cdef Py_ssize_t i, n = faces.shape[0]
    cdef long long i0, i1, i2
    cdef double ax, ay, az, bx, by, bz, cx, cy, cz
    cdef double six_signed, total = 0.0, total_abs = 0.0
    for i in range(n):
        i0 = faces[i, 0]
        i1 = faces[i, 1]
        i2 = faces[i, 2]
        ax = vertices[i0, 0]; ay = vertices[i0, 1]; az = vertices[i0, 2]
        bx = vertices[i1, 0]; by = vertices[i1, 1]; bz = vertices[i1, 2]
        cx = vertices[i2, 0]; cy = vertices[i2, 1]; cz = vertices[i2, 2]
        six_signed = (ax * (by * cz - bz * cy)
                      + ay * (bz * cx - bx * cz)
                      + az * (bx * cy - by * cx))
        total += six_signed
        total_abs += six_signed if six_signed >= 0.0 else -six_signed
    return total / 6.0, total_abs / 6.0


cdef long long _find(long long[::1] parent, long long v) noexcept nogil:
    # path halving
    while parent[v] != v:
        parent[v] = parent[parent[v]]
        v = parent[v]
    return v


def face_component_labels(const long long[:, ::1] faces, long long n_vertices):
    cdef Py_ssize_t i, n = faces.shape[0]
    if n == 0:
        return np.empty(0, dtype=np.int64)
    parent_arr = np.arange(n_vertices, dtype=np.int64)
    cdef long long[::1] parent = parent_arr
    cdef long long ra, rb
    with nogil:
        for i in range(n):
            ra = _find(parent, faces[i, 0])
            rb = _find(parent, faces[i, 1])
            if ra != rb:
                parent[rb] = ra
            ra = _find(parent, faces[i, 1])
            rb = _find(parent, faces[i, 2])
            if ra != rb:
                parent[rb] = ra
    labels_arr = np.empty(n, dtype=np.int64)
    cdef long long[::1] labels = labels_arr
    with nogil:
        for i in range(n):
            labels[i] = _find(parent, faces[i, 0])
    return labels_arr


def component_ranges(const double[:, ::1] vertices,
                     const long long[:, ::1] faces,
                     const long long[::1] labels,
                     long long n_components):
    mins_arr = np.full((n_components, 3), np.inf)
    maxs_arr = np.full((n_components, 3), -np.inf)
    cdef double[:, ::1] mins = mins_arr
    cdef double[:, ::1] maxs = maxs_arr
    cdef Py_ssize_t i, j, k, n = faces.shape[0]
    cdef long long comp, vid
    cdef double x
    with nogil:
        for i in range(n):
            comp = labels[i]
            for j in range(3):
                vid = faces[i, j]
                for k in range(3):
                    x = vertices[vid, k]
                    if x < mins[comp, k]:
                        mins[comp, k] = x
                    if x > maxs[comp, k]:
                        maxs[comp, k] = x
    return mins_arr, maxs_arr
