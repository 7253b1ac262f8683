"""Triangle-mesh file I/O: Wavefront OBJ and ASCII PLY.

Deliberately small, auditable parsers. Only geometry is read: normals,
texture coordinates and colors are skipped, polygon faces are
fan-triangulated around their first vertex, and binary PLY is rejected.
Writers print coordinates via ``repr`` so a save/load round-trip
reproduces every float bit-exactly.

OBJ: ``v x y z`` and ``f i j k ...`` records, 1-based indices, optional
``/vt/vn`` suffixes ignored, negative indices resolved relative to the
vertices seen so far.

PLY: ``format ascii 1.0``; an ``element vertex`` with ``x``/``y``/``z``
properties (any float type, other properties skipped positionally) and an
``element face`` with a ``vertex_indices`` (or ``vertex_index``) list
property.
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from .errors import MeshParseError
from .mesh import TriangleMesh

_OBJ_IGNORED = {
    "vt", "vn", "vp", "o", "g", "s", "usemtl", "mtllib", "l", "p",
}


def _float_token(token: str, path, lineno: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise MeshParseError(f"expected a number, got {token!r}", path, lineno) from None
    if not np.isfinite(value):
        raise MeshParseError(f"non-finite coordinate {token!r}", path, lineno)
    return value


def _fan_triangulate(indices: list[int], out: list[tuple[int, int, int]]) -> None:
    anchor = indices[0]
    for i in range(1, len(indices) - 1):
        out.append((anchor, indices[i], indices[i + 1]))


def _check_face(indices: list[int], n_vertices: int, path, lineno: int) -> None:
    for idx in indices:
        if idx < 0 or idx >= n_vertices:
            raise MeshParseError(
                f"face references vertex {idx + 1} but only {n_vertices} vertices exist",
                path,
                lineno,
            )
    if len(set(indices)) != len(indices):
        raise MeshParseError("face repeats a vertex index", path, lineno)


def _load_obj(path) -> TriangleMesh:
    vertices: list[tuple[float, float, float]] = []
    faces: list[tuple[int, int, int]] = []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            tokens = raw.split()
            if not tokens or tokens[0].startswith("#"):
                continue
            keyword = tokens[0]
            if keyword == "v":
                if len(tokens) < 4:
                    raise MeshParseError("vertex needs 3 coordinates", path, lineno)
                # extra fields (vertex colors) are ignored
                vertices.append(tuple(_float_token(t, path, lineno) for t in tokens[1:4]))
            elif keyword == "f":
                if len(tokens) < 4:
                    raise MeshParseError("face needs at least 3 indices", path, lineno)
                indices = []
                for token in tokens[1:]:
                    head = token.split("/", 1)[0]
                    try:
                        idx = int(head)
                    except ValueError:
                        raise MeshParseError(
                            f"bad face index {token!r}", path, lineno
                        ) from None
                    if idx == 0:
                        raise MeshParseError("OBJ indices are 1-based", path, lineno)
                    indices.append(idx - 1 if idx > 0 else len(vertices) + idx)
                _check_face(indices, len(vertices), path, lineno)
                _fan_triangulate(indices, faces)
            elif keyword in _OBJ_IGNORED:
                continue
            # unknown keywords are skipped, as common OBJ readers do
    return TriangleMesh(np.array(vertices, dtype=np.float64).reshape(-1, 3),
                        np.array(faces, dtype=np.int64).reshape(-1, 3))


class _PlyElement:
    def __init__(self, name: str, count: int):
        self.name = name
        self.count = count
        self.properties: list[tuple[str, bool]] = []  # (name, is_list)


def _parse_ply_header(handle, path) -> tuple[list[_PlyElement], int]:
    lineno = 1
    if handle.readline().strip() != "ply":
        raise MeshParseError("missing 'ply' magic", path, 1)
    elements: list[_PlyElement] = []
    saw_format = False
    while True:
        raw = handle.readline()
        lineno += 1
        if raw == "":
            raise MeshParseError("unexpected end of header", path, lineno)
        tokens = raw.split()
        if not tokens:
            continue
        keyword = tokens[0]
        if keyword == "format":
            if tokens[1:2] != ["ascii"]:
                raise MeshParseError(
                    "only 'format ascii 1.0' is supported (binary PLY unsupported)",
                    path,
                    lineno,
                )
            saw_format = True
        elif keyword in ("comment", "obj_info"):
            continue
        elif keyword == "element":
            if len(tokens) != 3:
                raise MeshParseError("malformed element declaration", path, lineno)
            try:
                count = int(tokens[2])
            except ValueError:
                raise MeshParseError("bad element count", path, lineno) from None
            elements.append(_PlyElement(tokens[1], count))
        elif keyword == "property":
            if not elements:
                raise MeshParseError("property before any element", path, lineno)
            if len(tokens) >= 2 and tokens[1] == "list":
                if len(tokens) != 5:
                    raise MeshParseError("malformed list property", path, lineno)
                elements[-1].properties.append((tokens[4], True))
            else:
                if len(tokens) != 3:
                    raise MeshParseError("malformed property", path, lineno)
                elements[-1].properties.append((tokens[2], False))
        elif keyword == "end_header":
            break
        else:
            raise MeshParseError(f"unknown header keyword {keyword!r}", path, lineno)
    if not saw_format:
        raise MeshParseError("header has no format declaration", path, lineno)
    return elements, lineno


def _load_ply(path) -> TriangleMesh:
    with open(path, "r", encoding="utf-8") as handle:
        elements, lineno = _parse_ply_header(handle, path)
        vertices = np.empty((0, 3), dtype=np.float64)
        faces: list[tuple[int, int, int]] = []
        for element in elements:
            if element.name == "vertex":
                names = [name for name, _ in element.properties]
                try:
                    cols = [names.index("x"), names.index("y"), names.index("z")]
                except ValueError:
                    raise MeshParseError(
                        "vertex element lacks x/y/z properties", path, lineno
                    ) from None
                if any(is_list for _, is_list in element.properties):
                    raise MeshParseError(
                        "list properties on the vertex element are unsupported",
                        path,
                        lineno,
                    )
                rows = np.empty((element.count, 3), dtype=np.float64)
                for i in range(element.count):
                    raw = handle.readline()
                    lineno += 1
                    if raw == "":
                        raise MeshParseError("unexpected end of vertex data", path, lineno)
                    tokens = raw.split()
                    if len(tokens) < len(names):
                        raise MeshParseError("short vertex row", path, lineno)
                    for k, col in enumerate(cols):
                        rows[i, k] = _float_token(tokens[col], path, lineno)
                vertices = rows
            elif element.name == "face":
                list_pos = None
                for pos, (name, is_list) in enumerate(element.properties):
                    if is_list and name in ("vertex_indices", "vertex_index"):
                        list_pos = pos
                        break
                if list_pos is None:
                    raise MeshParseError(
                        "face element lacks a vertex_indices list property",
                        path,
                        lineno,
                    )
                # scalar properties before the list each consume one token
                offset = sum(1 for _, is_list in element.properties[:list_pos] if not is_list)
                for _ in range(element.count):
                    raw = handle.readline()
                    lineno += 1
                    if raw == "":
                        raise MeshParseError("unexpected end of face data", path, lineno)
                    tokens = raw.split()
                    try:
                        n = int(tokens[offset])
                        indices = [int(t) for t in tokens[offset + 1 : offset + 1 + n]]
                    except (ValueError, IndexError):
                        raise MeshParseError("malformed face row", path, lineno) from None
                    if len(indices) != n or n < 3:
                        raise MeshParseError(
                            "face needs at least 3 indices", path, lineno
                        )
                    _check_face(indices, vertices.shape[0], path, lineno)
                    _fan_triangulate(indices, faces)
            else:
                for _ in range(element.count):
                    handle.readline()
                    lineno += 1
    return TriangleMesh(vertices, np.array(faces, dtype=np.int64).reshape(-1, 3))


def _sniff_format(path) -> str:
    with open(path, "r", encoding="utf-8", errors="replace") as handle:
        first = handle.readline().strip()
    return "ply-ascii" if first == "ply" else "obj"


def _normalize_format(fmt: str) -> str:
    name = fmt.lower().replace("_", "-")
    if name in ("ply", "ply-ascii", "ascii-ply"):
        return "ply-ascii"
    if name in ("obj", "auto"):
        return name
    raise ValueError(f"unknown mesh format {fmt!r}")


def resolve_format(path, fmt: str = "auto") -> str:
    """Resolve 'auto' to a concrete format using the extension, then content."""
    name = _normalize_format(fmt)
    if name != "auto":
        return name
    suffix = Path(path).suffix.lower()
    if suffix == ".obj":
        return "obj"
    if suffix == ".ply":
        return "ply-ascii"
    return _sniff_format(path)


def load_mesh(path, fmt: str = "auto") -> TriangleMesh:
    """Load a triangle mesh from an OBJ or ASCII-PLY file.

    Raises MeshParseError (with line number) on malformed input and OSError
    on I/O failure. The returned mesh preserves the file's vertex and face
    order.
    """
    resolved = resolve_format(path, fmt)
    if resolved == "obj":
        return _load_obj(path)
    return _load_ply(path)


def save_mesh(mesh: TriangleMesh, path, fmt: str = "auto") -> None:
    """Write a mesh so that ``load_mesh`` reproduces it bit-exactly."""
    name = _normalize_format(fmt)
    if name == "auto":
        suffix = Path(path).suffix.lower()
        if suffix == ".ply":
            name = "ply-ascii"
        else:
            name = "obj"
    tmp = os.fspath(path)
    with open(tmp, "w", encoding="utf-8") as handle:
        if name == "obj":
            _write_obj(mesh, handle)
        else:
            _write_ply(mesh, handle)


def _write_obj(mesh: TriangleMesh, handle) -> None:
    for x, y, z in mesh.vertices:
        handle.write(f"v {float(x)!r} {float(y)!r} {float(z)!r}\n")
    for a, b, c in mesh.faces:
        handle.write(f"f {a + 1} {b + 1} {c + 1}\n")


def _write_ply(mesh: TriangleMesh, handle) -> None:
    handle.write("ply\n")
    handle.write("format ascii 1.0\n")
    handle.write(f"element vertex {mesh.n_vertices}\n")
    handle.write("property double x\n")
    handle.write("property double y\n")
    handle.write("property double z\n")
    handle.write(f"element face {mesh.n_faces}\n")
    handle.write("property list uchar int vertex_indices\n")
    handle.write("end_header\n")
    for x, y, z in mesh.vertices:
        handle.write(f"{float(x)!r} {float(y)!r} {float(z)!r}\n")
    for a, b, c in mesh.faces:
        handle.write(f"3 {a} {b} {c}\n")
