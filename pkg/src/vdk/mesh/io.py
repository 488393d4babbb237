"""OBJ and PLY loading.

Supported subset: positions and faces only. Texture coordinates and other
attributes are skipped with a warning; the rendering pipeline never uses
UVs. OBJ is ASCII ``v``/``f`` records with 1-based indices. PLY covers
ASCII and binary-little-endian with vertex x/y/z and face index lists.
"""

import logging
import struct
from pathlib import Path

import numpy as np

from vdk.errors import NonTriangulated, ParseError
from vdk.mesh.trimesh import TriMesh

logger = logging.getLogger(__name__)


def load_mesh(path, fmt=None, triangulate=True):
    """Load a mesh file into a :class:`TriMesh`.

    ``fmt`` is "obj" or "ply"; inferred from the extension when omitted.
    Polygons with more than 3 vertices are fan-triangulated unless
    ``triangulate`` is False, in which case they raise
    :class:`NonTriangulated`.
    """
    path = Path(path)
    if fmt is None:
        fmt = path.suffix.lstrip(".").lower()
    if fmt == "obj":
        verts, faces = _read_obj(path, triangulate)
    elif fmt == "ply":
        verts, faces = _read_ply(path, triangulate)
    else:
        raise ParseError(f"unsupported mesh format: {fmt!r}")
    if not len(verts):
        raise ParseError(f"{path}: no vertices")
    return TriMesh(np.asarray(verts), np.asarray(faces, dtype=np.int64).reshape(-1, 3))


def _fan(indices, triangulate, where):
    if len(indices) < 3:
        raise ParseError(f"{where}: face with fewer than 3 vertices")
    if len(indices) > 3 and not triangulate:
        raise NonTriangulated(f"{where}: {len(indices)}-gon with triangulation disabled")
    return [(indices[0], indices[i], indices[i + 1]) for i in range(1, len(indices) - 1)]


def _read_obj(path, triangulate):
    verts = []
    faces = []
    warned_uv = False
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(str(exc)) from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        tag = parts[0]
        if tag == "v":
            if len(parts) < 4:
                raise ParseError(f"{path}:{lineno}: short vertex record")
            try:
                verts.append([float(parts[1]), float(parts[2]), float(parts[3])])
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from exc
        elif tag == "f":
            idx = []
            for tok in parts[1:]:
                head = tok.split("/")[0]
                try:
                    i = int(head)
                except ValueError as exc:
                    raise ParseError(f"{path}:{lineno}: bad index {tok!r}") from exc
                # OBJ indices are 1-based; negatives count from the end
                idx.append(i - 1 if i > 0 else len(verts) + i)
            faces.extend(_fan(idx, triangulate, f"{path}:{lineno}"))
        elif tag in ("vt", "vn", "vp"):
            if tag == "vt" and not warned_uv:
                logger.warning("%s: texture coordinates ignored", path)
                warned_uv = True
        # other records (o, g, s, mtllib, usemtl) are irrelevant here
    return verts, faces


def _read_ply(path, triangulate):
    try:
        blob = path.read_bytes()
    except OSError as exc:
        raise ParseError(str(exc)) from exc
    if not blob.startswith(b"ply"):
        raise ParseError(f"{path}: missing ply magic")
    end = blob.find(b"end_header\n")
    if end < 0:
        raise ParseError(f"{path}: unterminated header")
    header = blob[:end].decode("ascii", "replace").splitlines()
    body = blob[end + len(b"end_header\n"):]

    fmt = None
    elements = []  # (name, count, [(proptype, name) or ("list", counttype, itemtype, name)])
    for line in header[1:]:
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "format":
            fmt = parts[1]
        elif parts[0] == "element":
            elements.append((parts[1], int(parts[2]), []))
        elif parts[0] == "property":
            if not elements:
                raise ParseError(f"{path}: property before element")
            if parts[1] == "list":
                elements[-1][2].append(("list", parts[2], parts[3], parts[4]))
            else:
                elements[-1][2].append((parts[1], parts[2]))
    if fmt not in ("ascii", "binary_little_endian"):
        raise ParseError(f"{path}: unsupported ply format {fmt!r}")

    if fmt == "ascii":
        return _ply_ascii(path, body, elements, triangulate)
    return _ply_binary(path, body, elements, triangulate)


_PLY_STRUCT = {
    "char": "b", "int8": "b", "uchar": "B", "uint8": "B",
    "short": "h", "int16": "h", "ushort": "H", "uint16": "H",
    "int": "i", "int32": "i", "uint": "I", "uint32": "I",
    "float": "f", "float32": "f", "double": "d", "float64": "d",
}


def _ply_ascii(path, body, elements, triangulate):
    verts, faces = [], []
    tokens = body.decode("ascii", "replace").split("\n")
    row = 0
    lines = [t for t in tokens if t.strip()]
    for name, count, props in elements:
        for _ in range(count):
            if row >= len(lines):
                raise ParseError(f"{path}: truncated element {name}")
            cols = lines[row].split()
            row += 1
            if name == "vertex":
                names = [p[-1] for p in props]
                try:
                    x = float(cols[names.index("x")])
                    y = float(cols[names.index("y")])
                    z = float(cols[names.index("z")])
                except (ValueError, IndexError) as exc:
                    raise ParseError(f"{path}: bad vertex row") from exc
                verts.append([x, y, z])
            elif name == "face":
                try:
                    n = int(cols[0])
                    idx = [int(c) for c in cols[1 : 1 + n]]
                except (ValueError, IndexError) as exc:
                    raise ParseError(f"{path}: bad face row") from exc
                faces.extend(_fan(idx, triangulate, str(path)))
    return verts, faces


def _ply_binary(path, body, elements, triangulate):
    verts, faces = [], []
    off = 0
    for name, count, props in elements:
        if name == "vertex":
            codes = "".join(_PLY_STRUCT[p[0]] for p in props)
            names = [p[-1] for p in props]
            rec = struct.Struct("<" + codes)
            need = rec.size * count
            if off + need > len(body):
                raise ParseError(f"{path}: truncated vertex data")
            xi, yi, zi = names.index("x"), names.index("y"), names.index("z")
            for vals in rec.iter_unpack(body[off : off + need]):
                verts.append([vals[xi], vals[yi], vals[zi]])
            off += need
        elif name == "face":
            if len(props) != 1 or props[0][0] != "list":
                raise ParseError(f"{path}: unsupported face properties")
            _, ctype, itype, _ = props[0]
            cs = struct.Struct("<" + _PLY_STRUCT[ctype])
            istruct = _PLY_STRUCT[itype]
            for _ in range(count):
                if off + cs.size > len(body):
                    raise ParseError(f"{path}: truncated face data")
                (n,) = cs.unpack_from(body, off)
                off += cs.size
                item = struct.Struct(f"<{n}{istruct}")
                if off + item.size > len(body):
                    raise ParseError(f"{path}: truncated face data")
                idx = list(item.unpack_from(body, off))
                off += item.size
                faces.extend(_fan(idx, triangulate, str(path)))
        else:
            # skip unknown fixed-size elements; lists are unsupported there
            try:
                codes = "".join(_PLY_STRUCT[p[0]] for p in props)
            except KeyError as exc:
                raise ParseError(f"{path}: cannot skip element {name}") from exc
            off += struct.calcsize("<" + codes) * count
    return verts, faces


def save_obj(mesh, path):
    """Write positions and faces as ASCII OBJ (1-based indices)."""
    lines = []
    for v in mesh.vertices:
        lines.append(f"v {v[0]:.17g} {v[1]:.17g} {v[2]:.17g}")
    for f in mesh.faces:
        lines.append(f"f {f[0] + 1} {f[1] + 1} {f[2] + 1}")
    Path(path).write_text("\n".join(lines) + "\n")
