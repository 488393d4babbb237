"""Procedural meshes: spheres, capped tubes, branches, tori.

These back the shipped example scenes (``proc:`` mesh paths) and every
synthetic oracle in the test suite; no binary mesh assets are needed.
All generators are deterministic.
"""

import urllib.parse

import numpy as np

from vdk.errors import ParseError
from vdk.mesh.trimesh import TriMesh


def icosphere(radius=1.0, subdivisions=3):
    """Subdivided icosahedron projected onto a sphere of ``radius``."""
    phi = (1.0 + np.sqrt(5.0)) / 2.0
    verts = np.array(
        [
            [-1, phi, 0], [1, phi, 0], [-1, -phi, 0], [1, -phi, 0],
            [0, -1, phi], [0, 1, phi], [0, -1, -phi], [0, 1, -phi],
            [phi, 0, -1], [phi, 0, 1], [-phi, 0, -1], [-phi, 0, 1],
        ],
        dtype=np.float64,
    )
    faces = np.array(
        [
            [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
            [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
            [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
            [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
        ],
        dtype=np.int64,
    )
    for _ in range(subdivisions):
        verts, faces = _subdivide(verts, faces)
    verts = verts / np.linalg.norm(verts, axis=1, keepdims=True) * radius
    return TriMesh(verts, faces)


def _subdivide(verts, faces):
    cache = {}
    verts = list(verts)

    def midpoint(a, b):
        key = (a, b) if a < b else (b, a)
        if key not in cache:
            cache[key] = len(verts)
            verts.append((np.asarray(verts[a]) + np.asarray(verts[b])) / 2.0)
        return cache[key]

    out = []
    for a, b, c in faces:
        ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
        out.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]])
    return np.asarray(verts), np.asarray(out, dtype=np.int64)


def capped_tube(radius0=2.0, radius1=None, length=80.0, rings=40, segments=24,
                cap_rings=8):
    """Closed tube along +z with hemispherical caps.

    The shaft runs from z=0 to z=``length`` with radius interpolating
    ``radius0`` to ``radius1``; the caps are hemispheres of the local end
    radius, so the tip apexes sit at (0, 0, -radius0) and
    (0, 0, length + radius1).

    Returns
    -------
    mesh : TriMesh
    tips : (2, 3) ndarray
        Apex positions of both caps.
    """
    if radius1 is None:
        radius1 = radius0
    ang = np.arange(segments) / segments * 2.0 * np.pi
    circle = np.stack([np.cos(ang), np.sin(ang)], axis=1)

    rows = []  # (z, r) per ring, pole handled separately
    # bottom cap: pole angle from just past the apex to the equator
    for k in range(1, cap_rings + 1):
        t = k / cap_rings * (np.pi / 2.0)
        rows.append((-radius0 * np.cos(t), radius0 * np.sin(t)))
    for k in range(1, rings):
        f = k / rings
        rows.append((f * length, radius0 + (radius1 - radius0) * f))
    for k in range(cap_rings, 0, -1):
        t = k / cap_rings * (np.pi / 2.0)
        rows.append((length + radius1 * np.cos(t), radius1 * np.sin(t)))

    verts = [np.array([0.0, 0.0, -radius0])]
    for z, r in rows:
        ring = np.column_stack([circle * r, np.full(segments, z)])
        verts.append(ring)
    verts.append(np.array([[0.0, 0.0, length + radius1]]))
    verts = np.vstack([np.atleast_2d(v) for v in verts])

    faces = []
    ring_start = lambda i: 1 + i * segments
    for s in range(segments):
        faces.append([0, ring_start(0) + (s + 1) % segments, ring_start(0) + s])
    for i in range(len(rows) - 1):
        a, b = ring_start(i), ring_start(i + 1)
        for s in range(segments):
            s2 = (s + 1) % segments
            faces.append([a + s, a + s2, b + s2])
            faces.append([a + s, b + s2, b + s])
    apex = len(verts) - 1
    last = ring_start(len(rows) - 1)
    for s in range(segments):
        faces.append([apex, last + s, last + (s + 1) % segments])
    mesh = TriMesh(verts, np.asarray(faces, dtype=np.int64))
    tips = np.array([[0.0, 0.0, -radius0], [0.0, 0.0, length + radius1]])
    return mesh, tips


def open_cylinder(radius=5.0, length=40.0, rings=20, segments=32, axis=2,
                  center=None):
    """Capless tube (open at both ends), axis along ``axis``."""
    ang = np.arange(segments) / segments * 2.0 * np.pi
    circle = np.stack([np.cos(ang), np.sin(ang)], axis=1) * radius
    zs = np.linspace(-length / 2.0, length / 2.0, rings + 1)
    verts = []
    for z in zs:
        ring = np.zeros((segments, 3))
        other = [i for i in range(3) if i != axis]
        ring[:, other[0]] = circle[:, 0]
        ring[:, other[1]] = circle[:, 1]
        ring[:, axis] = z
        verts.append(ring)
    verts = np.vstack(verts)
    if center is not None:
        verts = verts + np.asarray(center)
    faces = []
    for i in range(rings):
        a, b = i * segments, (i + 1) * segments
        for s in range(segments):
            s2 = (s + 1) % segments
            faces.append([a + s, a + s2, b + s2])
            faces.append([a + s, b + s2, b + s])
    return TriMesh(verts, np.asarray(faces, dtype=np.int64))


def torus(major=20.0, minor=5.0, major_segments=48, minor_segments=24):
    """Torus in the xy-plane, centered at the origin."""
    u = np.arange(major_segments) / major_segments * 2.0 * np.pi
    v = np.arange(minor_segments) / minor_segments * 2.0 * np.pi
    uu, vv = np.meshgrid(u, v, indexing="ij")
    x = (major + minor * np.cos(vv)) * np.cos(uu)
    y = (major + minor * np.cos(vv)) * np.sin(uu)
    z = minor * np.sin(vv)
    verts = np.stack([x.ravel(), y.ravel(), z.ravel()], axis=1)
    faces = []
    for i in range(major_segments):
        for j in range(minor_segments):
            a = i * minor_segments + j
            b = i * minor_segments + (j + 1) % minor_segments
            c = ((i + 1) % major_segments) * minor_segments + (j + 1) % minor_segments
            d = ((i + 1) % major_segments) * minor_segments + j
            faces.append([a, c, b])
            faces.append([a, d, c])
    return TriMesh(verts, np.asarray(faces, dtype=np.int64))


def grid_patch(width=20.0, height=20.0, nx=10, ny=10, z=0.0):
    """Flat rectangular grid in the z=``z`` plane."""
    xs = np.linspace(-width / 2.0, width / 2.0, nx + 1)
    ys = np.linspace(-height / 2.0, height / 2.0, ny + 1)
    xx, yy = np.meshgrid(xs, ys, indexing="ij")
    verts = np.stack([xx.ravel(), yy.ravel(), np.full(xx.size, float(z))], axis=1)
    faces = []
    for i in range(nx):
        for j in range(ny):
            a = i * (ny + 1) + j
            b = a + 1
            c = (i + 1) * (ny + 1) + j + 1
            d = (i + 1) * (ny + 1) + j
            faces.append([a, b, c])
            faces.append([a, c, d])
    return TriMesh(verts, np.asarray(faces, dtype=np.int64))


def cube(size=1.0, center=(0.0, 0.0, 0.0)):
    """Axis-aligned cube of edge ``size``, 12 outward-oriented triangles."""
    h = size / 2.0
    c = np.asarray(center, dtype=np.float64)
    corners = np.array(
        [[sx, sy, sz] for sx in (-h, h) for sy in (-h, h) for sz in (-h, h)]
    ) + c
    # indices: bit 2 = x, bit 1 = y, bit 0 = z
    quads = [
        (0, 1, 3, 2),  # -x
        (6, 7, 5, 4),  # +x
        (0, 4, 5, 1),  # -y
        (2, 3, 7, 6),  # +y
        (0, 2, 6, 4),  # -z
        (1, 5, 7, 3),  # +z
    ]
    faces = []
    for a, b, cq, d in quads:
        faces.append([a, b, cq])
        faces.append([a, cq, d])
    return TriMesh(corners, np.asarray(faces, dtype=np.int64))


# ---------------------------------------------------------------------------
# Implicit branching shapes via marching cubes

def _round_cone_sdf(points, a, b, r1, r2):
    """Distance to a truncated cone with spherical ends (exact SDF)."""
    ba = b - a
    l2 = float(ba @ ba)
    rr = r1 - r2
    a2 = l2 - rr * rr
    il2 = 1.0 / l2
    pa = points - a
    y = pa @ ba
    z = y - l2
    x2 = _sq_norm(pa * l2 - np.outer(y, ba))
    y2 = y * y * l2
    z2 = z * z * l2
    k = np.sign(rr) * rr * rr * x2
    d = (np.sqrt(x2 * a2 * il2) + y * rr) * il2 - r1
    d = np.where(np.sign(z) * a2 * z2 > k, np.sqrt(x2 + z2) * il2 - r2, d)
    d = np.where(np.sign(y) * a2 * y2 < k, np.sqrt(x2 + y2) * il2 - r1, d)
    return d


def _sq_norm(v):
    return np.einsum("ij,ij->i", v, v)


def _smooth_min(a, b, k):
    h = np.clip(0.5 + 0.5 * (b - a) / k, 0.0, 1.0)
    return b + (a - b) * h - k * h * (1.0 - h)


VESSEL_SEGMENTS = [
    # (ax, ay, az, bx, by, bz, r_a, r_b) — a small liver-vessel-like tree
    (0.0, 0.0, 0.0, 0.0, 0.0, 40.0, 6.0, 4.5),
    (0.0, 0.0, 40.0, 24.0, 4.0, 68.0, 4.5, 3.0),
    (0.0, 0.0, 40.0, -22.0, -5.0, 66.0, 4.5, 3.0),
    (24.0, 4.0, 68.0, 44.0, 14.0, 84.0, 3.0, 1.8),
    (24.0, 4.0, 68.0, 28.0, -12.0, 92.0, 3.0, 1.8),
    (-22.0, -5.0, 66.0, -42.0, 6.0, 82.0, 3.0, 1.8),
    (-22.0, -5.0, 66.0, -26.0, -16.0, 90.0, 3.0, 1.8),
]


def branch_tree(segments=None, spacing=0.8, blend=2.0):
    """Closed mesh of a union of round-cone segments, via marching cubes.

    Returns the mesh plus the analytic tip apex positions (the free end of
    every leaf segment pushed out by its end radius, and the root's free
    end likewise).
    """
    from skimage.measure import marching_cubes

    if segments is None:
        segments = VESSEL_SEGMENTS
    segs = [
        (np.array(s[0:3]), np.array(s[3:6]), float(s[6]), float(s[7]))
        for s in segments
    ]
    pts = np.vstack([[s[0], s[1]] for s in segs])
    rmax = max(max(s[2], s[3]) for s in segs)
    lo = pts.min(axis=0) - rmax - 3.0 * spacing
    hi = pts.max(axis=0) + rmax + 3.0 * spacing
    shape = np.ceil((hi - lo) / spacing).astype(int) + 1
    axes = [lo[i] + np.arange(shape[i]) * spacing for i in range(3)]
    gx, gy, gz = np.meshgrid(*axes, indexing="ij")
    grid = np.stack([gx.ravel(), gy.ravel(), gz.ravel()], axis=1)

    sdf = _round_cone_sdf(grid, segs[0][0], segs[0][1], segs[0][2], segs[0][3])
    for a, b, r1, r2 in segs[1:]:
        sdf = _smooth_min(sdf, _round_cone_sdf(grid, a, b, r1, r2), blend)
    field = sdf.reshape(shape)

    verts, faces, _, _ = marching_cubes(field, level=0.0, spacing=(spacing,) * 3)
    verts, faces = _weld(verts + lo, faces.astype(np.int64))
    mesh = TriMesh(verts, faces)
    vol = np.einsum(
        "ij,ij->i",
        mesh.vertices[mesh.faces[:, 0]],
        np.cross(mesh.vertices[mesh.faces[:, 1]], mesh.vertices[mesh.faces[:, 2]]),
    ).sum() / 6.0
    if vol < 0:
        mesh = TriMesh(verts, faces[:, ::-1].copy())

    tips = _segment_tips(segs)
    return mesh, tips


def _weld(verts, faces, decimals=7):
    """Merge coincident vertices and drop collapsed faces.

    Isosurface extraction can place several vertices on the same lattice
    node, which produces zero-area triangles; quantize-and-merge removes
    them without opening the surface.
    """
    key = np.round(verts, decimals)
    uniq, inverse = np.unique(key, axis=0, return_inverse=True)
    remap = np.full(len(uniq), -1, dtype=np.int64)
    # keep the first original vertex for each welded group
    first = np.full(len(uniq), len(verts), dtype=np.int64)
    np.minimum.at(first, inverse, np.arange(len(verts)))
    out_verts = verts[first]
    del remap
    faces = inverse[faces]
    ok = (
        (faces[:, 0] != faces[:, 1])
        & (faces[:, 1] != faces[:, 2])
        & (faces[:, 0] != faces[:, 2])
    )
    faces = faces[ok]
    areas = 0.5 * np.linalg.norm(
        np.cross(
            out_verts[faces[:, 1]] - out_verts[faces[:, 0]],
            out_verts[faces[:, 2]] - out_verts[faces[:, 0]],
        ),
        axis=1,
    )
    faces = faces[areas > 1e-12]
    used = np.zeros(len(out_verts), dtype=bool)
    used[faces.ravel()] = True
    newidx = np.cumsum(used) - 1
    return out_verts[used], newidx[faces]


def _segment_tips(segs):
    # an endpoint is free if no other segment starts or ends there
    counts = {}
    for a, b, _, _ in segs:
        for p in (a, b):
            counts[tuple(np.round(p, 6))] = counts.get(tuple(np.round(p, 6)), 0) + 1
    tips = []
    for a, b, r1, r2 in segs:
        for p, r, other in ((a, r1, b), (b, r2, a)):
            if counts[tuple(np.round(p, 6))] == 1:
                d = (p - other) / np.linalg.norm(p - other)
                tips.append(p + d * r)
    return np.asarray(tips)


def y_branch(spacing=0.6, length=40.0, radius=2.5, tip_radius=1.8, angle_deg=35.0):
    """Y-shaped closed tube with three tips; returns (mesh, tips)."""
    a = np.deg2rad(angle_deg)
    trunk_top = np.array([0.0, 0.0, length])
    segs = [
        (0.0, 0.0, 0.0, 0.0, 0.0, length, radius, radius),
        (0.0, 0.0, length,
         length * 0.8 * np.sin(a), 0.0, length + length * 0.8 * np.cos(a),
         radius, tip_radius),
        (0.0, 0.0, length,
         -length * 0.8 * np.sin(a), 0.0, length + length * 0.8 * np.cos(a),
         radius, tip_radius),
    ]
    del trunk_top
    return branch_tree(segs, spacing=spacing, blend=1.5)


def sliver_blob(n=400, thickness=2e-4, seed=7):
    """Pathologically flat jittered blob, for solver-robustness tests."""
    mesh = icosphere(radius=10.0, subdivisions=3)
    rng = np.random.default_rng(seed)
    v = mesh.vertices.copy()
    v[:, 2] *= thickness
    v += rng.normal(scale=1e-6, size=v.shape)
    del n
    return TriMesh(v, mesh.faces, validate=False)


# ---------------------------------------------------------------------------
# proc: URI resolution used by scene files

_PROC_KINDS = {}


def _register(name):
    def deco(fn):
        _PROC_KINDS[name] = fn
        return fn
    return deco


@_register("icosphere")
def _proc_icosphere(radius=10.0, subdiv=3):
    return icosphere(float(radius), int(subdiv))


@_register("sphere")
def _proc_sphere(radius=10.0, subdiv=3):
    return icosphere(float(radius), int(subdiv))


@_register("tube")
def _proc_tube(radius=2.0, radius1=None, length=80.0, rings=40, segments=24):
    r1 = float(radius1) if radius1 is not None else None
    mesh, _ = capped_tube(float(radius), r1, float(length), int(rings), int(segments))
    return mesh


@_register("ybranch")
def _proc_ybranch(spacing=0.6, length=40.0, radius=2.5):
    mesh, _ = y_branch(spacing=float(spacing), length=float(length), radius=float(radius))
    return mesh


@_register("torus")
def _proc_torus(major=20.0, minor=5.0, major_segments=48, minor_segments=24):
    return torus(float(major), float(minor), int(major_segments), int(minor_segments))


@_register("vessel")
def _proc_vessel(spacing=0.8):
    mesh, _ = branch_tree(spacing=float(spacing))
    return mesh


@_register("cube")
def _proc_cube(size=20.0):
    return cube(float(size))


@_register("grid")
def _proc_grid(width=40.0, height=40.0, nx=20, ny=20):
    return grid_patch(float(width), float(height), int(nx), int(ny))


def resolve_proc_uri(uri):
    """Build the mesh named by a ``proc:kind?arg=value`` URI."""
    rest = uri[len("proc:"):]
    parsed = urllib.parse.urlsplit(rest)
    kind = parsed.path
    if kind not in _PROC_KINDS:
        raise ParseError(f"unknown procedural mesh kind {kind!r}")
    params = dict(urllib.parse.parse_qsl(parsed.query))
    try:
        return _PROC_KINDS[kind](**params)
    except TypeError as exc:
        raise ParseError(f"bad parameters for proc:{kind}: {exc}") from exc
