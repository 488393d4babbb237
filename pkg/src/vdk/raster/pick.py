"""Ray picking against scene geometry.

The pick ray goes through the same sample point the rasterizer shades
for that pixel, so picked depth matches the depth buffer. Intersection
is branchless Moeller-Trumbore over all triangles of every instance;
the nearest hit wins, ties resolved by submission order then triangle
index so results are reproducible.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

# hits closer than this along the ray are ignored (self-origin guard)
RAY_EPS = 1e-9


@dataclass
class PickResult:
    object_id: int
    triangle: int
    vertex: int                 # nearest vertex of the hit triangle
    world_position: np.ndarray  # (3,) point on the surface
    depth: float                # normalized linear depth of the hit


def _intersect_all(origin, direction, verts, faces):
    """Ray parameters t for every face (inf where missed)."""
    v0 = verts[faces[:, 0]]
    e1 = verts[faces[:, 1]] - v0
    e2 = verts[faces[:, 2]] - v0
    pvec = np.cross(direction[None, :], e2)
    det = np.einsum("ij,ij->i", e1, pvec)
    ok = np.abs(det) > 1e-300
    inv_det = np.where(ok, 1.0 / np.where(ok, det, 1.0), 0.0)
    tvec = origin[None, :] - v0
    u = np.einsum("ij,ij->i", tvec, pvec) * inv_det
    qvec = np.cross(tvec, e1)
    v = direction @ qvec.T * inv_det
    t = np.einsum("ij,ij->i", e2, qvec) * inv_det
    ok &= (u >= 0.0) & (v >= 0.0) & (u + v <= 1.0) & (t > RAY_EPS)
    return np.where(ok, t, np.inf)


def pick(scene, px, py) -> Optional[PickResult]:
    """Nearest surface point under pixel (px, py), or None on a miss."""
    camera = scene.camera
    origin, direction = camera.ray(float(px), float(py))
    best_t = np.inf
    best = None
    for order, inst in enumerate(scene.instances):
        mesh = inst.mesh
        if len(mesh.faces) == 0:
            continue
        t = _intersect_all(origin, direction, mesh.vertices, mesh.faces)
        idx = int(np.argmin(t))
        if t[idx] < best_t:
            best_t = t[idx]
            best = (order, inst, idx)
    if best is None or not np.isfinite(best_t):
        return None
    _, inst, tri = best
    point = origin + best_t * direction
    corners = inst.mesh.vertices[inst.mesh.faces[tri]]
    nearest = int(np.argmin(np.linalg.norm(corners - point[None, :], axis=1)))
    vertex = int(inst.mesh.faces[tri][nearest])
    viewz = float(-camera.to_view(point[None, :])[0, 2])
    return PickResult(
        object_id=inst.object_id,
        triangle=tri,
        vertex=vertex,
        world_position=point,
        depth=float(camera.linear_depth(viewz)),
    )
