"""Orthographic shadow masks.

The light is directional and perpendicular to the ground plane, so the
shadow of a mesh is its orthogonal projection. Projected triangles are
rasterized with the shared fill kernel at constant depth; the mask
stores each covering instance's object id (first writer wins, so masks
are reproducible).
"""

import warnings
from dataclasses import dataclass

import numpy as np

from vdk.errors import EmptyScene, PlaneIntersectsMesh
from vdk.raster.framebuffer import NO_OBJECT
from vdk.raster.kernels import fill_triangles


@dataclass
class ShadowMask:
    mask: np.ndarray       # (h, w) int32, NO_OBJECT where empty
    origin: np.ndarray     # world point under pixel (0, 0)
    u_axis: np.ndarray     # in-plane unit vector along +x pixels
    v_axis: np.ndarray     # in-plane unit vector along +y pixels
    pixel_size: float      # mm per pixel

    def world_of(self, px, py):
        return (self.origin + px * self.pixel_size * self.u_axis
                + py * self.pixel_size * self.v_axis)


def _plane_basis(normal):
    n = normal / np.linalg.norm(normal)
    helper = np.zeros(3)
    helper[int(np.argmin(np.abs(n)))] = 1.0
    u = np.cross(n, helper)
    u /= np.linalg.norm(u)
    return n, u, np.cross(n, u)


def shadow_project(scene, plane_point, plane_normal,
                   resolution=256, margin=0.05) -> ShadowMask:
    """Project all instances onto the plane and return the coverage mask.

    The pixel grid is square, fitted to the projected bounding box with
    a relative ``margin``. Warns PlaneIntersectsMesh when geometry
    crosses the plane; the mask is still produced.
    """
    if not scene.instances or all(len(i.mesh.faces) == 0 for i in scene.instances):
        raise EmptyScene("nothing to project")
    plane_point = np.asarray(plane_point, dtype=np.float64)
    n, u, v = _plane_basis(np.asarray(plane_normal, dtype=np.float64))

    flats = []
    for inst in scene.instances:
        if len(inst.mesh.faces) == 0:
            continue
        signed = (inst.mesh.vertices - plane_point) @ n
        if signed.min() < 0.0 < signed.max():
            warnings.warn(
                f"object {inst.object_id} crosses the shadow plane",
                PlaneIntersectsMesh)
        proj = inst.mesh.vertices - signed[:, None] * n[None, :]
        rel = proj - plane_point
        p2 = np.stack([rel @ u, rel @ v], axis=1)
        flats.append((p2, inst.mesh.faces, inst.object_id))

    lo = np.min([f[0].min(axis=0) for f in flats], axis=0)
    hi = np.max([f[0].max(axis=0) for f in flats], axis=0)
    span = float(max(hi[0] - lo[0], hi[1] - lo[1], 1e-9))
    pad = span * margin
    lo = lo - pad
    pixel_size = (span + 2.0 * pad) / (resolution - 1)

    mask = np.full((resolution, resolution), NO_OBJECT, dtype=np.int32)
    depth = np.ones((resolution, resolution))
    data = np.zeros((resolution, resolution, 0))
    for p2, faces, oid in flats:
        px = (p2 - lo[None, :]) / pixel_size
        xy = px[faces]
        area = ((xy[:, 1, 0] - xy[:, 0, 0]) * (xy[:, 2, 1] - xy[:, 0, 1])
                - (xy[:, 1, 1] - xy[:, 0, 1]) * (xy[:, 2, 0] - xy[:, 0, 0]))
        flip = area < 0.0
        xy[flip] = xy[flip][:, [0, 2, 1]]
        m = len(xy)
        fill_triangles(np.ascontiguousarray(xy), np.ones((m, 3)),
                       np.zeros((m, 3, 0)), np.full(m, oid, dtype=np.int32),
                       0.0, 2.0, depth, data, mask)
    origin = plane_point + lo[0] * u + lo[1] * v
    return ShadowMask(mask=mask, origin=origin, u_axis=u, v_axis=v,
                      pixel_size=pixel_size)


def flattened_shadow_meshes(scene, plane_point, plane_normal, lift=1e-3):
    """Copies of the scene meshes squashed onto the plane, slightly lifted.

    Useful for drawing the shadow as scene geometry so the z-buffer
    handles occlusion between shadow and casters.
    """
    from vdk.mesh import TriMesh

    plane_point = np.asarray(plane_point, dtype=np.float64)
    n = np.asarray(plane_normal, dtype=np.float64)
    n = n / np.linalg.norm(n)
    out = []
    for inst in scene.instances:
        if len(inst.mesh.faces) == 0:
            continue
        signed = (inst.mesh.vertices - plane_point) @ n
        proj = (inst.mesh.vertices - signed[:, None] * n[None, :]
                + lift * n[None, :])
        out.append((TriMesh(proj, inst.mesh.faces.copy(), validate=False),
                    inst.object_id))
    return out
