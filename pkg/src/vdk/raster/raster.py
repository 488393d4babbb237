"""Software rasterizer driver.

Pipeline: view transform, near-plane clipping (Sutherland-Hodgman in
view space), projection to pixel coordinates, winding normalization,
then the twin fill kernels write depth, object mask, and the
perspective-correct G-buffer channels (world position, normal,
per-vertex attributes). Shading runs deferred over covered pixels.

Supersampling renders at double resolution and box-averages color in
linear light. Because samples sit at cell corners, the even-coordinate
samples of the doubled grid coincide exactly with the original samples,
which keeps auxiliary buffers bit-stable across the two modes.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from vdk.errors import EmptyScene
from vdk.mesh import TriMesh
from vdk.raster.camera import Camera
from vdk.raster.framebuffer import FrameBuffer, NO_OBJECT
from vdk.raster.kernels import fill_triangles


@dataclass
class Instance:
    """One mesh placed in a scene with an integer object id."""

    mesh: TriMesh
    object_id: int = 0
    attr: Optional[np.ndarray] = None  # (n,) or (n,k) per-vertex scalars

    def attr_2d(self):
        if self.attr is None:
            return np.zeros((len(self.mesh.vertices), 0))
        a = np.asarray(self.attr, dtype=np.float64)
        if a.ndim == 1:
            a = a[:, None]
        return a


@dataclass
class RasterScene:
    camera: Camera
    instances: list = field(default_factory=list)

    def attr_channels(self):
        k = 0
        for inst in self.instances:
            k = max(k, inst.attr_2d().shape[1])
        return k


@dataclass
class Fragments:
    """Covered pixels of a frame, flattened for vectorized shading."""

    xs: np.ndarray
    ys: np.ndarray
    world: np.ndarray      # (p,3)
    normal: np.ndarray     # (p,3) unit
    view_dir: np.ndarray   # (p,3) unit, fragment towards camera
    depth: np.ndarray      # (p,) linear depth
    attr: np.ndarray       # (p,k)
    object_id: np.ndarray  # (p,) int32
    camera: Camera


def _clip_polygon_near(corners, near):
    # corners: list of (viewz, channel-vector); keep viewz >= near
    out = []
    n = len(corners)
    for i in range(n):
        za, va = corners[i]
        zb, vb = corners[(i + 1) % n]
        a_in = za >= near
        b_in = zb >= near
        if a_in:
            out.append((za, va))
        if a_in != b_in:
            t = (near - za) / (zb - za)
            out.append((near, va + t * (vb - va)))
    return out


def _instance_corners(camera, inst):
    """Per-corner arrays for one instance, near-clipped.

    Returns (viewpos (m,3,3), channels (m,3,C)) with channel layout
    [world xyz, normal xyz, attrs...].
    """
    mesh = inst.mesh
    faces = mesh.faces
    if len(faces) == 0:
        return None
    view = camera.to_view(mesh.vertices)
    viewz = -view[:, 2]
    normals = mesh.vertex_normals
    attr = inst.attr_2d()
    chan = np.concatenate([mesh.vertices, normals, attr], axis=1)

    inside = viewz >= camera.near
    f_in = inside[faces]
    n_in = f_in.sum(axis=1)

    keep = faces[n_in == 3]
    viewpos = view[keep]
    channels = chan[keep]

    crossing = faces[(n_in > 0) & (n_in < 3)]
    if len(crossing):
        extra_v = []
        extra_c = []
        for tri in crossing:
            poly = [(viewz[v], np.concatenate([view[v], chan[v]])) for v in tri]
            poly = _clip_polygon_near(poly, camera.near)
            for j in range(1, len(poly) - 1):
                fan = [poly[0], poly[j], poly[j + 1]]
                extra_v.append([p[1][:3] for p in fan])
                extra_c.append([p[1][3:] for p in fan])
        if extra_v:
            viewpos = np.concatenate([viewpos, np.asarray(extra_v)], axis=0)
            channels = np.concatenate([channels, np.asarray(extra_c)], axis=0)
    if len(viewpos) == 0:
        return None
    return viewpos, channels


def _setup_scene(scene):
    """Project all instances and build kernel-ready arrays."""
    camera = scene.camera
    k = scene.attr_channels()
    xs, iws, nums, ids = [], [], [], []
    for inst in scene.instances:
        got = _instance_corners(camera, inst)
        if got is None:
            continue
        viewpos, channels = got
        m = len(viewpos)
        if channels.shape[2] < 6 + k:
            pad = np.zeros((m, 3, 6 + k - channels.shape[2]))
            channels = np.concatenate([channels, pad], axis=2)
        xy, invw = camera.project_view(viewpos.reshape(-1, 3))
        xy = xy.reshape(m, 3, 2)
        invw = invw.reshape(m, 3)
        # normalize winding so kernels see positive signed area only
        area = ((xy[:, 1, 0] - xy[:, 0, 0]) * (xy[:, 2, 1] - xy[:, 0, 1])
                - (xy[:, 1, 1] - xy[:, 0, 1]) * (xy[:, 2, 0] - xy[:, 0, 0]))
        flip = area < 0.0
        xy[flip] = xy[flip][:, [0, 2, 1]]
        invw[flip] = invw[flip][:, [0, 2, 1]]
        channels[flip] = channels[flip][:, [0, 2, 1]]
        numer = channels * invw[:, :, None]
        xs.append(xy)
        iws.append(invw)
        nums.append(numer)
        ids.append(np.full(m, inst.object_id, dtype=np.int32))
    if not xs:
        return None
    return (np.ascontiguousarray(np.concatenate(xs)),
            np.ascontiguousarray(np.concatenate(iws)),
            np.ascontiguousarray(np.concatenate(nums)),
            np.ascontiguousarray(np.concatenate(ids)))


def rasterize_gbuffer(scene: RasterScene) -> FrameBuffer:
    """Fill depth, object mask, and interpolated channels for a scene."""
    camera = scene.camera
    if not scene.instances or all(len(i.mesh.faces) == 0 for i in scene.instances):
        raise EmptyScene("scene contains no triangles")
    k = scene.attr_channels()
    fb = FrameBuffer(camera.width, camera.height, attr_channels=k)
    setup = _setup_scene(scene)
    if setup is None:
        return fb
    xy, invw, numer, tri_ids = setup
    data = np.zeros((camera.height, camera.width, 6 + k))
    fill_triangles(xy, invw, numer, tri_ids, float(camera.near),
                   float(camera.far), fb.depth, data, fb.object_mask)
    covered = fb.object_mask != NO_OBJECT
    fb.world[covered] = data[covered][:, 0:3]
    norm = data[covered][:, 3:6]
    length = np.linalg.norm(norm, axis=1, keepdims=True)
    fb.normal[covered] = np.where(length > 1e-12, norm / np.maximum(length, 1e-12), 0.0)
    if k:
        fb.attr[covered] = data[covered][:, 6:]
    return fb


def fragments_of(fb: FrameBuffer, camera: Camera) -> Fragments:
    ys, xs = np.nonzero(fb.object_mask != NO_OBJECT)
    world = fb.world[ys, xs]
    to_cam = camera.position[None, :] - world
    length = np.linalg.norm(to_cam, axis=1, keepdims=True)
    view_dir = to_cam / np.maximum(length, 1e-12)
    return Fragments(
        xs=xs, ys=ys,
        world=world,
        normal=fb.normal[ys, xs],
        view_dir=view_dir,
        depth=fb.depth[ys, xs],
        attr=fb.attr[ys, xs],
        object_id=fb.object_mask[ys, xs],
        camera=camera,
    )


def rasterize(scene: RasterScene,
              shader: Optional[Callable[[Fragments], np.ndarray]] = None,
              supersample: bool = False,
              light_direction: Optional[np.ndarray] = None) -> FrameBuffer:
    """Render a scene, shading covered pixels with ``shader``.

    ``shader`` maps a :class:`Fragments` batch to (p,3) or (p,4)
    linear-light colors. The illumination buffer stores the clamped
    Lambert term against ``light_direction`` (headlight when omitted).
    With ``supersample`` the color channel is rendered at twice the
    resolution and box-averaged; auxiliary buffers keep the
    base-resolution samples.
    """
    if supersample:
        hi_cam = scene.camera.scaled(2)
        hi = rasterize(RasterScene(hi_cam, scene.instances), shader,
                       light_direction=light_direction)
        fb = FrameBuffer(scene.camera.width, scene.camera.height,
                         attr_channels=hi.attr.shape[2])
        quads = hi.color.reshape(fb.height, 2, fb.width, 2, 4)
        fb.color[:] = quads.mean(axis=(1, 3))
        fb.depth[:] = hi.depth[::2, ::2]
        fb.normal[:] = hi.normal[::2, ::2]
        fb.illum[:] = hi.illum[::2, ::2]
        fb.object_mask[:] = hi.object_mask[::2, ::2]
        fb.world[:] = hi.world[::2, ::2]
        fb.attr[:] = hi.attr[::2, ::2]
        return fb
    fb = rasterize_gbuffer(scene)
    frags = fragments_of(fb, scene.camera)
    if len(frags.xs):
        if light_direction is None:
            lambert = np.sum(frags.normal * frags.view_dir, axis=1)
        else:
            lambert = frags.normal @ np.asarray(light_direction, dtype=np.float64)
        fb.illum[frags.ys, frags.xs] = np.maximum(lambert, 0.0)
        if shader is not None:
            color = np.asarray(shader(frags), dtype=np.float64)
            if color.shape[1] == 3:
                color = np.concatenate([color, np.ones((len(color), 1))], axis=1)
            fb.color[frags.ys, frags.xs] = color
    return fb
