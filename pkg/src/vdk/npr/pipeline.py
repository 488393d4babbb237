"""Hatching pipelines.

Two paths: the full contour + cross-field + streamline + pruning chain
composited over white, and the cheaper offset-mesh overlay whose
transparency fades away from silhouettes.  The expensive chain is cached
on (mesh hash, camera hash, parameter hash) so unchanged frames are a
dictionary lookup.
"""

import hashlib
from collections import deque
from dataclasses import dataclass

import numpy as np

from vdk.errors import MissingOverlay
from vdk.mesh.curvature import estimate_curvature
from vdk.mesh.trimesh import TriMesh
from vdk.npr.contours import extract_contours
from vdk.npr.crossfield import optimize_cross_field
from vdk.npr.streamlines import evenly_spaced_streamlines
from vdk.npr.tone import prune_hatches_by_tone
from vdk.raster import (
    Instance,
    RasterScene,
    rasterize,
    rasterize_gbuffer,
    stamp_polylines,
)

OVERLAY_OFFSET_MM = 1.0
CONTOUR_WIDTH = 1.5
INK = np.array([0.1, 0.1, 0.12])


@dataclass(frozen=True)
class HatchParams:
    d_sep: float = 6.0
    base_width: float = 1.5
    lam: float = 1.0
    max_points: int = 4096

    def key(self):
        blob = f"{self.d_sep}|{self.base_width}|{self.lam}|{self.max_points}"
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _camera_key(camera):
    blob = "|".join(
        repr(tuple(np.ravel(getattr(camera, f))))
        for f in ("position", "look_at", "up")
    ) + f"|{camera.vfov_deg}|{camera.near}|{camera.far}|{camera.width}|{camera.height}"
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def align_cross_directions(mesh, field):
    """One world-space branch per vertex, branch-matched across edges.

    Crosses are 4-fold symmetric, so naive interpolation of arbitrary
    representatives cancels.  A BFS picks each vertex's branch to agree
    with its parent; mismatches collapse onto isolated singular vertices.
    """
    dirs = field.directions()
    perp = np.cross(mesh.vertex_normals, dirs)
    n = len(dirs)
    out = np.zeros_like(dirs)
    seen = np.zeros(n, dtype=bool)
    for root in range(n):
        if seen[root] or len(mesh.one_ring[root]) == 0:
            continue
        out[root] = dirs[root]
        seen[root] = True
        queue = deque([root])
        while queue:
            i = queue.popleft()
            for j in mesh.one_ring[i]:
                j = int(j)
                if seen[j]:
                    continue
                best = None
                best_dot = -np.inf
                for cand in (dirs[j], -dirs[j], perp[j], -perp[j]):
                    dot = float(cand @ out[i])
                    if dot > best_dot:
                        best_dot = dot
                        best = cand
                out[j] = best
                seen[j] = True
                queue.append(j)
    out[~seen] = dirs[~seen]
    return out


def screen_field_image(fb, camera):
    """Per-pixel screen direction (h,w,2) from world directions in attr."""
    h, w = fb.depth.shape
    out = np.zeros((h, w, 2))
    covered = fb.object_mask >= 0
    d = fb.attr[covered, :3]
    view = camera.rotate_to_view(d)
    # pixel y runs downward
    s = np.stack([view[:, 0], -view[:, 1]], axis=1)
    n = np.linalg.norm(s, axis=1, keepdims=True)
    ok = n[:, 0] > 1e-9
    s = np.where(ok[:, None], s / np.maximum(n, 1e-30), 0.0)
    out[covered] = s
    return out


_CACHE = {}
_RECOMPUTES = {"count": 0}


def recompute_count():
    return _RECOMPUTES["count"]


def clear_cache():
    _CACHE.clear()
    _RECOMPUTES["count"] = 0


def hatch_pipeline(mesh, camera, params=HatchParams(), cache=True):
    """Contours + cross-field streamlines + tone pruning over white.

    Returns (image rgba, HatchSet).  Cached on (mesh, camera, params)
    content hashes; a repeat call with the same key does no recompute.
    """
    key = (mesh.content_hash(), _camera_key(camera), params.key())
    if cache and key in _CACHE:
        img, hatches = _CACHE[key]
        return img.copy(), hatches
    _RECOMPUTES["count"] += 1

    curvature = estimate_curvature(mesh)
    field = optimize_cross_field(mesh, curvature, lam=params.lam)
    dirs = align_cross_directions(mesh, field)

    scene = RasterScene(camera, [Instance(mesh, attr=dirs)])
    fb = rasterize_gbuffer(scene)
    covered = fb.object_mask >= 0
    eye = camera.position
    to_eye = eye[None, None, :] - fb.world
    to_eye /= np.maximum(np.linalg.norm(to_eye, axis=2, keepdims=True), 1e-30)
    illum = np.clip((fb.normal * to_eye).sum(axis=2), 0.0, 1.0)
    tone = np.ones_like(fb.depth)
    tone[covered] = illum[covered]

    field_img = screen_field_image(fb, camera)
    hatches = evenly_spaced_streamlines(
        field_img, covered, d_sep=params.d_sep,
        base_width=params.base_width, max_points=params.max_points,
    )
    hatches = prune_hatches_by_tone(
        hatches, tone, d_sep=params.d_sep, base_width=params.base_width
    )

    h, wd = fb.depth.shape
    img = np.ones((h, wd, 4))
    for stroke, width in zip(hatches.strokes, hatches.widths):
        stamp_polylines(img, [stroke], INK, width_px=float(width), alpha=1.0)
    contours = extract_contours(mesh, camera, depth_buffer=fb.depth)
    for pts, _depths in contours:
        stamp_polylines(img, [pts], INK * 0.5, width_px=CONTOUR_WIDTH,
                        alpha=1.0)
    if cache:
        _CACHE[key] = (img.copy(), hatches)
    return img, hatches


def offset_hatch_mesh(mesh, distance=OVERLAY_OFFSET_MM):
    """Copy of the mesh pushed ``distance`` mm along vertex normals."""
    return TriMesh(mesh.vertices + distance * mesh.vertex_normals,
                   mesh.faces, validate=False)


def overlay_hatch_alpha(n_dot_v):
    """Opaque on silhouettes, transparent facing the eye."""
    return (1.0 - np.clip(n_dot_v, 0.0, 1.0)) ** 2


def overlay_hatch_render(base_mesh, camera, hatch_mesh=None, shader=None,
                         stripe_period_mm=2.0):
    """Base render with a contour-faded hatch shell composited on top.

    The shell is the supplied hatch mesh, or the base offset 1 mm along
    normals.  Stroke texture is a fixed-direction stripe pattern in
    object space; what matters for the technique is the alpha law.
    """
    if hatch_mesh is None:
        if base_mesh is None:
            raise MissingOverlay("no base mesh to offset")
        hatch_mesh = offset_hatch_mesh(base_mesh)

    base_fb = rasterize(RasterScene(camera, [Instance(base_mesh)]),
                        shader=shader)
    shell = rasterize_gbuffer(RasterScene(camera, [Instance(hatch_mesh)]))
    covered = shell.object_mask >= 0

    to_eye = camera.position[None, None, :] - shell.world
    to_eye /= np.maximum(np.linalg.norm(to_eye, axis=2, keepdims=True), 1e-30)
    ndv = (shell.normal * to_eye).sum(axis=2)
    alpha = overlay_hatch_alpha(ndv)

    # oblique stripes from object-space position; period in mm
    u = shell.world @ np.array([0.537, 0.731, 0.421])
    stripes = 0.5 + 0.5 * np.cos(2.0 * np.pi * u / stripe_period_mm)
    ink_mask = covered & (stripes > 0.55)
    # shell sits in front of the base surface, no depth test needed
    a = np.where(ink_mask, alpha, 0.0)
    out = base_fb.color.copy()
    out[..., :3] = (1.0 - a[..., None]) * out[..., :3] + a[..., None] * INK
    out[..., 3] = np.maximum(out[..., 3], a)
    return out
