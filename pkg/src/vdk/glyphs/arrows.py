"""Arrow glyphs pointing from the surface towards the tumor.

Sample points come from two Poisson-disk passes: dense spacing within
the switching distance of the tumor, sparse spacing (and larger
arrows) beyond it. Arrows are colored with the near-to-far hue ramp
over distance to the tumor, carry a tick dot every 20 mm of shaft, and
fade out where they run parallel to the surface (opacity equals the
cosine of the angle between arrow and surface normal).
"""

from dataclasses import dataclass

import numpy as np

from vdk.errors import NoTumor
from vdk.glyphs.poisson import poisson_surface_samples
from vdk.shading import formulas

SPARSE_SCALE = 1.6  # sparse-region arrows are drawn larger


@dataclass
class GlyphStyle:
    max_length: float = 40.0          # mm
    switching_distance: float = 50.0  # mm
    thickness: float = 1.6            # mm
    tick_spacing: float = 20.0        # mm
    dense_spacing: float = 6.0        # mm, Poisson radius near the tumor
    sparse_spacing: float = 14.0      # mm, Poisson radius elsewhere

    def __post_init__(self):
        for name in ("max_length", "switching_distance", "thickness",
                     "tick_spacing", "dense_spacing", "sparse_spacing"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")
        if not self.dense_spacing < self.sparse_spacing:
            raise ValueError("dense spacing must be smaller than sparse")


@dataclass
class ArrowGlyph:
    base: np.ndarray       # (3,) world
    tip: np.ndarray        # (3,) world
    direction: np.ndarray  # (3,) unit, towards the tumor
    rgb: np.ndarray
    alpha: float
    scale: float           # 1 dense, SPARSE_SCALE sparse
    ticks: np.ndarray      # (k,3) world positions of the shaft dots
    tumor_distance: float


def place_arrow_samples(mesh, dist_params, style, seed=0):
    """Two-density Poisson sample set driven by tumor distance."""
    tumors = dist_params.require_tumors("arrow glyphs", NoTumor)
    dense_p, dense_n = poisson_surface_samples(mesh, style.dense_spacing,
                                               seed=seed)
    sparse_p, sparse_n = poisson_surface_samples(mesh, style.sparse_spacing,
                                                 seed=seed + 1)
    keep_d = formulas.tumor_distance(dense_p, tumors) <= style.switching_distance \
        if len(dense_p) else np.zeros(0, dtype=bool)
    keep_s = formulas.tumor_distance(sparse_p, tumors) > style.switching_distance \
        if len(sparse_p) else np.zeros(0, dtype=bool)
    points = np.concatenate([dense_p[keep_d], sparse_p[keep_s]], axis=0)
    normals = np.concatenate([dense_n[keep_d], sparse_n[keep_s]], axis=0)
    dense_flag = np.concatenate([np.ones(keep_d.sum(), dtype=bool),
                                 np.zeros(keep_s.sum(), dtype=bool)])
    return points, normals, dense_flag


def arrow_glyphs(points, normals, dense_flags, dist_params, style):
    """World-space arrow descriptions for prepared sample points."""
    tumors = dist_params.require_tumors("arrow glyphs", NoTumor)
    points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    if len(points) == 0:
        return []
    d_all = np.linalg.norm(points[:, None, :] - tumors[None, :, :], axis=2)
    nearest = np.argmin(d_all, axis=1)
    dist = d_all[np.arange(len(points)), nearest]
    lo, hi = float(dist.min()), float(dist.max())
    t = np.zeros_like(dist) if hi - lo < 1e-12 else (dist - lo) / (hi - lo)
    colors = formulas.pcd_color(t, dist_params)

    out = []
    for i, p in enumerate(points):
        d = float(dist[i])
        if d < 1e-9:
            continue
        direction = (tumors[nearest[i]] - p) / d
        length = min(style.max_length, d)
        n_ticks = int(np.floor(length / style.tick_spacing))
        ticks = (p[None, :] + direction[None, :]
                 * (np.arange(1, n_ticks + 1)[:, None] * style.tick_spacing))
        alpha = float(max(np.dot(direction, normals[i]), 0.0))
        out.append(ArrowGlyph(
            base=p, tip=p + direction * length, direction=direction,
            rgb=colors[i], alpha=alpha,
            scale=1.0 if dense_flags[i] else SPARSE_SCALE,
            ticks=ticks, tumor_distance=d))
    return out


def default_arrow_texture(height=192, width=48):
    """Procedural grayscale arrow, shaft along +v, head at v = 1."""
    v, u = np.mgrid[0:height, 0:width]
    u = (u + 0.5) / width - 0.5   # [-0.5, 0.5] across
    v = (v + 0.5) / height        # 0 base .. 1 tip
    head_start = 0.62
    shaft = (np.abs(u) < 0.14) & (v < head_start)
    head_w = 0.5 * np.clip((1.0 - v) / (1.0 - head_start), 0.0, 1.0)
    head = (v >= head_start) & (np.abs(u) < head_w)
    return (shaft | head).astype(np.float64)


def stamp_arrow_glyphs(color, glyphs, camera, style, depth_buffer=None,
                       texture=None):
    """Project and draw arrows with their tick dots."""
    from vdk.raster.overlay import stamp_billboards, stamp_discs

    if texture is None:
        texture = default_arrow_texture()
    quads, q_rgb, q_alpha, q_depth = [], [], [], []
    dot_c, dot_r, dot_d = [], [], []
    for g in glyphs:
        if g.alpha <= 1e-4:
            continue
        view_b = camera.to_view(g.base[None, :])
        view_t = camera.to_view(g.tip[None, :])
        zb, zt = -view_b[0, 2], -view_t[0, 2]
        if zb < camera.near or zt < camera.near:
            continue
        (pb,), _ = camera.project_view(view_b)
        (pt,), _ = camera.project_view(view_t)
        axis = pt - pb
        alen = np.linalg.norm(axis)
        if alen < 1e-6:
            continue
        px_per_mm = camera.height / (2.0 * zb * camera.tan_half_fov)
        width_px = max(style.thickness * g.scale * px_per_mm, 1.0)
        side = np.array([-axis[1], axis[0]]) / alen * width_px
        origin = pb - 0.5 * side
        quads.append((origin, side, axis))
        q_rgb.append(g.rgb)
        q_alpha.append(g.alpha)
        q_depth.append(float(camera.linear_depth(zb)))
        for tick in g.ticks:
            tv = camera.to_view(tick[None, :])
            tz = -tv[0, 2]
            if tz < camera.near:
                continue
            (tp,), _ = camera.project_view(tv)
            dot_c.append(tp)
            dot_r.append(width_px * 0.45)
            dot_d.append(float(camera.linear_depth(tz)))
    for i, quad in enumerate(quads):
        stamp_billboards(color, [quad], texture, q_rgb[i], alpha=q_alpha[i],
                         depth_buffer=depth_buffer,
                         depths=[q_depth[i]] if depth_buffer is not None else None)
    if dot_c:
        stamp_discs(color, np.asarray(dot_c), np.asarray(dot_r),
                    np.array([1.0, 1.0, 1.0]), alpha=0.9,
                    depth_buffer=depth_buffer,
                    depths=dot_d if depth_buffer is not None else None)
