"""Concentric circle glyphs.

Each anchor gets a view-aligned billboard with three concentric rings
that fill clockwise from 12 o'clock, inner ring first. The total fill
F = 3 * normalized camera distance, so an empty glyph marks the
nearest anchor and three full rings the farthest. Ring color encodes
tumor proximity through the heat colormap. Billboards shrink in world
space with camera distance (4% of viewport height at the near plane,
scaled by near/dist).
"""

from dataclasses import dataclass

import numpy as np

from vdk.shading import formulas
from vdk.shading.colormap import HEAT

BASE_FRACTION = 0.04
RING_FRACTIONS = (1.0 / 3.0, 2.0 / 3.0, 1.0)
BACKGROUND_ALPHA = 0.25


@dataclass
class CircleGlyph:
    center_px: np.ndarray   # (2,) screen position
    radius_px: float        # outer ring radius
    fills: np.ndarray       # (3,) per-ring swept fraction, inner first
    rgb: np.ndarray         # ring color
    camera_distance: float


def glyph_fills(normalized_distance):
    """Per-ring fill fractions for a [0,1] normalized camera distance."""
    f = 3.0 * float(np.clip(normalized_distance, 0.0, 1.0))
    return np.clip([f, f - 1.0, f - 2.0], 0.0, 1.0)


def concentric_circle_glyphs(anchor_set, camera, dist_params):
    """Build screen-space glyph descriptions for an anchor set.

    Camera distances are normalized over the anchor set's own range; a
    single anchor (degenerate range) normalizes to 0.
    """
    pos = anchor_set.world_positions
    if len(pos) == 0:
        return []
    cam_d = np.linalg.norm(pos - camera.position[None, :], axis=1)
    lo, hi = float(cam_d.min()), float(cam_d.max())
    t = (np.zeros_like(cam_d) if hi - lo < 1e-12
         else (cam_d - lo) / (hi - lo))
    if len(dist_params.tumor_positions):
        tumor_d = formulas.tumor_distance(pos, dist_params.tumor_positions)
        heat_t = np.clip(tumor_d / dist_params.heat_radius, 0.0, 1.0)
    else:
        heat_t = np.ones(len(pos))
    colors = HEAT(heat_t)

    view = camera.to_view(pos)
    viewz = -view[:, 2]
    xy, _ = camera.project_view(view)
    out = []
    for i in range(len(pos)):
        if viewz[i] < camera.near:
            continue
        # world height shrinks with distance; projected twice by 1/dist
        radius_px = (0.5 * BASE_FRACTION * camera.height
                     * (camera.near / viewz[i]) ** 2)
        out.append(CircleGlyph(center_px=xy[i], radius_px=float(radius_px),
                               fills=glyph_fills(t[i]), rgb=colors[i],
                               camera_distance=float(cam_d[i])))
    return out


def stamp_circle_glyphs(color, glyphs):
    """Draw glyphs over a frame (no depth test; glyphs annotate on top)."""
    from vdk.raster.overlay import stamp_rings

    for g in glyphs:
        thickness = max(g.radius_px / 5.0, 1.0)
        for frac, fill in zip(RING_FRACTIONS, g.fills):
            r = g.radius_px * frac
            stamp_rings(color, g.center_px, r, thickness, g.rgb,
                        fill=1.0, alpha=BACKGROUND_ALPHA)
            if fill > 0.0:
                stamp_rings(color, g.center_px, r, thickness, g.rgb,
                            fill=float(fill), alpha=1.0)
