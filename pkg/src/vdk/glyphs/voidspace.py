"""Void-space background surfaces.

The empty region around the rendered vasculature is turned into a
synthetic surface: silhouette contour pixels donate their depth to
every void pixel through inverse-square distance weighting, the filled
depth field is shaded from its screen-space gradient, and a near-far
hue ramp plus depth isolines encode distance. The filled value is a
convex combination of contour depths, so it always stays within their
range and attaches to the silhouette.

The O(void pixels x contour samples) accumulation is the hot loop and
has compiled and numpy twins; both add contour contributions in index
order, so the backends agree bitwise.
"""

import warnings

import numpy as np

from vdk._accel import njit_or_none
from vdk.errors import NoContour
from vdk.raster.framebuffer import NO_OBJECT
from vdk.shading import formulas

# cap the contour sum per design: cost control with bounded smoothing error
CONTOUR_LIMIT = 2048
DIST_FLOOR = 0.5
ISO_THICKNESS = 0.004  # in normalized depth units


def extract_contour(object_mask):
    """Covered pixels with at least one empty 4-neighbor."""
    covered = object_mask != NO_OBJECT
    empty = ~covered
    edge = np.zeros_like(covered)
    edge[1:, :] |= covered[1:, :] & empty[:-1, :]
    edge[:-1, :] |= covered[:-1, :] & empty[1:, :]
    edge[:, 1:] |= covered[:, 1:] & empty[:, :-1]
    edge[:, :-1] |= covered[:, :-1] & empty[:, 1:]
    ys, xs = np.nonzero(edge)
    return ys, xs


def _void_fill_scalar(vy, vx, cy, cx, cd, floor2, out):
    for i in range(len(vy)):
        y = vy[i]
        x = vx[i]
        num = 0.0
        den = 0.0
        for j in range(len(cy)):
            dy = y - cy[j]
            dx = x - cx[j]
            d2 = dy * dy + dx * dx
            if d2 < floor2:
                d2 = floor2
            w = 1.0 / d2
            num = num + w * cd[j]
            den = den + w
        out[i] = num / den


_void_fill_numba = njit_or_none(_void_fill_scalar)


def _void_fill_numpy(vy, vx, cy, cx, cd, floor2, out):
    """Vectorized twin of :func:`_void_fill_scalar` (same sum order)."""
    num = np.zeros(len(vy))
    den = np.zeros(len(vy))
    for j in range(len(cy)):
        dy = vy - cy[j]
        dx = vx - cx[j]
        d2 = dy * dy + dx * dx
        d2 = np.where(d2 < floor2, floor2, d2)
        w = 1.0 / d2
        num = num + w * cd[j]
        den = den + w
    out[:] = num / den


def fill_void_depth(depth, object_mask):
    """Depth buffer with empty pixels replaced by the contour-weighted fill."""
    covered = object_mask != NO_OBJECT
    filled = depth.copy()
    if covered.all() or not covered.any():
        warnings.warn("no silhouette contour; flat background", NoContour)
        return filled
    cy, cx = extract_contour(object_mask)
    if len(cy) > CONTOUR_LIMIT:
        stride = int(np.ceil(len(cy) / CONTOUR_LIMIT))
        cy = cy[::stride]
        cx = cx[::stride]
    cd = depth[cy, cx]
    vy, vx = np.nonzero(~covered)
    out = np.empty(len(vy))
    args = (vy.astype(np.float64), vx.astype(np.float64),
            cy.astype(np.float64), cx.astype(np.float64),
            np.ascontiguousarray(cd), DIST_FLOOR * DIST_FLOOR, out)
    if _void_fill_numba is not None:
        _void_fill_numba(*args)
    else:
        _void_fill_numpy(*args)
    filled[vy, vx] = out
    return filled


def _screen_normals(filled, strength=48.0):
    gy, gx = np.gradient(filled)
    n = np.stack([-gx * strength, -gy * strength, np.ones_like(filled)], axis=2)
    n /= np.linalg.norm(n, axis=2, keepdims=True)
    return n


def void_background(fb, dist_params):
    """Shaded background colors for the void region of a frame.

    Returns (color (H,W,3), filled depth). Covered pixels keep their
    original color; callers composite the vessel on top.
    """
    filled = fill_void_depth(fb.depth, fb.object_mask)
    normals = _screen_normals(filled)
    illum = np.maximum(normals[:, :, 2], 0.0)
    flat = filled.ravel()
    ramp = formulas.pcd_color(flat, dist_params).reshape(filled.shape + (3,))
    color = ramp * (0.35 + 0.65 * illum)[:, :, None]
    spacing = 1.0 / max(dist_params.isoline_count, 1)
    k = np.rint(filled / spacing)
    on = (k >= 1) & (np.abs(filled - k * spacing) < ISO_THICKNESS)
    color[on] *= 0.25
    return color, filled
