"""Screen-space overlay primitives.

Glyph and line passes draw on top of a shaded frame: capsule strokes,
filled discs, partially filled rings, and textured billboards. Each
primitive rasterizes only its bounding box with a one-pixel analytic
edge ramp, then alpha-composites over the color buffer. An optional
depth test against the frame's depth buffer hides overlay parts behind
the surface.

All loops are per-primitive with vectorized pixel math inside, which is
fast enough for glyph counts in the hundreds; these passes are not part
of the twin-kernel set.
"""

import numpy as np

# overlay fragments may sit exactly on the surface they annotate
DEPTH_BIAS = 2e-3


def composite_over(color, ys, xs, rgb, alpha):
    """Alpha-over onto color[ys, xs] in place (linear light)."""
    a = alpha[:, None]
    dst = color[ys, xs]
    out_a = a + dst[:, 3:4] * (1.0 - a)
    color[ys, xs, 0:3] = rgb * a + dst[:, 0:3] * (1.0 - a)
    color[ys, xs, 3:4] = out_a


def _bbox_grid(lo_x, lo_y, hi_x, hi_y, width, height):
    x0 = max(int(np.floor(lo_x)), 0)
    x1 = min(int(np.ceil(hi_x)), width - 1)
    y0 = max(int(np.floor(lo_y)), 0)
    y1 = min(int(np.ceil(hi_y)), height - 1)
    if x0 > x1 or y0 > y1:
        return None
    ys, xs = np.mgrid[y0:y1 + 1, x0:x1 + 1]
    return ys.ravel(), xs.ravel()


def _coverage(dist, radius):
    # analytic 1 px edge ramp
    return np.clip(radius + 0.5 - dist, 0.0, 1.0)


def _apply(color, ys, xs, rgb, alpha, depth_buffer, frag_depth):
    if depth_buffer is not None and frag_depth is not None:
        visible = frag_depth <= depth_buffer[ys, xs] + DEPTH_BIAS
        ys, xs, alpha = ys[visible], xs[visible], alpha[visible]
        rgb = rgb if rgb.ndim == 1 else rgb[visible]
    keep = alpha > 1e-4
    if not keep.any():
        return
    ys, xs, alpha = ys[keep], xs[keep], alpha[keep]
    rgb = np.broadcast_to(np.asarray(rgb, dtype=np.float64),
                          (len(ys), 3)) if np.asarray(rgb).ndim == 1 else rgb[keep]
    composite_over(color, ys, xs, rgb, alpha)


def stamp_polylines(color, polylines, rgb, width_px, alpha=1.0,
                    depth_buffer=None, polyline_depths=None):
    """Draw polylines as chains of capsule segments.

    ``polylines`` is a list of (k, 2) pixel-coordinate arrays. With
    ``polyline_depths`` (matching (k,) arrays of linear depth) segments
    are depth-tested against ``depth_buffer``.
    """
    height, width = color.shape[:2]
    half = max(float(width_px), 0.0) * 0.5
    rgb = np.asarray(rgb, dtype=np.float64)
    for li, line in enumerate(polylines):
        pts = np.asarray(line, dtype=np.float64)
        dep = None if polyline_depths is None else np.asarray(
            polyline_depths[li], dtype=np.float64)
        for s in range(len(pts) - 1):
            a, b = pts[s], pts[s + 1]
            grid = _bbox_grid(min(a[0], b[0]) - half - 1, min(a[1], b[1]) - half - 1,
                              max(a[0], b[0]) + half + 1, max(a[1], b[1]) + half + 1,
                              width, height)
            if grid is None:
                continue
            ys, xs = grid
            p = np.stack([xs, ys], axis=1).astype(np.float64)
            ab = b - a
            denom = float(ab @ ab)
            t = np.zeros(len(p)) if denom < 1e-12 else np.clip(
                (p - a) @ ab / denom, 0.0, 1.0)
            dist = np.linalg.norm(p - (a + t[:, None] * ab), axis=1)
            cov = _coverage(dist, half) * alpha
            frag_depth = None
            if dep is not None:
                frag_depth = dep[s] + t * (dep[s + 1] - dep[s])
            _apply(color, ys, xs, rgb, cov, depth_buffer, frag_depth)


def stamp_discs(color, centers, radii, rgb, alpha=1.0,
                depth_buffer=None, depths=None):
    """Filled anti-aliased discs at pixel coordinates."""
    height, width = color.shape[:2]
    rgb = np.asarray(rgb, dtype=np.float64)
    centers = np.asarray(centers, dtype=np.float64)
    radii = np.broadcast_to(np.asarray(radii, dtype=np.float64), (len(centers),))
    for i, c in enumerate(centers):
        r = float(radii[i])
        grid = _bbox_grid(c[0] - r - 1, c[1] - r - 1, c[0] + r + 1, c[1] + r + 1,
                          width, height)
        if grid is None:
            continue
        ys, xs = grid
        dist = np.hypot(xs - c[0], ys - c[1])
        cov = _coverage(dist, r) * alpha
        frag_depth = None if depths is None else float(depths[i])
        _apply(color, ys, xs, rgb, cov, depth_buffer, frag_depth)


def stamp_rings(color, center, radius, thickness, rgb, fill=1.0,
                alpha=1.0, depth_buffer=None, depth=None):
    """One ring outline, filled clockwise from 12 o'clock up to ``fill``.

    ``fill`` is the swept fraction of the full circle; 1 draws the whole
    ring, 0 draws nothing.
    """
    if fill <= 0.0:
        return
    height, width = color.shape[:2]
    c = np.asarray(center, dtype=np.float64)
    r_out = radius + thickness * 0.5
    grid = _bbox_grid(c[0] - r_out - 1, c[1] - r_out - 1,
                      c[0] + r_out + 1, c[1] + r_out + 1, width, height)
    if grid is None:
        return
    ys, xs = grid
    dx = xs - c[0]
    dy = ys - c[1]
    dist = np.abs(np.hypot(dx, dy) - radius)
    cov = _coverage(dist, thickness * 0.5) * alpha
    if fill < 1.0:
        # clockwise angle from 12 o'clock, screen y down
        ang = np.mod(np.arctan2(dx, -dy), 2.0 * np.pi)
        cov = np.where(ang <= fill * 2.0 * np.pi, cov, 0.0)
    _apply(color, ys, xs, np.asarray(rgb, dtype=np.float64), cov,
           depth_buffer, depth)


def stamp_billboards(color, quads, texture, rgb, alpha=1.0,
                     depth_buffer=None, depths=None):
    """Textured screen-space parallelograms.

    Each quad is (origin, edge_u, edge_v) in pixels; ``texture`` is an
    (th, tw) grayscale array in [0,1] sampled bilinearly, used as both
    intensity modulation and coverage.
    """
    height, width = color.shape[:2]
    tex = np.asarray(texture, dtype=np.float64)
    th, tw = tex.shape
    rgb = np.asarray(rgb, dtype=np.float64)
    for i, (origin, eu, ev) in enumerate(quads):
        origin = np.asarray(origin, dtype=np.float64)
        eu = np.asarray(eu, dtype=np.float64)
        ev = np.asarray(ev, dtype=np.float64)
        corners = np.stack([origin, origin + eu, origin + ev, origin + eu + ev])
        grid = _bbox_grid(corners[:, 0].min(), corners[:, 1].min(),
                          corners[:, 0].max(), corners[:, 1].max(),
                          width, height)
        if grid is None:
            continue
        ys, xs = grid
        det = eu[0] * ev[1] - eu[1] * ev[0]
        if abs(det) < 1e-12:
            continue
        px = xs - origin[0]
        py = ys - origin[1]
        s = (px * ev[1] - py * ev[0]) / det
        t = (py * eu[0] - px * eu[1]) / det
        inside = (s >= 0.0) & (s <= 1.0) & (t >= 0.0) & (t <= 1.0)
        if not inside.any():
            continue
        u = np.clip(s * (tw - 1), 0.0, tw - 1)
        v = np.clip(t * (th - 1), 0.0, th - 1)
        u0 = np.floor(u).astype(np.int64)
        v0 = np.floor(v).astype(np.int64)
        u1 = np.minimum(u0 + 1, tw - 1)
        v1 = np.minimum(v0 + 1, th - 1)
        fu = u - u0
        fv = v - v0
        sample = ((tex[v0, u0] * (1 - fu) + tex[v0, u1] * fu) * (1 - fv)
                  + (tex[v1, u0] * (1 - fu) + tex[v1, u1] * fu) * fv)
        cov = np.where(inside, sample, 0.0) * alpha
        frag_depth = None if depths is None else float(depths[i])
        _apply(color, ys, xs, rgb, cov, depth_buffer, frag_depth)
