"""Evenly spaced streamlines over a screen-space cross-field image.

Jobard-Lefer seeding: each finished line spawns candidate seeds at
+-d_sep perpendicular to itself, processed breadth-first.  A uniform
occupancy grid answers proximity queries.  For a cross field the
integrator picks, at every step, the branch among the four quarter-turn
rotations best aligned with the previous step, so lines follow one arm
of the cross without doubling back.
"""

from dataclasses import dataclass, field

import numpy as np

from vdk.errors import EmptyMask

D_SEP_DEFAULT = 6.0
MAX_STROKE_POINTS = 4096
# self-proximity test skips this many trailing points (times d_sep) so
# tight curves are not mistaken for loop closure
SELF_GUARD = 3.0


@dataclass
class HatchSet:
    strokes: list                 # list of (k,2) float arrays, px (x, y)
    widths: np.ndarray            # (n,) px
    level: list = field(default_factory=list)   # "hatch" | "cross" | "removed"

    def count(self):
        return len(self.strokes)


class _OccupancyGrid:
    """Point buckets on a coarse grid for radius queries."""

    def __init__(self, width, height, cell):
        self.cell = float(cell)
        self.buckets = {}

    def add(self, x, y, stroke_id):
        key = (int(x / self.cell), int(y / self.cell))
        self.buckets.setdefault(key, []).append((x, y, stroke_id))

    def nearest_other_sq(self, x, y, radius, exclude):
        """Squared distance to the closest point of any other stroke.

        Exact for distances up to ``radius``; beyond that a lower bound
        may be missed, which is fine for threshold tests.
        """
        cx = int(x / self.cell)
        cy = int(y / self.cell)
        reach = int(np.ceil(radius / self.cell))
        best = np.inf
        for ky in range(cy - reach, cy + reach + 1):
            for kx in range(cx - reach, cx + reach + 1):
                for px, py, sid in self.buckets.get((kx, ky), ()):
                    if sid == exclude:
                        continue
                    d2 = (px - x) ** 2 + (py - y) ** 2
                    if d2 < best:
                        best = d2
        return best


def _sample_dir(field_img, x, y):
    h, w = field_img.shape[:2]
    xi = int(round(x))
    yi = int(round(y))
    if xi < 0 or yi < 0 or xi >= w or yi >= h:
        return None
    d = field_img[yi, xi]
    n = d[0] * d[0] + d[1] * d[1]
    if n < 1e-12:
        return None
    return d / np.sqrt(n)


def _branch(d, prev):
    """Quarter-turn branch of d most aligned with the previous step."""
    px, py = prev
    best = None
    best_dot = -np.inf
    for bx, by in ((d[0], d[1]), (-d[0], -d[1]), (-d[1], d[0]), (d[1], -d[0])):
        dot = bx * px + by * py
        if dot > best_dot:
            best_dot = dot
            best = (bx, by)
    return np.array(best)


def _integrate(field_img, mask, grid, seed, prev_dir, d_test, stroke_id,
               own_prior, step=1.0, max_points=MAX_STROKE_POINTS):
    """March one direction from seed; returns the points past the seed."""
    h, w = mask.shape
    pts = []
    own = list(own_prior)
    guard = int(SELF_GUARD * 2.0 * d_test / step) + 1
    p = np.array(seed, dtype=np.float64)
    prev = np.array(prev_dir, dtype=np.float64)
    for _ in range(max_points):
        d = _sample_dir(field_img, p[0], p[1])
        if d is None:
            break
        d = _branch(d, prev)
        mid = p + 0.5 * step * d
        dm = _sample_dir(field_img, mid[0], mid[1])
        if dm is not None:
            d = _branch(dm, prev)
        q = p + step * d
        xi = int(round(q[0]))
        yi = int(round(q[1]))
        if xi < 0 or yi < 0 or xi >= w or yi >= h or not mask[yi, xi]:
            break
        if grid.nearest_other_sq(q[0], q[1], d_test, stroke_id) <= d_test ** 2:
            break
        if len(own) > guard:
            body = np.asarray(own[: len(own) - guard])
            d2 = (body[:, 0] - q[0]) ** 2 + (body[:, 1] - q[1]) ** 2
            if d2.min() <= d_test ** 2:
                break
        pts.append(q.copy())
        own.append(q)
        prev = d
        p = q
    return pts


def evenly_spaced_streamlines(field_img, mask, d_sep=D_SEP_DEFAULT,
                              base_width=1.5, max_points=MAX_STROKE_POINTS):
    """Place streamlines with target spacing d_sep over masked pixels.

    ``field_img`` is (h,w,2) screen direction vectors (one branch of the
    cross per pixel); zero vectors mean no field.  Deterministic: the
    first masked pixel in raster order seeds the first line, the seed
    queue is FIFO, and a sparse raster sweep catches disconnected
    regions.
    """
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        raise EmptyMask("no hatchable pixels")
    h, w = mask.shape
    d_test = 0.5 * d_sep
    grid = _OccupancyGrid(w, h, max(d_sep, 1.0))
    strokes = []
    min_pts = max(2, int(d_sep))

    def try_line(sx, sy):
        xi = int(round(sx))
        yi = int(round(sy))
        if xi < 0 or yi < 0 or xi >= w or yi >= h or not mask[yi, xi]:
            return None
        # candidates sit at exactly d_sep from their parent: accept equality
        if grid.nearest_other_sq(sx, sy, d_sep, -1) < d_sep * d_sep * (1 - 1e-9):
            return None
        d = _sample_dir(field_img, sx, sy)
        if d is None:
            return None
        sid = len(strokes)
        p0 = np.array([sx, sy], dtype=np.float64)
        fwd = _integrate(field_img, mask, grid, p0, d, d_test, sid, [p0],
                         max_points=max_points)
        bwd = _integrate(field_img, mask, grid, p0, -d, d_test, sid,
                         [p0] + fwd, max_points=max_points)
        pts = bwd[::-1] + [p0] + fwd
        if len(pts) < min_pts:
            return None
        arr = np.asarray(pts)
        for x, y in arr:
            grid.add(x, y, sid)
        strokes.append(arr)
        return sid

    queue = []

    def drain():
        qi = 0
        while qi < len(queue):
            line = strokes[queue[qi]]
            qi += 1
            for i in range(len(line)):
                p = line[i]
                if i + 1 < len(line):
                    t = line[i + 1] - p
                else:
                    t = p - line[i - 1]
                n = np.hypot(t[0], t[1])
                if n < 1e-12:
                    continue
                nrm = np.array([-t[1], t[0]]) / n
                for side in (1.0, -1.0):
                    cand = p + side * d_sep * nrm
                    new = try_line(cand[0], cand[1])
                    if new is not None:
                        queue.append(new)
        del queue[:]

    ys, xs = np.nonzero(mask)
    first = None
    for y, x in zip(ys, xs):
        if _sample_dir(field_img, float(x), float(y)) is not None:
            first = (float(x), float(y))
            break
    if first is None:
        raise EmptyMask("field vanishes on every masked pixel")
    sid = try_line(*first)
    if sid is not None:
        queue.append(sid)
    drain()

    stride = max(1, int(d_sep))
    for y in range(0, h, stride):
        for x in range(0, w, stride):
            new = try_line(float(x), float(y))
            if new is not None:
                queue.append(new)
                drain()

    widths = np.full(len(strokes), base_width, dtype=np.float64)
    return HatchSet(strokes=strokes, widths=widths,
                    level=["hatch"] * len(strokes))
