"""Triangle fill kernels, one compiled and one vectorized.

Both backends walk triangles in submission order and evaluate the same
IEEE-754 expression per sample (direct edge functions, left-to-right
interpolation sums, strict-less depth test), so their outputs are
bitwise identical. Select with the VDK_NUMBA environment flag.

Sample points sit at integer pixel coordinates (cell corners). Ties on
shared edges follow a complementary edge rule (accept when the directed
edge has dy > 0, or dy == 0 and dx > 0), so adjacent triangles cover
each boundary sample exactly once.
"""

import math

import numpy as np

from vdk._accel import njit_or_none


def _fill_triangles_scalar(xy, invw, numer, tri_ids, near, far, depth, data, mask):
    # xy (m,3,2) pixel coords, positively oriented; invw (m,3);
    # numer (m,3,C) attribute*invw; tri_ids (m,); depth/data/mask in-place
    H = depth.shape[0]
    W = depth.shape[1]
    C = numer.shape[2]
    inv_range = 1.0 / (far - near)
    for t in range(xy.shape[0]):
        x0 = xy[t, 0, 0]
        y0 = xy[t, 0, 1]
        x1 = xy[t, 1, 0]
        y1 = xy[t, 1, 1]
        x2 = xy[t, 2, 0]
        y2 = xy[t, 2, 1]
        area = (x1 - x0) * (y2 - y0) - (y1 - y0) * (x2 - x0)
        if area <= 0.0:
            continue
        minx = min(x0, min(x1, x2))
        maxx = max(x0, max(x1, x2))
        miny = min(y0, min(y1, y2))
        maxy = max(y0, max(y1, y2))
        bx0 = int(math.ceil(minx))
        bx1 = int(math.floor(maxx))
        by0 = int(math.ceil(miny))
        by1 = int(math.floor(maxy))
        if bx0 < 0:
            bx0 = 0
        if by0 < 0:
            by0 = 0
        if bx1 > W - 1:
            bx1 = W - 1
        if by1 > H - 1:
            by1 = H - 1
        if bx0 > bx1 or by0 > by1:
            continue
        # tie rules per edge: accept dy > 0, or dy == 0 and dx > 0
        tl0 = (y2 - y1) > 0.0 or ((y2 - y1) == 0.0 and (x2 - x1) > 0.0)
        tl1 = (y0 - y2) > 0.0 or ((y0 - y2) == 0.0 and (x0 - x2) > 0.0)
        tl2 = (y1 - y0) > 0.0 or ((y1 - y0) == 0.0 and (x1 - x0) > 0.0)
        iw0 = invw[t, 0]
        iw1 = invw[t, 1]
        iw2 = invw[t, 2]
        tid = tri_ids[t]
        for y in range(by0, by1 + 1):
            for x in range(bx0, bx1 + 1):
                e0 = (x2 - x1) * (y - y1) - (y2 - y1) * (x - x1)
                e1 = (x0 - x2) * (y - y2) - (y0 - y2) * (x - x2)
                e2 = (x1 - x0) * (y - y0) - (y1 - y0) * (x - x0)
                if not ((e0 > 0.0 or (e0 == 0.0 and tl0))
                        and (e1 > 0.0 or (e1 == 0.0 and tl1))
                        and (e2 > 0.0 or (e2 == 0.0 and tl2))):
                    continue
                lam0 = e0 / area
                lam1 = e1 / area
                lam2 = e2 / area
                iw = lam0 * iw0 + lam1 * iw1 + lam2 * iw2
                viewz = 1.0 / iw
                d = (viewz - near) * inv_range
                if d < 0.0:
                    d = 0.0
                elif d > 1.0:
                    d = 1.0
                if d < depth[y, x]:
                    depth[y, x] = d
                    mask[y, x] = tid
                    for c in range(C):
                        num = (lam0 * numer[t, 0, c] + lam1 * numer[t, 1, c]
                               + lam2 * numer[t, 2, c])
                        data[y, x, c] = num * viewz


_fill_triangles_numba = njit_or_none(_fill_triangles_scalar)


def _fill_triangles_numpy(xy, invw, numer, tri_ids, near, far, depth, data, mask):
    """Vectorized twin of :func:`_fill_triangles_scalar` (same op order)."""
    H, W = depth.shape
    inv_range = 1.0 / (far - near)
    for t in range(xy.shape[0]):
        x0, y0 = xy[t, 0, 0], xy[t, 0, 1]
        x1, y1 = xy[t, 1, 0], xy[t, 1, 1]
        x2, y2 = xy[t, 2, 0], xy[t, 2, 1]
        area = (x1 - x0) * (y2 - y0) - (y1 - y0) * (x2 - x0)
        if area <= 0.0:
            continue
        bx0 = max(int(math.ceil(min(x0, min(x1, x2)))), 0)
        bx1 = min(int(math.floor(max(x0, max(x1, x2)))), W - 1)
        by0 = max(int(math.ceil(min(y0, min(y1, y2)))), 0)
        by1 = min(int(math.floor(max(y0, max(y1, y2)))), H - 1)
        if bx0 > bx1 or by0 > by1:
            continue
        tl0 = (y2 - y1) > 0.0 or ((y2 - y1) == 0.0 and (x2 - x1) > 0.0)
        tl1 = (y0 - y2) > 0.0 or ((y0 - y2) == 0.0 and (x0 - x2) > 0.0)
        tl2 = (y1 - y0) > 0.0 or ((y1 - y0) == 0.0 and (x1 - x0) > 0.0)
        xs = np.arange(bx0, bx1 + 1, dtype=np.float64)[None, :]
        ys = np.arange(by0, by1 + 1, dtype=np.float64)[:, None]
        e0 = (x2 - x1) * (ys - y1) - (y2 - y1) * (xs - x1)
        e1 = (x0 - x2) * (ys - y2) - (y0 - y2) * (xs - x2)
        e2 = (x1 - x0) * (ys - y0) - (y1 - y0) * (xs - x0)
        accept = (((e0 > 0.0) | ((e0 == 0.0) & tl0))
                  & ((e1 > 0.0) | ((e1 == 0.0) & tl1))
                  & ((e2 > 0.0) | ((e2 == 0.0) & tl2)))
        if not accept.any():
            continue
        lam0 = e0 / area
        lam1 = e1 / area
        lam2 = e2 / area
        iw = lam0 * invw[t, 0] + lam1 * invw[t, 1] + lam2 * invw[t, 2]
        with np.errstate(divide="ignore"):
            viewz = np.where(accept, 1.0 / np.where(accept, iw, 1.0), 0.0)
        d = (viewz - near) * inv_range
        d = np.clip(d, 0.0, 1.0)
        sub = (slice(by0, by1 + 1), slice(bx0, bx1 + 1))
        zpass = accept & (d < depth[sub])
        if not zpass.any():
            continue
        depth[sub][zpass] = d[zpass]
        mask[sub][zpass] = tri_ids[t]
        num = (lam0[:, :, None] * numer[t, 0][None, None, :]
               + lam1[:, :, None] * numer[t, 1][None, None, :]
               + lam2[:, :, None] * numer[t, 2][None, None, :])
        data[sub][zpass] = num[zpass] * viewz[zpass][:, None]


def fill_triangles(xy, invw, numer, tri_ids, near, far, depth, data, mask):
    """Dispatch to the compiled kernel, or the numpy twin when disabled."""
    if _fill_triangles_numba is not None:
        _fill_triangles_numba(xy, invw, numer, tri_ids, near, far, depth, data, mask)
    else:
        _fill_triangles_numpy(xy, invw, numer, tri_ids, near, far, depth, data, mask)
