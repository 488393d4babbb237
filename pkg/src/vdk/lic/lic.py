"""Line integral convolution, one compiled and one vectorized kernel.

Per pixel a streamline is marched L steps forward then L steps backward
with 1 px midpoint steps, and the noise samples it touches are box
averaged.  Both backends accumulate in the same order (center, forward,
backward) with identical index math, so outputs are bitwise identical.
Marching stops when the streamline leaves the image, reaches a zero
field sample, or the edge mask value changes from the start pixel.
"""

import math

import numpy as np

from vdk._accel import njit_or_none

DEFAULT_HALF_LENGTH = 15


def _lic_scalar(noise, fx, fy, edge, L, out):
    H = noise.shape[0]
    W = noise.shape[1]
    for y in range(H):
        for x in range(W):
            acc = noise[y, x]
            cnt = 1
            e0 = edge[y, x]
            f0x = fx[y, x]
            f0y = fy[y, x]
            n0 = math.sqrt(f0x * f0x + f0y * f0y)
            if n0 >= 1e-12:
                f0x /= n0
                f0y /= n0
                for di in range(2):
                    sgn = 1.0 if di == 0 else -1.0
                    px = float(x)
                    py = float(y)
                    pvx = sgn * f0x
                    pvy = sgn * f0y
                    for _ in range(L):
                        xi = int(math.floor(px + 0.5))
                        yi = int(math.floor(py + 0.5))
                        dx = fx[yi, xi]
                        dy = fy[yi, xi]
                        nn = math.sqrt(dx * dx + dy * dy)
                        if nn < 1e-12:
                            break
                        dx /= nn
                        dy /= nn
                        if dx * pvx + dy * pvy < 0.0:
                            dx = -dx
                            dy = -dy
                        mx = px + 0.5 * dx
                        my = py + 0.5 * dy
                        mxi = int(math.floor(mx + 0.5))
                        myi = int(math.floor(my + 0.5))
                        if 0 <= mxi < W and 0 <= myi < H:
                            ddx = fx[myi, mxi]
                            ddy = fy[myi, mxi]
                            mn = math.sqrt(ddx * ddx + ddy * ddy)
                            if mn >= 1e-12:
                                ddx /= mn
                                ddy /= mn
                                if ddx * pvx + ddy * pvy < 0.0:
                                    ddx = -ddx
                                    ddy = -ddy
                                dx = ddx
                                dy = ddy
                        qx = px + dx
                        qy = py + dy
                        qxi = int(math.floor(qx + 0.5))
                        qyi = int(math.floor(qy + 0.5))
                        if qxi < 0 or qyi < 0 or qxi >= W or qyi >= H:
                            break
                        if edge[qyi, qxi] != e0:
                            break
                        acc += noise[qyi, qxi]
                        cnt += 1
                        px = qx
                        py = qy
                        pvx = dx
                        pvy = dy
            out[y, x] = acc / cnt


_lic_numba = njit_or_none(_lic_scalar)


def _lic_numpy(noise, fx, fy, edge, L, out):
    H, W = noise.shape
    acc = noise.astype(np.float64).copy()
    cnt = np.ones((H, W), dtype=np.int64)
    n0 = np.sqrt(fx * fx + fy * fy)
    ok0 = n0 >= 1e-12
    f0x = np.where(ok0, fx / np.where(ok0, n0, 1.0), 0.0)
    f0y = np.where(ok0, fy / np.where(ok0, n0, 1.0), 0.0)
    yy, xx = np.mgrid[0:H, 0:W]
    for di in range(2):
        sgn = 1.0 if di == 0 else -1.0
        px = xx.astype(np.float64)
        py = yy.astype(np.float64)
        pvx = sgn * f0x
        pvy = sgn * f0y
        active = ok0.copy()
        for _ in range(L):
            if not active.any():
                break
            xi = np.floor(px + 0.5).astype(np.int64)
            yi = np.floor(py + 0.5).astype(np.int64)
            xi = np.clip(xi, 0, W - 1)
            yi = np.clip(yi, 0, H - 1)
            dx = fx[yi, xi]
            dy = fy[yi, xi]
            nn = np.sqrt(dx * dx + dy * dy)
            alive = active & (nn >= 1e-12)
            safe = np.where(nn >= 1e-12, nn, 1.0)
            dx = dx / safe
            dy = dy / safe
            flip = dx * pvx + dy * pvy < 0.0
            dx = np.where(flip, -dx, dx)
            dy = np.where(flip, -dy, dy)
            mx = px + 0.5 * dx
            my = py + 0.5 * dy
            mxi = np.floor(mx + 0.5).astype(np.int64)
            myi = np.floor(my + 0.5).astype(np.int64)
            min_b = (mxi >= 0) & (myi >= 0) & (mxi < W) & (myi < H)
            mxi_c = np.clip(mxi, 0, W - 1)
            myi_c = np.clip(myi, 0, H - 1)
            ddx = fx[myi_c, mxi_c]
            ddy = fy[myi_c, mxi_c]
            mn = np.sqrt(ddx * ddx + ddy * ddy)
            use_mid = min_b & (mn >= 1e-12)
            safem = np.where(mn >= 1e-12, mn, 1.0)
            ddx = ddx / safem
            ddy = ddy / safem
            flipm = ddx * pvx + ddy * pvy < 0.0
            ddx = np.where(flipm, -ddx, ddx)
            ddy = np.where(flipm, -ddy, ddy)
            dx = np.where(use_mid, ddx, dx)
            dy = np.where(use_mid, ddy, dy)
            qx = px + dx
            qy = py + dy
            qxi = np.floor(qx + 0.5).astype(np.int64)
            qyi = np.floor(qy + 0.5).astype(np.int64)
            inb = (qxi >= 0) & (qyi >= 0) & (qxi < W) & (qyi < H)
            qxi_c = np.clip(qxi, 0, W - 1)
            qyi_c = np.clip(qyi, 0, H - 1)
            cross = edge[qyi_c, qxi_c] != edge[yy, xx]
            alive &= inb & ~cross
            np.add.at(acc, (yy[alive], xx[alive]), noise[qyi_c[alive], qxi_c[alive]])
            cnt[alive] += 1
            px = np.where(alive, qx, px)
            py = np.where(alive, qy, py)
            pvx = np.where(alive, dx, pvx)
            pvy = np.where(alive, dy, pvy)
            active = alive
    out[:, :] = acc / cnt


def lic_convolve(noise, field, half_length=DEFAULT_HALF_LENGTH, edge_mask=None):
    """Box-filtered line integral convolution of a noise image.

    ``field`` is (h,w,2) screen vectors; zero vectors stop streamlines.
    ``half_length`` 0 returns the noise unchanged.
    """
    noise = np.ascontiguousarray(noise, dtype=np.float64)
    h, w = noise.shape
    if edge_mask is None:
        edge_mask = np.zeros((h, w), dtype=np.uint8)
    else:
        edge_mask = np.ascontiguousarray(edge_mask, dtype=np.uint8)
    fx = np.ascontiguousarray(field[..., 0], dtype=np.float64)
    fy = np.ascontiguousarray(field[..., 1], dtype=np.float64)
    out = np.zeros_like(noise)
    L = int(half_length)
    if L == 0:
        return noise.copy()
    if _lic_numba is not None:
        _lic_numba(noise, fx, fy, edge_mask, L, out)
    else:
        _lic_numpy(noise, fx, fy, edge_mask, L, out)
    return out
