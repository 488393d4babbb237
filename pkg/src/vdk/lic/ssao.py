"""Screen-space ambient occlusion, one compiled and one vectorized kernel.

Per covered pixel a fixed low-discrepancy set of hemisphere points is
placed around the surface point, reprojected into the frame, and tested
against the depth buffer.  Occlusion counts are integers, so the two
backends agree bitwise by construction as long as index math matches;
both round sample positions with floor(p + 0.5).
"""

import math

import numpy as np

from vdk._accel import njit_or_none

DEFAULT_SAMPLES = 16
# occluder must be nearer by this fraction of the radius to count
DEPTH_BIAS_FRACTION = 0.02


def _halton(index, base):
    f = 1.0
    r = 0.0
    i = index
    while i > 0:
        f /= base
        r += f * (i % base)
        i //= base
    return r


def hemisphere_samples(n, seed=0):
    """(n,3) cosine-weighted, radius-scaled hemisphere points around +z.

    Halton pairs with a seed-dependent Cranley-Patterson rotation keep
    the set deterministic per seed.
    """
    out = np.zeros((n, 3))
    phi_shift = (seed * 0.618033988749895) % 1.0
    for i in range(n):
        u1 = (_halton(i + 1, 2) + phi_shift) % 1.0
        u2 = (_halton(i + 1, 3) + phi_shift * 0.5) % 1.0
        u3 = _halton(i + 1, 5)
        r = math.sqrt(u1)
        phi = 2.0 * math.pi * u2
        z = math.sqrt(max(0.0, 1.0 - u1))
        scale = 0.2 + 0.8 * math.sqrt(u3)
        out[i] = (r * math.cos(phi) * scale,
                  r * math.sin(phi) * scale,
                  z * scale)
    return out


def _ssao_scalar(depth, covered, world, normal, samples,
                 cam_pos, right, true_up, forward,
                 tan_half, aspect, near, far, radius, out):
    H = depth.shape[0]
    W = depth.shape[1]
    k = samples.shape[0]
    inv_range = 1.0 / (far - near)
    radius_norm = radius * inv_range
    bias = DEPTH_BIAS_FRACTION * radius_norm + 1e-7
    for y in range(H):
        for x in range(W):
            if not covered[y, x]:
                continue
            nx = normal[y, x, 0]
            ny = normal[y, x, 1]
            nz = normal[y, x, 2]
            # tangent from the axis least aligned with the normal
            ax = abs(nx)
            ay = abs(ny)
            az = abs(nz)
            rx = 0.0
            ry = 0.0
            rz = 0.0
            if ax <= ay and ax <= az:
                rx = 1.0
            elif ay <= az:
                ry = 1.0
            else:
                rz = 1.0
            tx = ny * rz - nz * ry
            ty = nz * rx - nx * rz
            tz = nx * ry - ny * rx
            tn = math.sqrt(tx * tx + ty * ty + tz * tz)
            if tn < 1e-30:
                continue
            tx /= tn
            ty /= tn
            tz /= tn
            bx = ny * tz - nz * ty
            by = nz * tx - nx * tz
            bz = nx * ty - ny * tx
            wx = world[y, x, 0]
            wy = world[y, x, 1]
            wz = world[y, x, 2]
            occ = 0
            for s in range(k):
                sx = samples[s, 0]
                sy = samples[s, 1]
                sz = samples[s, 2]
                px = wx + radius * (tx * sx + bx * sy + nx * sz)
                py = wy + radius * (ty * sx + by * sy + ny * sz)
                pz = wz + radius * (tz * sx + bz * sy + nz * sz)
                relx = px - cam_pos[0]
                rely = py - cam_pos[1]
                relz = pz - cam_pos[2]
                vz = relx * forward[0] + rely * forward[1] + relz * forward[2]
                if vz < near:
                    continue
                vx = relx * right[0] + rely * right[1] + relz * right[2]
                vy = relx * true_up[0] + rely * true_up[1] + relz * true_up[2]
                ndc_x = vx / (vz * tan_half * aspect)
                ndc_y = vy / (vz * tan_half)
                fx = (ndc_x + 1.0) * 0.5 * W
                fy = (1.0 - ndc_y) * 0.5 * H
                xi = int(math.floor(fx + 0.5))
                yi = int(math.floor(fy + 0.5))
                if xi < 0 or yi < 0 or xi >= W or yi >= H:
                    continue
                d = (vz - near) * inv_range
                if d < 0.0:
                    d = 0.0
                elif d > 1.0:
                    d = 1.0
                buf = depth[yi, xi]
                if buf + bias < d and (d - buf) <= radius_norm:
                    occ += 1
            out[y, x] = occ / k


_ssao_numba = njit_or_none(_ssao_scalar)


def _ssao_numpy(depth, covered, world, normal, samples,
                cam_pos, right, true_up, forward,
                tan_half, aspect, near, far, radius, out):
    H, W = depth.shape
    k = samples.shape[0]
    inv_range = 1.0 / (far - near)
    radius_norm = radius * inv_range
    bias = DEPTH_BIAS_FRACTION * radius_norm + 1e-7
    cov = covered.astype(bool)
    n = normal[cov]
    w = world[cov]
    yy, xx = np.nonzero(cov)

    ref = np.zeros_like(n)
    least = np.argmin(np.abs(n), axis=1)
    ref[np.arange(len(n)), least] = 1.0
    t = np.cross(n, ref)
    tn = np.linalg.norm(t, axis=1)
    ok = tn >= 1e-30
    t = np.where(ok[:, None], t / np.maximum(tn[:, None], 1e-300), 0.0)
    b = np.cross(n, t)

    occ = np.zeros(len(n), dtype=np.int64)
    for s in range(k):
        sx, sy, sz = samples[s]
        offs = t * sx + b * sy + n * sz
        p = w + radius * offs
        rel = p - cam_pos[None, :]
        vz = rel @ forward
        valid = ok & (vz >= near)
        vx = rel @ right
        vy = rel @ true_up
        safe_vz = np.where(valid, vz, 1.0)
        ndc_x = vx / (safe_vz * tan_half * aspect)
        ndc_y = vy / (safe_vz * tan_half)
        xi = np.floor((ndc_x + 1.0) * 0.5 * W + 0.5).astype(np.int64)
        yi = np.floor((1.0 - ndc_y) * 0.5 * H + 0.5).astype(np.int64)
        valid &= (xi >= 0) & (yi >= 0) & (xi < W) & (yi < H)
        d = np.clip((vz - near) * inv_range, 0.0, 1.0)
        buf = depth[np.clip(yi, 0, H - 1), np.clip(xi, 0, W - 1)]
        hit = valid & (buf + bias < d) & ((d - buf) <= radius_norm)
        occ += hit
    vals = occ / k
    vals[~ok] = 0.0
    out[yy, xx] = vals


def compute_ssao(fb, camera, radius=None, samples=DEFAULT_SAMPLES, seed=0):
    """Occlusion fraction per covered pixel; background stays 0.

    ``radius`` defaults to 5% of the scene bounding-sphere radius
    estimated from the covered world positions.
    """
    h, wd = fb.depth.shape
    out = np.zeros((h, wd))
    covered = (fb.object_mask >= 0)
    if samples <= 0 or not covered.any():
        return out
    if radius is None:
        pts = fb.world[covered]
        center = 0.5 * (pts.min(axis=0) + pts.max(axis=0))
        radius = 0.05 * float(np.linalg.norm(pts - center, axis=1).max())
        if radius <= 0.0:
            return out
    sset = hemisphere_samples(samples, seed)
    cov8 = covered.astype(np.uint8)
    args = (fb.depth, cov8, fb.world, fb.normal, sset,
            camera.position, camera.right, camera.true_up, camera.forward,
            camera.tan_half_fov, camera.aspect, camera.near, camera.far,
            float(radius), out)
    if _ssao_numba is not None:
        _ssao_numba(*args)
    else:
        _ssao_numpy(*args)
    return out
