"""Screen-space LIC pipeline over a rendered frame.

Order: ambient occlusion, illumination gradient, LUT weighting, surface
keyed noise, edge-masked convolution, composite with the base shading.
The feature field is the rotated illumination gradient by default; a
projected principal-curvature direction field can be substituted when
the frame was rasterized with direction attributes.
"""

from dataclasses import dataclass, field as dc_field

import numpy as np

from vdk.lic.ig import gradient_magnitude, illumination_gradient
from vdk.lic.lic import DEFAULT_HALF_LENGTH, lic_convolve
from vdk.lic.lut import apply_lut, default_lut
from vdk.lic.noise import modulated_noise
from vdk.lic.ssao import DEFAULT_SAMPLES, compute_ssao

DEPTH_EDGE_THRESHOLD = 0.01
NORMAL_EDGE_DEGREES = 30.0


@dataclass
class LicParams:
    samples: int = DEFAULT_SAMPLES
    radius: float = None          # None: 5% of scene bounding sphere
    half_length: int = DEFAULT_HALF_LENGTH
    seed: int = 0
    field_source: str = "ig"      # "ig" | "curvature"
    rotate_ig: bool = True
    lut: object = None            # None: shipped default table
    stages: tuple = ("ssao", "ig", "lut", "noise", "lic")


def edge_mask(fb, depth_threshold=DEPTH_EDGE_THRESHOLD,
              normal_degrees=NORMAL_EDGE_DEGREES):
    """Binary mask of depth discontinuities and sharp normal changes."""
    d = fb.depth
    n = fb.normal
    h, w = d.shape
    out = np.zeros((h, w), dtype=np.uint8)
    cos_t = np.cos(np.deg2rad(normal_degrees))
    for dy, dx in ((0, 1), (1, 0)):
        a = (slice(0, h - dy), slice(0, w - dx))
        b = (slice(dy, h), slice(dx, w))
        jump = np.abs(d[a] - d[b]) > depth_threshold
        ndot = (n[a] * n[b]).sum(axis=2)
        ncov = (np.linalg.norm(n[a], axis=2) > 0.5) & \
               (np.linalg.norm(n[b], axis=2) > 0.5)
        crease = ncov & (ndot < cos_t)
        hit = jump | crease
        out[a][hit] = 1
        out[b][hit] = 1
    return out


def screen_direction_field(fb, camera):
    """Project per-pixel world directions in attr[:, :, :3] to screen."""
    h, w = fb.depth.shape
    out = np.zeros((h, w, 2))
    covered = fb.object_mask >= 0
    if fb.attr.shape[2] < 3 or not covered.any():
        return out
    d = fb.attr[covered, :3]
    view = camera.rotate_to_view(d)
    s = np.stack([view[:, 0], -view[:, 1]], axis=1)
    n = np.linalg.norm(s, axis=1, keepdims=True)
    ok = n[:, 0] > 1e-9
    out[covered] = np.where(ok[:, None], s / np.maximum(n, 1e-30), 0.0)
    return out


def compose_lic(fb, lut_values, lic_image):
    """Weighted recolor of the base render by LUT output and LIC streaks."""
    covered = fb.object_mask >= 0
    out = fb.color.copy()
    rgb = out[..., :3]
    lut_rgb = lut_values[..., :3]
    wgt = lut_values[..., 3:4]
    shaded = rgb * lut_rgb * (0.35 + 0.65 * lic_image[..., None])
    lum = shaded @ np.array([0.299, 0.587, 0.114])
    desat = shaded * (1.0 - wgt) + lum[..., None] * wgt
    rgb[covered] = desat[covered]
    out[..., 3] = np.where(covered, 1.0, out[..., 3])
    return out


def lic_pipeline(fb, camera, params=None):
    """Run the post chain on a G-buffer frame; returns the final image.

    ``fb`` needs depth, normal, world, illum, and color channels; the
    curvature field source additionally needs direction attributes.
    """
    p = params or LicParams()
    covered = fb.object_mask >= 0
    h, w = fb.depth.shape
    stages = set(p.stages)

    ssao = np.zeros((h, w))
    if "ssao" in stages:
        ssao = compute_ssao(fb, camera, radius=p.radius,
                            samples=p.samples, seed=p.seed)

    ig = np.zeros((h, w, 2))
    if "ig" in stages:
        ig = illumination_gradient(fb.illum, covered, rotate=p.rotate_ig)
    igm = gradient_magnitude(ig)
    peak = igm.max()
    igm_n = igm / peak if peak > 0 else igm

    noise = modulated_noise(fb.world, fb.illum, covered, seed=p.seed)
    if "noise" not in stages:
        noise = np.where(covered, fb.illum, 0.0)

    if p.field_source == "curvature":
        field = screen_direction_field(fb, camera)
    else:
        field = ig

    lic_img = noise
    if "lic" in stages:
        lic_img = lic_convolve(noise, field, half_length=p.half_length,
                               edge_mask=edge_mask(fb))

    if "lut" in stages:
        lut = p.lut if p.lut is not None else default_lut()
        lut_values = apply_lut(ssao, igm_n, lut)
    else:
        lut_values = np.concatenate(
            [np.ones((h, w, 3)), np.zeros((h, w, 1))], axis=2
        )
    return compose_lic(fb, lut_values, lic_img)
