"""Per-fragment shading formulas, vectorized over fragment batches.

Every function is pure: arrays in, colors out, all in linear light.
``normal`` and ``view`` are unit vectors with view pointing from the
surface towards the camera.
"""

import numpy as np


def _dot(a, b):
    return np.sum(a * b, axis=-1)


def lambert(normal, light):
    return np.maximum(_dot(normal, light), 0.0)


def _specular(normal, view, light, shininess):
    ndl = _dot(normal, light)
    refl = 2.0 * ndl[..., None] * normal - light
    return np.maximum(_dot(refl, view), 0.0) ** shininess


def phong(normal, view, p):
    """Ambient plus Lambert diffuse plus reflected-ray specular."""
    diff = lambert(normal, p.light_direction)
    spec = _specular(normal, view, p.light_direction, p.shininess)
    return (p.ambient_color[None, :]
            + p.base_color[None, :] * diff[:, None]
            + p.specular_color[None, :] * spec[:, None])


def toon_quantize(intensity, bands):
    """Map a [0,1] intensity onto ``bands`` flat levels."""
    return np.clip(np.floor(intensity * bands) / (bands - 1), 0.0, 1.0)


def toon(normal, view, p):
    """Banded diffuse, thresholded specular, rim highlight."""
    diff = toon_quantize(lambert(normal, p.light_direction), p.toon_bands)
    spec = _specular(normal, view, p.light_direction, p.shininess)
    spec_on = (spec > p.rim_threshold).astype(np.float64)
    rim_on = ((1.0 - _dot(normal, view)) > p.rim_amount).astype(np.float64)
    return (p.ambient_color[None, :]
            + p.base_color[None, :] * diff[:, None]
            + p.specular_color[None, :] * spec_on[:, None]
            + p.rim_color[None, :] * rim_on[:, None])


def fresnel(normal, view, p):
    """Blend lit base color towards the rim color at grazing angles."""
    ndv = np.maximum(_dot(normal, view), 0.0)
    w = (1.0 - ndv) ** p.fresnel_exponent
    base = p.base_color[None, :] * lambert(normal, p.light_direction)[:, None]
    return base * (1.0 - w[:, None]) + p.rim_color[None, :] * w[:, None]


def tumor_distance(world, tumor_positions):
    """Per-fragment distance to the nearest tumor position (mm)."""
    d = np.linalg.norm(world[:, None, :] - tumor_positions[None, :, :], axis=2)
    return d.min(axis=1)


def heat_blend(dist, under_color, p):
    """Pull colors towards the heat color inside the heat radius."""
    t = np.clip(dist / p.heat_radius, 0.0, 1.0)[:, None]
    return p.heat_color[None, :] * (1.0 - t) + under_color * t


def isoline_mask(dist, p):
    """True where a fragment lies on one of the distance isolines.

    Band centers sit at k * radius / count; every second band is drawn
    at half thickness.
    """
    spacing = p.isoline_radius / p.isoline_count
    k = np.rint(dist / spacing)
    on_band = (k >= 1) & (k <= p.isoline_count)
    half = np.where(np.asarray(k, dtype=np.int64) % 2 == 0,
                    p.isoline_thickness * 0.25, p.isoline_thickness * 0.5)
    return on_band & (np.abs(dist - k * spacing) < half)


def view_extent(points, camera):
    """Range of view-axis distances covered by a point set."""
    viewz = -camera.to_view(points)[:, 2]
    return float(viewz.min()), float(viewz.max())


def normalized_bbox_depth(world, camera, z_range):
    """Fragment depth mapped to [0,1] across a view-axis range."""
    z0, z1 = z_range
    viewz = -camera.to_view(world)[:, 2]
    if z1 - z0 < 1e-12:
        return np.zeros(len(world))
    return np.clip((viewz - z0) / (z1 - z0), 0.0, 1.0)


def pcd_color(t, p):
    """Near-to-far hue ramp (red to blue by default), unshaded."""
    t = np.asarray(t, dtype=np.float64)[:, None]
    return p.pcd_near_color[None, :] * (1.0 - t) + p.pcd_far_color[None, :] * t


def pcd_shaded(t, normal, p_dist, p_shade):
    """PCD ramp with the reduced-strength diffuse modulation."""
    diff = lambert(normal, p_shade.light_direction)
    return pcd_color(t, p_dist) * (0.5 + 0.5 * diff)[:, None]


def fog_alpha(t, falloff):
    """Opacity of a fragment at normalized bbox depth ``t``."""
    return (1.0 - np.asarray(t, dtype=np.float64)) ** falloff
