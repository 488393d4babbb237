"""Screen-space post pipeline: SSAO, gradients, LUT, noise, LIC."""

from vdk.lic.ig import gradient_magnitude, illumination_gradient
from vdk.lic.lic import lic_convolve
from vdk.lic.lut import LUT, apply_lut, default_lut, load_lut, write_default_lut
from vdk.lic.noise import modulated_noise, position_noise
from vdk.lic.pipeline import (
    LicParams,
    compose_lic,
    edge_mask,
    lic_pipeline,
    screen_direction_field,
)
from vdk.lic.ssao import compute_ssao, hemisphere_samples

__all__ = [
    "LUT",
    "LicParams",
    "apply_lut",
    "compose_lic",
    "compute_ssao",
    "default_lut",
    "edge_mask",
    "gradient_magnitude",
    "hemisphere_samples",
    "illumination_gradient",
    "lic_convolve",
    "lic_pipeline",
    "load_lut",
    "modulated_noise",
    "position_noise",
    "screen_direction_field",
    "write_default_lut",
]
