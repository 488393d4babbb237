"""Parameter bundles for the surface shading formulas."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from vdk.errors import SchemaError


def _unit(v):
    v = np.asarray(v, dtype=np.float64)
    n = np.linalg.norm(v)
    if n < 1e-12:
        raise SchemaError("lightDirection", "zero-length vector")
    return v / n


def _rgb(v, name):
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (3,):
        raise SchemaError(name, "expected an RGB triple")
    return v


@dataclass
class ShadingParams:
    """Inputs of the fundamental shading models.

    Colors are linear-light RGB in [0,1]; lightDirection points from the
    surface towards the light and is normalized on construction.
    """

    base_color: np.ndarray = field(default_factory=lambda: np.array([0.80, 0.10, 0.10]))
    shininess: float = 32.0
    specular_color: np.ndarray = field(default_factory=lambda: np.array([0.9, 0.9, 0.9]))
    ambient_color: np.ndarray = field(default_factory=lambda: np.array([0.08, 0.08, 0.08]))
    toon_bands: int = 4
    rim_color: np.ndarray = field(default_factory=lambda: np.array([1.0, 1.0, 1.0]))
    rim_amount: float = 0.7
    rim_threshold: float = 0.1
    fresnel_exponent: float = 3.0
    light_direction: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 1.0]))

    def __post_init__(self):
        self.base_color = _rgb(self.base_color, "baseColor")
        self.specular_color = _rgb(self.specular_color, "specularColor")
        self.ambient_color = _rgb(self.ambient_color, "ambientColor")
        self.rim_color = _rgb(self.rim_color, "rimColor")
        if not self.shininess > 0:
            raise SchemaError("shininess", "must be > 0")
        if int(self.toon_bands) < 2:
            raise SchemaError("toonBands", "must be >= 2")
        self.toon_bands = int(self.toon_bands)
        if not self.fresnel_exponent > 0:
            raise SchemaError("fresnelExponent", "must be > 0")
        self.light_direction = _unit(self.light_direction)


@dataclass
class DistanceParams:
    """Inputs of the distance-encoding techniques (mm where spatial)."""

    tumor_positions: np.ndarray = field(default_factory=lambda: np.zeros((0, 3)))
    heat_radius: float = 30.0
    heat_color: np.ndarray = field(default_factory=lambda: np.array([1.0, 0.0, 0.0]))
    isoline_radius: float = 40.0
    isoline_count: int = 4
    isoline_thickness: float = 1.5
    fog_falloff: float = 2.0
    pcd_near_color: np.ndarray = field(default_factory=lambda: np.array([1.0, 0.0, 0.0]))
    pcd_far_color: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 1.0]))

    def __post_init__(self):
        self.tumor_positions = np.asarray(self.tumor_positions,
                                          dtype=np.float64).reshape(-1, 3)
        self.heat_color = _rgb(self.heat_color, "heatColor")
        self.pcd_near_color = _rgb(self.pcd_near_color, "pcdNearColor")
        self.pcd_far_color = _rgb(self.pcd_far_color, "pcdFarColor")
        if not self.heat_radius > 0:
            raise SchemaError("heatRadius", "must be > 0")
        if int(self.isoline_count) < 1:
            raise SchemaError("isolineCount", "must be >= 1")
        self.isoline_count = int(self.isoline_count)
        if not self.isoline_thickness < self.isoline_radius / self.isoline_count:
            raise SchemaError("isolineThickness",
                              "must be smaller than the isoline spacing")
        if not self.fog_falloff > 0:
            raise SchemaError("fogFalloff", "must be > 0")

    def require_tumors(self, op: str, error_cls):
        if len(self.tumor_positions) == 0:
            raise error_cls(f"{op} needs at least one tumor position")
        return self.tumor_positions
