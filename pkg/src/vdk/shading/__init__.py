"""Surface shading: fundamental models, distance encodings, colormaps."""

from vdk.shading.params import DistanceParams, ShadingParams
from vdk.shading.colormap import (BUILTIN, ColorMap, get_colormap,
                                  load_colormap)
from vdk.shading.scalarfield import (load_scalar_field, normalize_scalars,
                                     validate_scalars)
from vdk.shading import formulas

__all__ = [
    "DistanceParams", "ShadingParams", "BUILTIN", "ColorMap", "get_colormap",
    "load_colormap", "load_scalar_field", "normalize_scalars",
    "validate_scalars", "formulas",
]
