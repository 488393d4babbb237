"""Piecewise-linear colormaps."""

import json
from dataclasses import dataclass

import numpy as np

from vdk.errors import SchemaError


@dataclass
class ColorMap:
    """Sorted control points mapping [0,1] scalars to linear RGB."""

    name: str
    stops: np.ndarray  # (k, 4) rows of [t, r, g, b]

    def __post_init__(self):
        s = np.asarray(self.stops, dtype=np.float64)
        if s.ndim != 2 or s.shape[1] != 4 or len(s) < 2:
            raise SchemaError("colormap.stops", "expected rows of [t, r, g, b]")
        if (np.diff(s[:, 0]) <= 0).any():
            raise SchemaError("colormap.stops", "positions must be increasing")
        if s[0, 0] != 0.0 or s[-1, 0] != 1.0:
            raise SchemaError("colormap.stops", "must span 0 to 1")
        self.stops = s

    def __call__(self, t):
        t = np.clip(np.asarray(t, dtype=np.float64), 0.0, 1.0)
        pos = self.stops[:, 0]
        idx = np.clip(np.searchsorted(pos, t, side="right") - 1, 0, len(pos) - 2)
        t0 = pos[idx]
        t1 = pos[idx + 1]
        f = ((t - t0) / (t1 - t0))[..., None]
        return self.stops[idx, 1:] * (1.0 - f) + self.stops[idx + 1, 1:] * f


def load_colormap(path) -> ColorMap:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict) or "stops" not in doc:
        raise SchemaError("colormap", "expected { name, stops }")
    return ColorMap(name=str(doc.get("name", "custom")), stops=doc["stops"])


# red core fading to white, for tumor-proximity encodings
HEAT = ColorMap("heat", [
    [0.0, 1.0, 0.0, 0.0],
    [0.5, 1.0, 0.55, 0.2],
    [1.0, 1.0, 1.0, 1.0],
])

DIVERGING = ColorMap("diverging", [
    [0.0, 0.23, 0.30, 0.75],
    [0.5, 0.87, 0.87, 0.87],
    [1.0, 0.71, 0.016, 0.15],
])

# perceptual dark-blue to yellow ramp
VIRIDIS = ColorMap("viridis", [
    [0.0, 0.267, 0.005, 0.329],
    [0.125, 0.283, 0.141, 0.458],
    [0.25, 0.254, 0.265, 0.530],
    [0.375, 0.207, 0.372, 0.553],
    [0.5, 0.164, 0.471, 0.558],
    [0.625, 0.128, 0.567, 0.551],
    [0.75, 0.135, 0.659, 0.518],
    [0.875, 0.267, 0.749, 0.441],
    [1.0, 0.993, 0.906, 0.144],
])

BUILTIN = {m.name: m for m in (HEAT, DIVERGING, VIRIDIS)}


def get_colormap(name: str) -> ColorMap:
    if name not in BUILTIN:
        raise SchemaError("colormap", f"unknown colormap '{name}'")
    return BUILTIN[name]
