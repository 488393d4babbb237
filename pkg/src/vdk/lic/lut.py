"""2D lookup tables mapping (ssao, |ig|) to color and weight.

The table is a small grid sampled bilinearly: x indexes ambient
occlusion, y the normalized illumination-gradient length, each cell
holds RGB plus a weight channel.  The default table darkens with
occlusion and desaturates where the gradient is strong; it ships as an
editable JSON file next to the code rather than baked into it.
"""

import json
from importlib import resources
from pathlib import Path

import numpy as np

from vdk.errors import LUTMissing, SchemaMismatch


class LUT:
    """Bilinear 2D table with RGB + weight entries."""

    def __init__(self, grid):
        grid = np.asarray(grid, dtype=np.float64)
        if grid.ndim != 3 or grid.shape[2] != 4:
            raise SchemaMismatch(f"LUT grid must be (ny, nx, 4), got {grid.shape}")
        if grid.shape[0] < 2 or grid.shape[1] < 2:
            raise SchemaMismatch("LUT grid needs at least 2x2 entries")
        self.grid = grid

    def sample(self, x, y):
        """Bilinear lookup; x, y arrays in [0,1] -> (..., 4)."""
        ny, nx, _ = self.grid.shape
        u = np.clip(np.asarray(x, dtype=np.float64), 0.0, 1.0) * (nx - 1)
        v = np.clip(np.asarray(y, dtype=np.float64), 0.0, 1.0) * (ny - 1)
        u0 = np.floor(u).astype(np.int64)
        v0 = np.floor(v).astype(np.int64)
        u0 = np.minimum(u0, nx - 2)
        v0 = np.minimum(v0, ny - 2)
        fu = (u - u0)[..., None]
        fv = (v - v0)[..., None]
        g = self.grid
        top = g[v0, u0] * (1.0 - fu) + g[v0, u0 + 1] * fu
        bot = g[v0 + 1, u0] * (1.0 - fu) + g[v0 + 1, u0 + 1] * fu
        return top * (1.0 - fv) + bot * fv


def apply_lut(ssao, ig_magnitude, lut):
    """Per-pixel (h,w,4) RGB+weight from the two scalar fields."""
    if lut is None:
        raise LUTMissing("no lookup table loaded")
    return lut.sample(ssao, ig_magnitude)


def load_lut(path):
    """Read a JSON grid file: {"grid": [[[r,g,b,w], ...], ...]}."""
    p = Path(path)
    if not p.exists():
        raise LUTMissing(str(path))
    with open(p) as fh:
        data = json.load(fh)
    if "grid" not in data:
        raise SchemaMismatch("LUT file missing 'grid'")
    return LUT(np.asarray(data["grid"], dtype=np.float64))


def default_lut():
    """The shipped table: brightness 1 - 0.7*ssao, desaturation with |ig|."""
    ref = resources.files("vdk.lic").joinpath("default_lut.json")
    with resources.as_file(ref) as p:
        return load_lut(p)


def write_default_lut(path, n=9):
    """Regenerate the shipped table (used once; kept for editing)."""
    xs = np.linspace(0.0, 1.0, n)
    ys = np.linspace(0.0, 1.0, n)
    grid = np.zeros((n, n, 4))
    for j, y in enumerate(ys):
        for i, x in enumerate(xs):
            b = 1.0 - 0.7 * x
            grid[j, i] = (b, b, b, y)
    with open(path, "w") as fh:
        json.dump({"grid": grid.tolist()}, fh, indent=1)
