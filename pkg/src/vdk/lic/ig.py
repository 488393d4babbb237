"""Illumination-gradient feature field.

Central differences of the diffuse term, rotated a quarter turn so
streamlines follow iso-illumination contours.  Pixels whose 4-neighbor
stencil leaves the coverage mask get a zero vector, which downstream
integrators treat as a stopping condition.
"""

import numpy as np


def illumination_gradient(illum, covered, rotate=True):
    """(h,w,2) screen vectors (x, y down) from a scalar illum image."""
    illum = np.asarray(illum, dtype=np.float64)
    covered = np.asarray(covered, dtype=bool)
    # gradient[0] differentiates rows (y), gradient[1] columns (x)
    gy, gx = np.gradient(illum)
    interior = covered.copy()
    interior[1:, :] &= covered[:-1, :]
    interior[:-1, :] &= covered[1:, :]
    interior[:, 1:] &= covered[:, :-1]
    interior[:, :-1] &= covered[:, 1:]
    interior[0, :] = False
    interior[-1, :] = False
    interior[:, 0] = False
    interior[:, -1] = False
    gx = np.where(interior, gx, 0.0)
    gy = np.where(interior, gy, 0.0)
    if rotate:
        # (gx, gy) -> (-gy, gx): quarter turn, magnitude kept
        return np.stack([-gy, gx], axis=2)
    return np.stack([gx, gy], axis=2)


def gradient_magnitude(field):
    return np.hypot(field[..., 0], field[..., 1])
