"""Surface-stable modulated noise.

White noise is keyed to quantized object-space position rather than the
pixel grid, so a camera move slides the pattern with the surface instead
of re-rolling it.  The hash is a splitmix64-style integer mix evaluated
in vectorized uint64 arithmetic; the result is multiplied by the diffuse
term.
"""

import numpy as np

# object-space quantization, bins per millimetre
NOISE_BINS_PER_MM = 4.0


def _mix64(h):
    h = (h ^ (h >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    h = (h ^ (h >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return h ^ (h >> np.uint64(31))


def position_noise(world, seed=0, bins_per_mm=NOISE_BINS_PER_MM):
    """Uniform [0,1) noise keyed by quantized world position."""
    w = np.asarray(world, dtype=np.float64)
    q = np.floor(w * bins_per_mm).astype(np.int64).astype(np.uint64)
    with np.errstate(over="ignore"):
        h = q[..., 0] * np.uint64(0x9E3779B185EBCA87)
        h ^= _mix64(q[..., 1] + np.uint64(0xC2B2AE3D27D4EB4F))
        h ^= _mix64(q[..., 2] + np.uint64(0x165667B19E3779F9))
        h ^= _mix64(np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + np.uint64(0xD6E8FEB86659FD93))
        h = _mix64(h)
    return (h >> np.uint64(11)).astype(np.float64) / float(1 << 53)


def modulated_noise(world, illum, covered, seed=0,
                    bins_per_mm=NOISE_BINS_PER_MM):
    """White noise times the diffuse term; background pixels stay 0."""
    covered = np.asarray(covered, dtype=bool)
    out = np.zeros(covered.shape, dtype=np.float64)
    if not covered.any():
        return out
    raw = position_noise(world[covered], seed=seed, bins_per_mm=bins_per_mm)
    out[covered] = raw * np.asarray(illum, dtype=np.float64)[covered]
    return out
