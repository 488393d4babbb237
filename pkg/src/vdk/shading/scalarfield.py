"""Per-vertex scalar fields and their normalization."""

import json
import warnings

import numpy as np

from vdk.errors import LengthMismatch, NonFiniteScalar, SchemaMismatch


def load_scalar_field(path, vertex_count):
    """Read a scalar field file and return one value per vertex.

    Accepts either { "values": [...] } in vertex order or
    { "map": {"vertexId": value} } covering every vertex.
    """
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if isinstance(doc, dict) and "values" in doc:
        values = np.asarray(doc["values"], dtype=np.float64)
    elif isinstance(doc, dict) and "map" in doc:
        values = np.full(vertex_count, np.nan)
        for key, val in doc["map"].items():
            idx = int(key)
            if not 0 <= idx < vertex_count:
                raise LengthMismatch(f"vertex id {idx} out of range")
            values[idx] = float(val)
        if np.isnan(values).any():
            missing = int(np.isnan(values).sum())
            raise LengthMismatch(f"mapping misses {missing} vertices")
    else:
        raise SchemaMismatch("expected { values: [...] } or { map: {...} }")
    return validate_scalars(values, vertex_count)


def validate_scalars(values, vertex_count):
    values = np.asarray(values, dtype=np.float64)
    if values.shape != (vertex_count,):
        raise LengthMismatch(
            f"{values.size} scalars for {vertex_count} vertices")
    if not np.isfinite(values).all():
        raise NonFiniteScalar("scalar field contains NaN or infinity")
    return values


def normalize_scalars(values, value_range=None):
    """Min-max normalize to [0,1]; constant fields map to 0."""
    values = np.asarray(values, dtype=np.float64)
    if value_range is not None:
        lo, hi = float(value_range[0]), float(value_range[1])
    else:
        lo, hi = float(values.min()), float(values.max())
    if hi - lo < 1e-300:
        warnings.warn("constant scalar field; mapping every vertex to 0")
        return np.zeros_like(values)
    return np.clip((values - lo) / (hi - lo), 0.0, 1.0)
