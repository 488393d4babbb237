"""Stroke-based rendering: contours, cross fields, hatching."""

from vdk.npr.contours import chain_edges, extract_contours, silhouette_edges
from vdk.npr.crossfield import (
    CrossField,
    anisotropy_confidence,
    cross_field_energy,
    optimize_cross_field,
    tangent_frames,
    wrap_quarter,
)
from vdk.npr.pipeline import (
    HatchParams,
    align_cross_directions,
    clear_cache,
    hatch_pipeline,
    offset_hatch_mesh,
    overlay_hatch_alpha,
    overlay_hatch_render,
    recompute_count,
    screen_field_image,
)
from vdk.npr.streamlines import HatchSet, evenly_spaced_streamlines
from vdk.npr.tone import prune_hatches_by_tone

__all__ = [
    "CrossField",
    "HatchParams",
    "HatchSet",
    "align_cross_directions",
    "anisotropy_confidence",
    "chain_edges",
    "clear_cache",
    "cross_field_energy",
    "evenly_spaced_streamlines",
    "extract_contours",
    "hatch_pipeline",
    "offset_hatch_mesh",
    "optimize_cross_field",
    "overlay_hatch_alpha",
    "overlay_hatch_render",
    "prune_hatches_by_tone",
    "recompute_count",
    "screen_field_image",
    "silhouette_edges",
    "tangent_frames",
    "wrap_quarter",
]
