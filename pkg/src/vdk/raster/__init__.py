"""Deterministic software rasterization."""

from vdk.raster.camera import Camera
from vdk.raster.framebuffer import (FrameBuffer, NO_OBJECT,
                                    load_float_buffer, save_float_buffer)
from vdk.raster.raster import (Fragments, Instance, RasterScene,
                               fragments_of, rasterize, rasterize_gbuffer)
from vdk.raster.pick import PickResult, pick
from vdk.raster.shadow import shadow_project
from vdk.raster.overlay import (composite_over, stamp_discs, stamp_polylines,
                                stamp_rings)

__all__ = [
    "Camera", "FrameBuffer", "NO_OBJECT", "load_float_buffer",
    "save_float_buffer", "Fragments", "Instance", "RasterScene",
    "fragments_of", "rasterize", "rasterize_gbuffer", "PickResult", "pick",
    "shadow_project", "composite_over", "stamp_discs", "stamp_polylines",
    "stamp_rings",
]
