"""Auxiliary glyph tools: lines, anchors, circle glyphs, arrows, void fill."""

from vdk.glyphs.anchors import (Anchor, AnchorSet, CylinderProbe,
                                supporting_anchors, supporting_lines)
from vdk.glyphs.arrows import (ArrowGlyph, GlyphStyle, arrow_glyphs,
                               default_arrow_texture, place_arrow_samples,
                               stamp_arrow_glyphs)
from vdk.glyphs.ccg import (CircleGlyph, concentric_circle_glyphs,
                            glyph_fills, stamp_circle_glyphs)
from vdk.glyphs.poisson import poisson_surface_samples
from vdk.glyphs.voidspace import (extract_contour, fill_void_depth,
                                  void_background)

__all__ = [
    "Anchor", "AnchorSet", "CylinderProbe", "supporting_anchors",
    "supporting_lines", "ArrowGlyph", "GlyphStyle", "arrow_glyphs",
    "default_arrow_texture", "place_arrow_samples", "stamp_arrow_glyphs",
    "CircleGlyph", "concentric_circle_glyphs", "glyph_fills",
    "stamp_circle_glyphs", "poisson_surface_samples", "extract_contour",
    "fill_void_depth", "void_background",
]
