"""The sixteen-technique catalogue.

Each entry records the occupied visual cues, the attentive phase, the
distance encoding model, and whether the technique runs at full frame
rate.  Flag values are "yes", "no", or "partial".  Parameter schemas
drive scene validation: every parameter carries a type, a default, and
an optional range.
"""

from dataclasses import dataclass, field

from vdk.errors import UnknownTechnique

CUE_NAMES = ("shading", "shadow", "color", "transparency", "surface",
             "voidSpace")
YES = "yes"
NO = "no"
PARTIAL = "partial"


@dataclass(frozen=True)
class TechniqueDescriptor:
    name: str
    param_schema: dict = field(default_factory=dict)
    cues: dict = field(default_factory=dict)
    phase: dict = field(default_factory=dict)
    distance: dict = field(default_factory=dict)
    realtime: str = YES

    def as_dict(self):
        return {
            "name": self.name,
            "paramSchema": self.param_schema,
            "cues": dict(self.cues),
            "phase": dict(self.phase),
            "distance": dict(self.distance),
            "realtime": self.realtime,
        }


def _flags(*vals):
    return {k: v for k, v in zip(CUE_NAMES, vals)}


def _f(default, lo=None, hi=None):
    out = {"type": "float", "default": default}
    if lo is not None:
        out["min"] = lo
    if hi is not None:
        out["max"] = hi
    return out


def _i(default, lo=None, hi=None):
    out = {"type": "int", "default": default}
    if lo is not None:
        out["min"] = lo
    if hi is not None:
        out["max"] = hi
    return out


def _c(default):
    return {"type": "color", "default": list(default)}


def _v3(default):
    return {"type": "vec3", "default": list(default)}


def _s(default, choices=None):
    out = {"type": "string", "default": default}
    if choices:
        out["choices"] = list(choices)
    return out


_SHARED_SURFACE = {
    "baseColor": _c((0.80, 0.10, 0.10)),
    "lightDirection": _v3((0.0, 0.0, 1.0)),
}

_TECHNIQUES = [
    TechniqueDescriptor(
        name="Phong",
        param_schema={**_SHARED_SURFACE,
                      "shininess": _f(32.0, 1.0, 256.0),
                      "specularColor": _c((0.9, 0.9, 0.9)),
                      "ambient": _c((0.08, 0.08, 0.08))},
        cues=_flags(YES, YES, NO, NO, NO, NO),
        phase={"preattentive": YES, "attentive": NO},
        distance={"egocentric": YES, "exocentric": NO},
        realtime=YES,
    ),
    TechniqueDescriptor(
        name="Toon",
        param_schema={**_SHARED_SURFACE,
                      "toonBands": _i(4, 2, 8),
                      "rimAmount": _f(0.7, 0.0, 1.0),
                      "rimThreshold": _f(0.1, 0.0, 1.0)},
        cues=_flags(YES, YES, NO, NO, NO, NO),
        phase={"preattentive": YES, "attentive": NO},
        distance={"egocentric": YES, "exocentric": NO},
        realtime=YES,
    ),
    TechniqueDescriptor(
        name="Fresnel",
        param_schema={**_SHARED_SURFACE,
                      "fresnelExponent": _f(3.0, 0.1, 16.0),
                      "rimColor": _c((1.0, 1.0, 1.0))},
        cues=_flags(YES, YES, NO, NO, NO, NO),
        phase={"preattentive": YES, "attentive": NO},
        distance={"egocentric": YES, "exocentric": NO},
        realtime=YES,
    ),
    TechniqueDescriptor(
        name="Supporting Lines",
        param_schema={**_SHARED_SURFACE,
                      "planeOffset": _f(2.0, 0.0, None),
                      "lineWidth": _f(1.5, 0.5, 8.0)},
        cues=_flags(YES, YES, NO, NO, NO, YES),
        phase={"preattentive": NO, "attentive": YES},
        distance={"egocentric": YES, "exocentric": YES},
        realtime=YES,
    ),
    TechniqueDescriptor(
        name="Supporting Anchors",
        param_schema={**_SHARED_SURFACE,
                      "radiusScale": _f(0.6, 0.1, 1.0)},
        cues=_flags(YES, NO, NO, PARTIAL, NO, YES),
        phase={"preattentive": NO, "attentive": YES},
        distance={"egocentric": YES, "exocentric": YES},
        realtime=YES,
    ),
    TechniqueDescriptor(
        name="Concentric Circle Glyphs",
        param_schema={**_SHARED_SURFACE,
                      "heatRadius": _f(30.0, 1e-6, None)},
        cues=_flags(YES, NO, YES, NO, NO, PARTIAL),
        phase={"preattentive": NO, "attentive": YES},
        distance={"egocentric": YES, "exocentric": YES},
        realtime=YES,
    ),
    TechniqueDescriptor(
        name="Void Space Surfaces",
        param_schema={**_SHARED_SURFACE,
                      "isolineCount": _i(4, 1, 32),
                      "pcdNear": _c((1.0, 0.0, 0.0)),
                      "pcdFar": _c((0.0, 0.0, 1.0))},
        cues=_flags(YES, NO, YES, NO, NO, YES),
        phase={"preattentive": NO, "attentive": YES},
        distance={"egocentric": YES, "exocentric": NO},
        realtime=YES,
    ),
    TechniqueDescriptor(
        name="Arrow Glyphs",
        param_schema={"baseColor": _c((0.75, 0.75, 0.78)),
                      "maxLength": _f(40.0, 1.0, None),
                      "switchingDistance": _f(50.0, 1.0, None),
                      "thickness": _f(1.6, 0.2, None),
                      "tickSpacing": _f(20.0, 1.0, None)},
        cues=_flags(NO, NO, YES, YES, NO, YES),
        phase={"preattentive": YES, "attentive": YES},
        distance={"egocentric": NO, "exocentric": YES},
        realtime=YES,
    ),
    TechniqueDescriptor(
        name="Heatmaps",
        param_schema={"baseColor": _c((0.85, 0.85, 0.85)),
                      "heatRadius": _f(30.0, 1e-6, None),
                      "heatColor": _c((1.0, 0.0, 0.0))},
        cues=_flags(NO, NO, YES, NO, YES, NO),
        phase={"preattentive": YES, "attentive": YES},
        distance={"egocentric": NO, "exocentric": YES},
        realtime=YES,
    ),
    TechniqueDescriptor(
        name="Isolines",
        param_schema={"baseColor": _c((0.85, 0.85, 0.85)),
                      "isolineRadius": _f(40.0, 1e-6, None),
                      "isolineCount": _i(4, 1, 64),
                      "isolineThickness": _f(1.5, 1e-3, None)},
        cues=_flags(NO, NO, NO, NO, YES, NO),
        phase={"preattentive": YES, "attentive": YES},
        distance={"egocentric": NO, "exocentric": YES},
        realtime=YES,
    ),
    TechniqueDescriptor(
        name="Pseudo-Chromadepth",
        param_schema={"pcdNear": _c((1.0, 0.0, 0.0)),
                      "pcdFar": _c((0.0, 0.0, 1.0)),
                      "lightDirection": _v3((0.0, 0.0, 1.0))},
        cues=_flags(YES, NO, YES, NO, YES, NO),
        phase={"preattentive": YES, "attentive": NO},
        distance={"egocentric": YES, "exocentric": NO},
        realtime=YES,
    ),
    TechniqueDescriptor(
        name="Fog",
        param_schema={**_SHARED_SURFACE,
                      "fogFalloff": _f(2.0, 1e-6, None)},
        cues=_flags(YES, NO, NO, YES, YES, NO),
        phase={"preattentive": YES, "attentive": NO},
        distance={"egocentric": YES, "exocentric": NO},
        realtime=YES,
    ),
    TechniqueDescriptor(
        name="Hatching",
        param_schema={"baseColor": _c((0.92, 0.92, 0.92)),
                      "stripePeriod": _f(2.0, 0.1, None),
                      "hatchMesh": _s("")},
        cues=_flags(NO, NO, NO, NO, NO, NO),
        phase={"preattentive": YES, "attentive": NO},
        distance={"egocentric": YES, "exocentric": NO},
        realtime=YES,
    ),
    TechniqueDescriptor(
        name="Hatching by H. and Z.",
        param_schema={"dSep": _f(6.0, 2.0, 64.0),
                      "baseWidth": _f(1.5, 0.5, 8.0)},
        cues=_flags(NO, YES, NO, NO, NO, NO),
        phase={"preattentive": YES, "attentive": NO},
        distance={"egocentric": YES, "exocentric": NO},
        realtime=PARTIAL,
    ),
    TechniqueDescriptor(
        name="Scalar field",
        param_schema={"scalarSource": _s("axis:z"),
                      "colormap": _s("viridis",
                                     ("viridis", "heat", "diverging"))},
        cues=_flags(NO, NO, YES, NO, YES, NO),
        phase={"preattentive": YES, "attentive": YES},
        distance={"egocentric": PARTIAL, "exocentric": PARTIAL},
        realtime=YES,
    ),
    TechniqueDescriptor(
        name="Vector fields",
        param_schema={"baseColor": _c((0.85, 0.82, 0.80)),
                      "lightDirection": _v3((0.3, 0.5, 1.0)),
                      "samples": _i(16, 0, 64),
                      "halfLength": _i(15, 0, 64),
                      "fieldSource": _s("ig", ("ig", "curvature"))},
        cues=_flags(NO, YES, NO, NO, YES, NO),
        phase={"preattentive": YES, "attentive": YES},
        distance={"egocentric": PARTIAL, "exocentric": PARTIAL},
        realtime=YES,
    ),
]


def list_techniques():
    """All sixteen descriptors in catalogue order."""
    return list(_TECHNIQUES)


def _norm(name):
    return "".join(ch for ch in name.lower() if ch.isalnum())


_BY_KEY = {_norm(t.name): t for t in _TECHNIQUES}
_BY_KEY.update({
    "pcd": _BY_KEY[_norm("Pseudo-Chromadepth")],
    "pseudochromadepth": _BY_KEY[_norm("Pseudo-Chromadepth")],
    "hatchingbyhz": _BY_KEY[_norm("Hatching by H. and Z.")],
    "hzhatching": _BY_KEY[_norm("Hatching by H. and Z.")],
    "heatmap": _BY_KEY[_norm("Heatmaps")],
    "scalarfields": _BY_KEY[_norm("Scalar field")],
    "vectorfield": _BY_KEY[_norm("Vector fields")],
    "ccg": _BY_KEY[_norm("Concentric Circle Glyphs")],
})


def descriptor(name):
    """Lookup by canonical or loosely normalized name."""
    key = _norm(name)
    if key not in _BY_KEY:
        raise UnknownTechnique(name)
    return _BY_KEY[key]
