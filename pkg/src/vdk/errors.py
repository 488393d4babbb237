"""Exception types shared across the toolkit."""


class VdkError(Exception):
    """Base class for all toolkit errors."""


class ParseError(VdkError):
    """Malformed mesh or data file."""


class DegenerateGeometry(VdkError):
    """Mesh contains a face below the minimum-area threshold."""


class NonTriangulated(VdkError):
    """Polygon face with more than 3 vertices and triangulation disabled."""


class NonManifold(VdkError):
    """Edge with a number of incident faces other than 2."""


class SolverFailure(VdkError):
    """Sparse factorization failed (singular or indefinite system)."""


class NumericalCollapse(VdkError):
    """Contraction produced non-finite vertex positions."""


class EmptyEndpoints(VdkError):
    """Root selection called with no endpoints."""


class SchemaMismatch(VdkError):
    """Persisted file does not match the expected schema."""


class SchemaError(VdkError):
    """Scene file violates the scene schema.

    ``field`` holds the dotted path of the offending entry.
    """

    def __init__(self, field, message):
        self.field = field
        self.message = message
        super().__init__(f"{field}: {message}")


class UnknownTechnique(VdkError):
    """Technique name not present in the registry."""


class RenderError(VdkError):
    """Rendering failed after the scene validated."""


class EmptyScene(VdkError):
    """Scene contains no renderable geometry."""


class PlaneIntersectsMesh(UserWarning):
    """Shadow plane cuts through the mesh; shadow is still rendered."""


class NoContour(UserWarning):
    """Frame fully covered or fully empty; void fill degenerates to flat."""


class SelectionBelowPlane(VdkError):
    """Supporting-line selection lies under the shadow plane."""


class AnchorOutsideCylinderRange(UserWarning):
    """Anchor beyond the cylinder cap; clamped to the rim."""


class NoTumor(VdkError):
    """Distance-based technique invoked without tumor positions."""


class LengthMismatch(VdkError):
    """Per-vertex data whose length differs from the vertex count."""


class NonFiniteScalar(VdkError):
    """Scalar field contains NaN or infinity."""


class LUTMissing(VdkError):
    """LIC lookup table required but not loaded."""


class MissingOverlay(VdkError):
    """Overlay hatching requested without a hatch mesh."""


class EmptyMask(VdkError):
    """Streamline placement invoked with no hatchable pixels."""


class NonConvergence(UserWarning):
    """Field optimization hit the iteration cap; best iterate returned."""
