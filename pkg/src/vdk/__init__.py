"""Deterministic CPU rendering toolkit for distance-encoding vessel
visualizations, plus Laplacian-contraction endpoint detection.

All geometry is in millimeters. Renders are reproducible: a scene file plus
a seed fully determines the output image bytes.
"""

from vdk.mesh.trimesh import TriMesh
from vdk.mesh.io import load_mesh
from vdk.mesh.curvature import CurvatureField, estimate_curvature

__version__ = "0.1.0"

__all__ = ["TriMesh", "load_mesh", "CurvatureField", "estimate_curvature", "__version__"]
