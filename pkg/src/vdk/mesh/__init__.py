from vdk.mesh.trimesh import TriMesh, mesh_volume
from vdk.mesh.io import load_mesh
from vdk.mesh.curvature import CurvatureField, estimate_curvature

__all__ = ["TriMesh", "mesh_volume", "load_mesh", "CurvatureField", "estimate_curvature"]
