"""Indexed triangle meshes with precomputed derived data.

All coordinates are millimeters. A ``TriMesh`` is immutable after
construction and safe to share across threads; operations that change
geometry return a new mesh.
"""

import hashlib
import logging

import numpy as np

from vdk.errors import DegenerateGeometry

logger = logging.getLogger(__name__)

MIN_FACE_AREA = 1e-12  # mm^2; faces below this are rejected at load


class TriMesh:
    """Triangle mesh with per-vertex normals, areas, and adjacency.

    Parameters
    ----------
    vertices : (n, 3) float array
        Vertex positions in mm. Order is preserved from the source file.
    faces : (m, 3) int array
        Vertex index triples. Every index must be < n and every face must
        have area >= ``MIN_FACE_AREA``.

    Attributes
    ----------
    vertices, faces : ndarray
    vertex_normals : (n, 3) ndarray
        Unit area-weighted average of incident face normals.
    face_normals : (m, 3) ndarray
    face_areas : (m,) ndarray, mm^2
    one_ring : list of ndarray
        Per-vertex sorted adjacent vertex indices (symmetric).
    bounding_box : (2, 3) ndarray
        Min and max corner.
    """

    def __init__(self, vertices, faces, validate=True):
        self.vertices = np.ascontiguousarray(vertices, dtype=np.float64)
        self.faces = np.ascontiguousarray(faces, dtype=np.int64)
        if self.vertices.ndim != 2 or self.vertices.shape[1] != 3:
            raise ValueError("vertices must be (n, 3)")
        if self.faces.size and (self.faces.ndim != 2 or self.faces.shape[1] != 3):
            raise ValueError("faces must be (m, 3)")
        if self.faces.size == 0:
            self.faces = self.faces.reshape(0, 3)
        if validate and self.faces.size:
            if self.faces.min() < 0 or self.faces.max() >= len(self.vertices):
                raise ValueError("face index out of range")

        cross = self._face_cross()
        self.face_areas = 0.5 * np.linalg.norm(cross, axis=1)
        if validate and self.faces.size and self.face_areas.min() < MIN_FACE_AREA:
            bad = int(np.argmin(self.face_areas))
            raise DegenerateGeometry(
                f"face {bad} has area {self.face_areas[bad]:.3e} mm^2"
            )
        with np.errstate(invalid="ignore", divide="ignore"):
            self.face_normals = cross / np.maximum(
                np.linalg.norm(cross, axis=1, keepdims=True), 1e-300
            )
        self.vertex_normals = self._vertex_normals(cross)
        self.one_ring = self._one_ring()
        if len(self.vertices):
            self.bounding_box = np.stack(
                [self.vertices.min(axis=0), self.vertices.max(axis=0)]
            )
        else:
            self.bounding_box = np.zeros((2, 3))
        self._hash = None
        self._edges = None

    def _face_cross(self):
        v = self.vertices
        f = self.faces
        if not f.size:
            return np.zeros((0, 3))
        return np.cross(v[f[:, 1]] - v[f[:, 0]], v[f[:, 2]] - v[f[:, 0]])

    def _vertex_normals(self, cross):
        # Area-weighted: the cross product already carries twice the face
        # area, so accumulating it unnormalized does the weighting.
        acc = np.zeros_like(self.vertices)
        for k in range(3):
            np.add.at(acc, self.faces[:, k], cross)
        norms = np.linalg.norm(acc, axis=1, keepdims=True)
        ok = norms[:, 0] > 1e-300
        out = np.zeros_like(acc)
        out[ok] = acc[ok] / norms[ok]
        out[~ok, 2] = 1.0  # isolated or mutually cancelling: arbitrary unit
        return out

    def _one_ring(self):
        n = len(self.vertices)
        if not self.faces.size:
            return [np.zeros(0, dtype=np.int64) for _ in range(n)]
        f = self.faces
        a = np.concatenate([f[:, 0], f[:, 1], f[:, 2], f[:, 1], f[:, 2], f[:, 0]])
        b = np.concatenate([f[:, 1], f[:, 2], f[:, 0], f[:, 0], f[:, 1], f[:, 2]])
        order = np.lexsort((b, a))
        a, b = a[order], b[order]
        keep = np.ones(len(a), dtype=bool)
        keep[1:] = (a[1:] != a[:-1]) | (b[1:] != b[:-1])
        a, b = a[keep], b[keep]
        splits = np.searchsorted(a, np.arange(n + 1))
        return [b[splits[i] : splits[i + 1]] for i in range(n)]

    @property
    def edges(self):
        """Unique undirected edges as a sorted (e, 2) array."""
        if self._edges is None:
            f = self.faces
            e = np.concatenate([f[:, [0, 1]], f[:, [1, 2]], f[:, [2, 0]]])
            e.sort(axis=1)
            self._edges = np.unique(e, axis=0)
        return self._edges

    def edge_face_counts(self):
        """Count of incident faces per undirected edge, aligned with ``edges``."""
        f = self.faces
        e = np.concatenate([f[:, [0, 1]], f[:, [1, 2]], f[:, [2, 0]]])
        e.sort(axis=1)
        uniq, counts = np.unique(e, axis=0, return_counts=True)
        # self.edges is np.unique of the same array, so the order matches
        return counts

    def is_closed(self):
        """True when every edge has exactly two incident faces."""
        if not self.faces.size:
            return False
        return bool(np.all(self.edge_face_counts() == 2))

    def two_ring(self, v):
        """Indices within graph distance 2 of vertex ``v`` (excluding ``v``)."""
        ring1 = self.one_ring[v]
        out = set(ring1.tolist())
        for u in ring1:
            out.update(self.one_ring[u].tolist())
        out.discard(v)
        return np.array(sorted(out), dtype=np.int64)

    def content_hash(self):
        """SHA-256 over canonicalized vertex and face bytes."""
        if self._hash is None:
            h = hashlib.sha256()
            h.update(np.ascontiguousarray(self.vertices, dtype="<f8").tobytes())
            h.update(np.ascontiguousarray(self.faces, dtype="<i8").tobytes())
            self._hash = h.hexdigest()
        return self._hash

    def transformed(self, matrix):
        """Apply a 4x4 homogeneous transform, returning a new mesh."""
        m = np.asarray(matrix, dtype=np.float64)
        v = self.vertices @ m[:3, :3].T + m[:3, 3]
        return TriMesh(v, self.faces, validate=False)

    def __repr__(self):
        return f"TriMesh({len(self.vertices)} vertices, {len(self.faces)} faces)"


def mesh_volume(mesh, warn_open=True):
    """Signed enclosed volume in mm^3 via the divergence theorem.

    Sum of signed tetrahedra (origin, v0, v1, v2) / 6 over faces. Positive
    for outward-oriented closed meshes. Open meshes are not rejected; the
    returned value is then only a signed estimate.

    Returns
    -------
    volume : float
    closed : bool
        False flags the estimate of an open mesh.
    """
    v = mesh.vertices
    f = mesh.faces
    if not f.size:
        return 0.0, False
    a, b, c = v[f[:, 0]], v[f[:, 1]], v[f[:, 2]]
    vol = float(np.einsum("ij,ij->i", a, np.cross(b, c)).sum() / 6.0)
    closed = mesh.is_closed()
    if not closed and warn_open:
        logger.warning("mesh_volume on open mesh: value is a signed estimate")
    return vol, closed
