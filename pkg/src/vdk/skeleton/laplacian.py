"""Cotangent-weighted Laplace operator on triangle meshes."""

import numpy as np
from scipy import sparse

from vdk.errors import NonManifold

# weight clamp keeps the operator usable on sliver triangles
COT_CLAMP = (1e-6, 1e6)


def check_edge_manifold(mesh):
    """Raise :class:`NonManifold` if any edge has more than two faces."""
    counts = mesh.edge_face_counts()
    bad = np.nonzero(counts > 2)[0]
    if bad.size:
        e = mesh.edges[bad[0]]
        raise NonManifold(
            f"edge ({e[0]}, {e[1]}) has {counts[bad[0]]} incident faces"
        )


def cotangent_laplacian(mesh, positions=None):
    """Symmetric cotangent Laplacian of ``mesh`` as a CSC matrix.

    Off-diagonal entries are the clamped half cotangent sums of the angles
    opposite each edge; the diagonal is minus the row sum, so rows sum to
    zero exactly. ``positions`` overrides the vertex positions (same
    connectivity), which contraction uses to re-weight the operator as the
    geometry changes.

    Raises
    ------
    NonManifold
        If an edge has more than two incident faces.
    """
    check_edge_manifold(mesh)
    if positions is None:
        positions = mesh.vertices
    return assemble_cot_laplacian(positions, mesh.faces)


def assemble_cot_laplacian(positions, faces, clamp=COT_CLAMP):
    """Assemble the clamped cotangent Laplacian without manifold checks."""
    n = len(positions)
    v0 = positions[faces[:, 0]]
    v1 = positions[faces[:, 1]]
    v2 = positions[faces[:, 2]]

    rows = []
    cols = []
    vals = []
    corners = ((v0, v1, v2), (v1, v2, v0), (v2, v0, v1))
    opposite = ((1, 2), (2, 0), (0, 1))
    for (c, p, q), (i, j) in zip(corners, opposite):
        e1 = p - c
        e2 = q - c
        cross = np.linalg.norm(np.cross(e1, e2), axis=1)
        cot = np.einsum("ij,ij->i", e1, e2) / np.maximum(cross, 1e-300)
        rows.append(faces[:, i])
        cols.append(faces[:, j])
        vals.append(0.5 * cot)

    r = np.concatenate(rows)
    c = np.concatenate(cols)
    v = np.concatenate(vals)
    w = sparse.coo_matrix((v, (r, c)), shape=(n, n))
    w = (w + w.T).tocsr()
    w.data = np.clip(w.data, clamp[0], clamp[1])
    d = np.asarray(w.sum(axis=1)).ravel()
    lap = w - sparse.diags(d)
    return lap.tocsc()
