"""Principal curvature estimation from per-face normal variation.

Per face, the second fundamental form is fit by least squares to the
finite differences of vertex normals along the three edges, expressed in
the face tangent frame. The per-face forms are accumulated into vertices
with Voronoi-style corner-area weights and diagonalized into principal
curvatures and directions.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

logger = logging.getLogger(__name__)


@dataclass
class CurvatureField:
    """Per-vertex principal curvatures (1/mm) and unit directions.

    ``kappa1 >= kappa2`` everywhere; ``dir1``/``dir2`` are mutually
    orthogonal unit tangents (orthogonal to the vertex normal).
    ``isolated`` lists vertices with no incident face, whose curvature is
    zeroed.
    """

    kappa1: np.ndarray
    kappa2: np.ndarray
    dir1: np.ndarray
    dir2: np.ndarray
    mean_curvature: np.ndarray
    isolated: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))


def _corner_areas(verts, faces, face_areas):
    """Voronoi corner areas with the obtuse-triangle correction."""
    e0 = verts[faces[:, 2]] - verts[faces[:, 1]]
    e1 = verts[faces[:, 0]] - verts[faces[:, 2]]
    e2 = verts[faces[:, 1]] - verts[faces[:, 0]]
    l2 = np.stack(
        [(e0 * e0).sum(1), (e1 * e1).sum(1), (e2 * e2).sum(1)], axis=1
    )
    ew = np.stack(
        [
            l2[:, 0] * (l2[:, 1] + l2[:, 2] - l2[:, 0]),
            l2[:, 1] * (l2[:, 2] + l2[:, 0] - l2[:, 1]),
            l2[:, 2] * (l2[:, 0] + l2[:, 1] - l2[:, 2]),
        ],
        axis=1,
    )
    area = face_areas
    ca = np.empty_like(ew)
    with np.errstate(divide="ignore", invalid="ignore"):
        s = ew.sum(axis=1)
        scale = np.where(s != 0, 0.5 * area / np.where(s != 0, s, 1.0), 0.0)
        ca[:, 0] = scale * (ew[:, 1] + ew[:, 2])
        ca[:, 1] = scale * (ew[:, 2] + ew[:, 0])
        ca[:, 2] = scale * (ew[:, 0] + ew[:, 1])
        # obtuse at corner j: circumcenter outside, clamp to half/quarter split
        d01 = (e0 * e1).sum(1)
        d02 = (e0 * e2).sum(1)
        d12 = (e1 * e2).sum(1)
        m0 = ew[:, 0] <= 0
        ca[m0, 1] = (-0.25 * l2[:, 2] * area / np.where(d02 != 0, d02, 1.0))[m0]
        ca[m0, 2] = (-0.25 * l2[:, 1] * area / np.where(d01 != 0, d01, 1.0))[m0]
        ca[m0, 0] = area[m0] - ca[m0, 1] - ca[m0, 2]
        m1 = ew[:, 1] <= 0
        ca[m1, 2] = (-0.25 * l2[:, 0] * area / np.where(d01 != 0, d01, 1.0))[m1]
        ca[m1, 0] = (-0.25 * l2[:, 2] * area / np.where(d12 != 0, d12, 1.0))[m1]
        ca[m1, 1] = area[m1] - ca[m1, 2] - ca[m1, 0]
        m2 = ew[:, 2] <= 0
        ca[m2, 0] = (-0.25 * l2[:, 1] * area / np.where(d12 != 0, d12, 1.0))[m2]
        ca[m2, 1] = (-0.25 * l2[:, 0] * area / np.where(d02 != 0, d02, 1.0))[m2]
        ca[m2, 2] = area[m2] - ca[m2, 0] - ca[m2, 1]
    return ca


def _rotate_frame_to(u, v, new_norm):
    """Minimally rotate orthonormal tangent pairs so u x v aligns with new_norm."""
    old_norm = np.cross(u, v)
    ndot = (old_norm * new_norm).sum(axis=1, keepdims=True)
    flip = ndot[:, 0] <= -1.0 + 1e-12
    perp = new_norm - ndot * old_norm
    dperp = (old_norm + new_norm) / np.where(np.abs(1.0 + ndot) < 1e-300, 1.0, 1.0 + ndot)
    nu = u - dperp * (u * perp).sum(axis=1, keepdims=True)
    nv = v - dperp * (v * perp).sum(axis=1, keepdims=True)
    nu[flip] = -u[flip]
    nv[flip] = -v[flip]
    return nu, nv


def estimate_curvature(mesh):
    """Estimate a :class:`CurvatureField` for ``mesh``.

    Vertices without incident faces get zero curvature and are reported in
    ``isolated``.
    """
    verts = mesh.vertices
    faces = mesh.faces
    normals = mesh.vertex_normals
    n = len(verts)
    if not faces.size:
        z = np.zeros(n)
        d = np.zeros((n, 3))
        return CurvatureField(z, z.copy(), d, d.copy(), z.copy(),
                              isolated=np.arange(n, dtype=np.int64))

    # initial orthonormal tangent frame per vertex
    ax = np.argmin(np.abs(normals), axis=1)
    helper = np.zeros((n, 3))
    helper[np.arange(n), ax] = 1.0
    up = np.cross(helper, normals)
    up /= np.maximum(np.linalg.norm(up, axis=1, keepdims=True), 1e-300)
    vp = np.cross(normals, up)

    e = np.stack(
        [
            verts[faces[:, 2]] - verts[faces[:, 1]],
            verts[faces[:, 0]] - verts[faces[:, 2]],
            verts[faces[:, 1]] - verts[faces[:, 0]],
        ],
        axis=1,
    )  # (m, 3 edges, 3)
    t = e[:, 0] / np.linalg.norm(e[:, 0], axis=1, keepdims=True)
    fn = np.cross(e[:, 0], e[:, 1])
    fn /= np.linalg.norm(fn, axis=1, keepdims=True)
    b = np.cross(fn, t)

    # least-squares fit of the 2x2 form (ku, kuv, kv) per face
    m = np.zeros((len(faces), 3))
    w = np.zeros((len(faces), 3, 3))
    for j in range(3):
        u_ = (e[:, j] * t).sum(1)
        v_ = (e[:, j] * b).sum(1)
        w[:, 0, 0] += u_ * u_
        w[:, 0, 1] += u_ * v_
        w[:, 2, 2] += v_ * v_
        dn = normals[faces[:, (j + 2) % 3]] - normals[faces[:, (j + 1) % 3]]
        dnu = (dn * t).sum(1)
        dnv = (dn * b).sum(1)
        m[:, 0] += dnu * u_
        m[:, 1] += dnu * v_ + dnv * u_
        m[:, 2] += dnv * v_
    w[:, 1, 1] = w[:, 0, 0] + w[:, 2, 2]
    w[:, 1, 2] = w[:, 0, 1]
    w[:, 1, 0] = w[:, 0, 1]
    w[:, 2, 1] = w[:, 0, 1]
    try:
        sol = np.linalg.solve(w, m[:, :, None])[:, :, 0]
    except np.linalg.LinAlgError:
        sol = np.stack([np.linalg.lstsq(w[i], m[i], rcond=None)[0]
                        for i in range(len(faces))])
    sol[~np.isfinite(sol).all(axis=1)] = 0.0

    ca = _corner_areas(verts, faces, mesh.face_areas)
    point_area = np.zeros(n)
    for j in range(3):
        np.add.at(point_area, faces[:, j], ca[:, j])

    acc = np.zeros((n, 3))  # (ku, kuv, kv) in each vertex's init frame
    for j in range(3):
        vj = faces[:, j]
        ru, rv = _rotate_frame_to(up[vj], vp[vj], fn)
        u1 = (ru * t).sum(1)
        v1 = (ru * b).sum(1)
        u2 = (rv * t).sum(1)
        v2 = (rv * b).sum(1)
        ku = sol[:, 0] * u1 * u1 + sol[:, 1] * 2.0 * u1 * v1 + sol[:, 2] * v1 * v1
        kuv = sol[:, 0] * u1 * u2 + sol[:, 1] * (u1 * v2 + u2 * v1) + sol[:, 2] * v1 * v2
        kv = sol[:, 0] * u2 * u2 + sol[:, 1] * 2.0 * u2 * v2 + sol[:, 2] * v2 * v2
        wt = np.where(point_area[vj] > 0, ca[:, j] / np.where(point_area[vj] > 0, point_area[vj], 1.0), 0.0)
        np.add.at(acc, vj, np.stack([ku, kuv, kv], axis=1) * wt[:, None])

    ku, kuv, kv = acc[:, 0], acc[:, 1], acc[:, 2]
    tr = ku + kv
    det = ku * kv - kuv * kuv
    disc = np.sqrt(np.maximum(tr * tr / 4.0 - det, 0.0))
    kappa1 = tr / 2.0 + disc
    kappa2 = tr / 2.0 - disc
    # eigenvector for kappa1 of [[ku, kuv], [kuv, kv]]
    vx = np.where(np.abs(kuv) > 1e-30, kappa1 - kv, 1.0)
    vy = np.where(np.abs(kuv) > 1e-30, kuv, 0.0)
    # for diagonal forms pick the axis carrying the larger value
    diag = np.abs(kuv) <= 1e-30
    swap = diag & (kv > ku)
    vx[swap], vy[swap] = 0.0, 1.0
    norm = np.sqrt(vx * vx + vy * vy)
    vx /= norm
    vy /= norm
    dir1 = up * vx[:, None] + vp * vy[:, None]
    dir2 = np.cross(normals, dir1)

    isolated = np.nonzero(point_area == 0)[0]
    if isolated.size:
        logger.warning("%d isolated vertices: curvature zeroed", isolated.size)
        kappa1[isolated] = 0.0
        kappa2[isolated] = 0.0
    return CurvatureField(
        kappa1=kappa1,
        kappa2=kappa2,
        dir1=dir1,
        dir2=dir2,
        mean_curvature=0.5 * (kappa1 + kappa2),
        isolated=isolated.astype(np.int64),
    )
