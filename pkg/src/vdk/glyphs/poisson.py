"""Poisson-disk sampling on mesh surfaces.

Dart throwing: darts land on area-weighted random triangles at uniform
barycentric positions and are accepted when no earlier accepted sample
lies within the disk radius. A cell hash at the disk radius keeps the
rejection test O(1). Fully deterministic for a given seed.
"""

import numpy as np


def _cell_of(p, radius):
    return (int(np.floor(p[0] / radius)),
            int(np.floor(p[1] / radius)),
            int(np.floor(p[2] / radius)))


def poisson_surface_samples(mesh, radius, seed=0, darts_per_sample=30):
    """Sample surface points at least ``radius`` apart.

    Returns (positions (k,3), normals (k,3)). Normals are interpolated
    vertex normals at the sample's barycentric coordinates.
    """
    verts = mesh.vertices
    faces = mesh.faces
    v0 = verts[faces[:, 0]]
    v1 = verts[faces[:, 1]]
    v2 = verts[faces[:, 2]]
    areas = 0.5 * np.linalg.norm(np.cross(v1 - v0, v2 - v0), axis=1)
    total = areas.sum()
    if total <= 0:
        return np.zeros((0, 3)), np.zeros((0, 3))
    # expected sample budget for the disk radius, with headroom
    target = max(int(total / (np.pi * radius * radius * 0.25)), 4)
    n_darts = darts_per_sample * target

    rng = np.random.default_rng(seed)
    tri = rng.choice(len(faces), size=n_darts, p=areas / total)
    r1 = np.sqrt(rng.random(n_darts))
    r2 = rng.random(n_darts)
    w0 = 1.0 - r1
    w1 = r1 * (1.0 - r2)
    w2 = r1 * r2
    points = (w0[:, None] * v0[tri] + w1[:, None] * v1[tri]
              + w2[:, None] * v2[tri])
    vn = mesh.vertex_normals
    normals = (w0[:, None] * vn[faces[tri, 0]]
               + w1[:, None] * vn[faces[tri, 1]]
               + w2[:, None] * vn[faces[tri, 2]])

    accepted = []
    normals_out = []
    grid = {}
    r2min = radius * radius
    for i in range(n_darts):
        p = points[i]
        cx, cy, cz = _cell_of(p, radius)
        ok = True
        for gx in range(cx - 1, cx + 2):
            for gy in range(cy - 1, cy + 2):
                for gz in range(cz - 1, cz + 2):
                    for j in grid.get((gx, gy, gz), ()):
                        d = accepted[j] - p
                        if d @ d < r2min:
                            ok = False
                            break
                    if not ok:
                        break
                if not ok:
                    break
            if not ok:
                break
        if not ok:
            continue
        grid.setdefault((cx, cy, cz), []).append(len(accepted))
        accepted.append(p)
        nrm = normals[i]
        length = np.linalg.norm(nrm)
        normals_out.append(nrm / length if length > 1e-12 else nrm)
    if not accepted:
        return np.zeros((0, 3)), np.zeros((0, 3))
    return np.asarray(accepted), np.asarray(normals_out)
