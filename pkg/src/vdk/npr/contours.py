"""View-dependent contour extraction.

Silhouette edges are mesh edges whose two faces face opposite ways
relative to the eye; boundary edges of front-facing faces also count.
Edges are chained into polylines at shared vertices (chains stop at
junction vertices), projected, and cut where the depth buffer says
they are occluded.
"""

import numpy as np


def _face_centroids(mesh):
    return mesh.vertices[mesh.faces].mean(axis=1)


def silhouette_edges(mesh, eye):
    """(k,2) vertex index pairs of contour edges for an eye position."""
    v = mesh.vertices
    f = mesh.faces
    fn = np.cross(v[f[:, 1]] - v[f[:, 0]], v[f[:, 2]] - v[f[:, 0]])
    to_eye = np.asarray(eye, dtype=np.float64)[None, :] - _face_centroids(mesh)
    front = np.einsum("ij,ij->i", fn, to_eye) > 0.0

    edges = np.concatenate([f[:, [0, 1]], f[:, [1, 2]], f[:, [2, 0]]], axis=0)
    edges = np.sort(edges, axis=1)
    owner = np.tile(np.arange(len(f)), 3)
    order = np.lexsort((edges[:, 1], edges[:, 0]))
    edges = edges[order]
    owner = owner[order]
    uniq, start, counts = np.unique(edges, axis=0, return_index=True,
                                    return_counts=True)
    out = []
    for e, s, c in zip(uniq, start, counts):
        if c == 2:
            if front[owner[s]] != front[owner[s + 1]]:
                out.append(e)
        elif c == 1:
            if front[owner[s]]:
                out.append(e)
    return np.asarray(out, dtype=np.int64).reshape(-1, 2)


def chain_edges(edges):
    """Join edge soup into vertex-index polylines; junctions split chains."""
    if len(edges) == 0:
        return []
    incident = {}
    for i, (a, b) in enumerate(edges):
        incident.setdefault(int(a), []).append(i)
        incident.setdefault(int(b), []).append(i)
    used = np.zeros(len(edges), dtype=bool)
    chains = []
    # start at junction/terminal vertices first so chains end at junctions
    starts = sorted(v for v, inc in incident.items() if len(inc) != 2)
    for pool in (starts, sorted(incident)):
        for v0 in pool:
            for ei in incident[v0]:
                if used[ei]:
                    continue
                chain = [v0]
                cur = v0
                edge = ei
                while True:
                    used[edge] = True
                    a, b = edges[edge]
                    nxt = int(b) if int(a) == cur else int(a)
                    chain.append(nxt)
                    if len(incident[nxt]) != 2:
                        break
                    e1, e2 = incident[nxt]
                    edge = e2 if e1 == edge else e1
                    if used[edge]:
                        break
                    cur = nxt
                chains.append(chain)
    return chains


def extract_contours(mesh, camera, depth_buffer=None, samples_per_edge=4,
                     depth_bias=3e-3):
    """Visible contour polylines in pixel coordinates.

    Returns a list of (points (k,2), depths (k,)) tuples. With a depth
    buffer, occluded runs are removed and chains split around them.
    """
    edges = silhouette_edges(mesh, camera.position)
    chains = chain_edges(edges)
    out = []
    for chain in chains:
        pts3 = mesh.vertices[chain]
        # densify so occlusion cuts resolve within edges
        dense = [pts3[0]]
        for i in range(len(pts3) - 1):
            for s in range(1, samples_per_edge + 1):
                t = s / samples_per_edge
                dense.append(pts3[i] * (1.0 - t) + pts3[i + 1] * t)
        dense = np.asarray(dense)
        view = camera.to_view(dense)
        viewz = -view[:, 2]
        ok = viewz >= camera.near
        xy, _ = camera.project_view(view)
        depth = camera.linear_depth(viewz)
        if depth_buffer is not None:
            h, w = depth_buffer.shape
            xi = np.clip(np.rint(xy[:, 0]).astype(np.int64), 0, w - 1)
            yi = np.clip(np.rint(xy[:, 1]).astype(np.int64), 0, h - 1)
            ok &= depth <= depth_buffer[yi, xi] + depth_bias
        # emit visible runs
        run_start = None
        for i, good in enumerate(ok):
            if good and run_start is None:
                run_start = i
            elif not good and run_start is not None:
                if i - run_start >= 2:
                    out.append((xy[run_start:i], depth[run_start:i]))
                run_start = None
        if run_start is not None and len(ok) - run_start >= 2:
            out.append((xy[run_start:], depth[run_start:]))
    return out
