"""Endpoint detection and root selection on contracted meshes.

A vertex of the contracted mesh is an endpoint candidate when all of its
2-ring neighbors lie strictly in one hemisphere around it: writing d for
the normalized mean neighbor offset, every neighbor u must satisfy
``dot(normalize(u - v), d) > 0``.

One-sidedness alone is not sufficient. Any convexly bent piece of the
collapsed centerline (a torus loop, the curve near a junction) puts a
vertex's whole 2-ring strictly inside a tangent half-space, so candidates
are grouped into connected components and a component only counts as an
endpoint when the skeleton around it continues in a single direction:
every pair of outside neighbors, seen from the component's centroid, must
span an acute angle. A terminal cluster has all its continuation on one
side and passes; a loop or mid-branch cluster has continuation on both
sides and fails. Each surviving component is reduced to its most tipward
vertex. The root is the endpoint whose original-surface mean curvature
has the smallest magnitude (vessel trunks are blunter than branch tips).
"""

import json
import logging
import time
from dataclasses import dataclass

import numpy as np

from vdk.errors import EmptyEndpoints, SchemaMismatch
from vdk.skeleton.contraction import contract_to_skeleton

logger = logging.getLogger(__name__)

# offsets below 1e-6 of the contracted bounding-box diagonal carry no
# direction information (collapse noise)
OFFSET_EPS_REL = 1e-6


@dataclass
class SkeletonResult:
    """Endpoint set of one mesh, plus the contraction it came from."""

    endpoints: list
    root: int
    contracted_positions: np.ndarray
    iterations: int
    elapsed: float
    mesh_hash: str = ""

    def __post_init__(self):
        if self.endpoints and self.root not in self.endpoints:
            raise ValueError("root must be one of the endpoints")

    def __eq__(self, other):
        if not isinstance(other, SkeletonResult):
            return NotImplemented
        return (
            list(self.endpoints) == list(other.endpoints)
            and self.root == other.root
            and np.array_equal(self.contracted_positions, other.contracted_positions)
            and self.iterations == other.iterations
            and self.elapsed == other.elapsed
            and self.mesh_hash == other.mesh_hash
        )


def _offset_eps(positions):
    lo = positions.min(axis=0)
    hi = positions.max(axis=0)
    return OFFSET_EPS_REL * float(np.linalg.norm(hi - lo))


def _hemisphere_candidates(mesh, positions, eps):
    flags = np.zeros(len(positions), dtype=bool)
    directions = np.zeros((len(positions), 3))
    for v in range(len(positions)):
        ring = mesh.two_ring(v)
        if not ring.size:
            continue
        offsets = positions[ring] - positions[v]
        lengths = np.linalg.norm(offsets, axis=1)
        keep = lengths > eps
        if not keep.any():
            continue
        mean = offsets.mean(axis=0)
        mnorm = np.linalg.norm(mean)
        if mnorm <= eps:
            continue
        d = mean / mnorm
        units = offsets[keep] / lengths[keep, None]
        if np.all(units @ d > 0.0):
            flags[v] = True
            directions[v] = d
    return flags, directions


def _outside_ring(mesh, comp_set):
    outside = set()
    for v in comp_set:
        for u in mesh.two_ring(v):
            if int(u) not in comp_set:
                outside.add(int(u))
    return sorted(outside)


def _continues_one_way(mesh, comp_set, outside, positions, eps):
    """True when the skeleton beyond the component extends one way only.

    A terminal cluster either swallowed its whole 2-ring in the collapse
    (the outside neighborhood's contracted extent is a small fraction of
    its original extent) or sees its continuation inside a single acute
    cone. A loop or junction-side cluster has continuation on opposite
    sides, which produces an obtuse pair of offsets and rejects it.
    """
    if not outside:
        return True
    members = sorted(comp_set)
    centroid = positions[members].mean(axis=0)
    offsets = positions[outside] - centroid
    lengths = np.linalg.norm(offsets, axis=1)
    orig_centroid = mesh.vertices[members].mean(axis=0)
    orig_extent = np.linalg.norm(mesh.vertices[outside] - orig_centroid, axis=1).max()
    if lengths.max() < 0.25 * orig_extent:
        return True  # neighborhood fully collapsed into the cluster
    units = offsets[lengths > eps] / lengths[lengths > eps, None]
    if not len(units):
        return True
    dots = units @ units.T
    return bool(dots.min() > 0.0)


def _globally_extreme(comp_set, outward, positions, slack):
    """True when no vertex lies ahead of the component along ``outward``.

    "Ahead" means beyond the component's farthest point by more than
    ``slack`` and within a 45 degree cone of the outward direction; a
    candidate with real skeleton in front of it is a mid-branch artifact,
    not a terminal point.
    """
    members = sorted(comp_set)
    proj = positions[members] @ outward
    top = positions[members[int(np.argmax(proj))]]
    rel = positions - top
    ahead = rel @ outward
    dist = np.linalg.norm(rel, axis=1)
    in_cone = ahead > np.maximum(dist * np.cos(np.pi / 4.0), slack)
    in_cone[members] = False
    return not bool(in_cone.any())


def _cluster(mesh, flagged, positions, merge_radius):
    """Group flagged vertices into tip clusters.

    Connected components over the mesh edge graph, then components whose
    contracted centroids coincide within ``merge_radius`` are merged: one
    anatomical tip can shed several graph components, but they all
    collapse onto the same skeletal point.
    """
    flag_set = set(flagged.tolist())
    seen = set()
    clusters = []
    for start in flagged:
        if start in seen:
            continue
        comp = []
        stack = [int(start)]
        seen.add(int(start))
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in mesh.one_ring[v]:
                u = int(u)
                if u in flag_set and u not in seen:
                    seen.add(u)
                    stack.append(u)
        clusters.append(sorted(comp))

    centroids = [positions[c].mean(axis=0) for c in clusters]
    parent = list(range(len(clusters)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(clusters)):
        for j in range(i + 1, len(clusters)):
            if np.linalg.norm(centroids[i] - centroids[j]) < merge_radius:
                parent[find(j)] = find(i)
    merged = {}
    for i, comp in enumerate(clusters):
        merged.setdefault(find(i), []).extend(comp)
    return [sorted(c) for _, c in sorted(merged.items())]


def detect_endpoints(mesh, contracted):
    """Endpoint vertex indices from a finished contraction.

    Returns one index per terminal cluster, sorted ascending; loops yield
    an empty list.
    """
    positions = contracted.positions
    eps = _offset_eps(positions)
    lo = positions.min(axis=0)
    hi = positions.max(axis=0)
    slack = 0.01 * float(np.linalg.norm(hi - lo))
    flags, directions = _hemisphere_candidates(mesh, positions, eps)
    flagged = np.nonzero(flags)[0]
    if not flagged.size:
        return []
    out = []
    for comp in _cluster(mesh, flagged, positions, slack):
        comp = np.asarray(comp)
        comp_set = set(int(v) for v in comp)
        outside = _outside_ring(mesh, comp_set)
        if not _continues_one_way(mesh, comp_set, outside, positions, eps):
            continue
        outward = -directions[comp].mean(axis=0)
        norm = np.linalg.norm(outward)
        if norm > 0:
            outward /= norm
        if not _globally_extreme(comp_set, outward, positions, slack):
            continue
        # representative: the collapsed cluster centroid sits at the
        # skeletal terminus inside the tip, and the anatomical apex is the
        # original vertex farthest from it; argmax ties resolve to the
        # lowest index
        terminus = positions[sorted(comp_set)].mean(axis=0)
        score = np.linalg.norm(mesh.vertices[comp] - terminus, axis=1)
        out.append(int(comp[int(np.argmax(score))]))
    return sorted(out)


def select_root(mesh, curvature, endpoints):
    """Endpoint with the lowest absolute mean curvature on the original mesh."""
    if not len(endpoints):
        raise EmptyEndpoints("cannot select a root from zero endpoints")
    idx = np.asarray(endpoints, dtype=np.int64)
    scores = np.abs(curvature.mean_curvature[idx])
    return int(idx[int(np.argmin(scores))])


def extract_endpoints(mesh, curvature=None, progress=None, should_cancel=None):
    """Contract ``mesh`` and return its :class:`SkeletonResult`.

    ``curvature`` may be passed to reuse an existing estimate; otherwise
    it is computed here for root selection. Meshes with no endpoints
    (closed loops) get ``root = -1``.
    """
    from vdk.mesh.curvature import estimate_curvature

    t0 = time.time()
    state = contract_to_skeleton(mesh, progress=progress, should_cancel=should_cancel)
    endpoints = detect_endpoints(mesh, state)
    if endpoints:
        if curvature is None:
            curvature = estimate_curvature(mesh)
        root = select_root(mesh, curvature, endpoints)
    else:
        logger.info("no endpoints found (closed loop?)")
        root = -1
    return SkeletonResult(
        endpoints=endpoints,
        root=root,
        contracted_positions=state.positions,
        iterations=state.iteration,
        elapsed=time.time() - t0,
        mesh_hash=mesh.content_hash(),
    )


def save_endpoints(result, path):
    """Write ``result`` to ``path`` as JSON (floats kept at full precision)."""
    doc = {
        "meshHash": result.mesh_hash,
        "endpoints": [int(i) for i in result.endpoints],
        "root": int(result.root),
        "contractedPositions": [
            [float(x), float(y), float(z)] for x, y, z in result.contracted_positions
        ],
        "iterations": int(result.iterations),
        "elapsedSeconds": float(result.elapsed),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)


def load_endpoints(path, mesh=None):
    """Read a saved :class:`SkeletonResult`, validating against ``mesh``.

    Raises
    ------
    SchemaMismatch
        On missing fields, out-of-range indices, or (when ``mesh`` is
        given) a content-hash mismatch.
    """
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    for key in ("meshHash", "endpoints", "root", "contractedPositions",
                "iterations", "elapsedSeconds"):
        if key not in doc:
            raise SchemaMismatch(f"endpoint cache missing field '{key}'")
    positions = np.asarray(doc["contractedPositions"], dtype=np.float64)
    if positions.ndim != 2 or (len(positions) and positions.shape[1] != 3):
        raise SchemaMismatch("contractedPositions: expected an Nx3 array")
    endpoints = [int(i) for i in doc["endpoints"]]
    n = len(positions)
    for i in endpoints:
        if not 0 <= i < n:
            raise SchemaMismatch(f"endpoints: index {i} out of range for {n} vertices")
    root = int(doc["root"])
    if endpoints and root not in endpoints:
        raise SchemaMismatch(f"root: {root} is not one of the endpoints")
    if mesh is not None:
        if len(mesh.vertices) != n:
            raise SchemaMismatch(
                f"contractedPositions: {n} entries for a {len(mesh.vertices)}-vertex mesh"
            )
        if mesh.content_hash() != doc["meshHash"]:
            raise SchemaMismatch("meshHash: cache was built from a different mesh")
    return SkeletonResult(
        endpoints=endpoints,
        root=root,
        contracted_positions=positions,
        iterations=int(doc["iterations"]),
        elapsed=float(doc["elapsedSeconds"]),
        mesh_hash=str(doc["meshHash"]),
    )
