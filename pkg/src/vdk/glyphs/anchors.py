"""Supporting lines and supporting anchors.

Supporting lines drop a vertical segment from a selected surface point
to its orthogonal foot on the shadow plane, tying the point to its
shadow. Supporting anchors connect selected points radially to a
view-centered open cylinder and mark the contact with an arc lying in
the contact point's cross-section (constant camera depth along the
arc).
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from vdk.errors import (AnchorOutsideCylinderRange, EmptyEndpoints,
                        SelectionBelowPlane)

ARC_HALF_ANGLE = np.deg2rad(15.0)
ARC_SEGMENTS = 24
THINNING_BIN_DEG = 10.0


@dataclass
class AnchorSet:
    """Deduplicated anchor vertices with their world positions."""

    anchor_vertices: np.ndarray   # (k,) int
    world_positions: np.ndarray   # (k,3)

    def __post_init__(self):
        idx = np.asarray(self.anchor_vertices, dtype=np.int64).ravel()
        pos = np.asarray(self.world_positions, dtype=np.float64).reshape(-1, 3)
        if len(idx) != len(pos):
            raise ValueError("index and position counts differ")
        _, first = np.unique(idx, return_index=True)
        first.sort()
        self.anchor_vertices = idx[first]
        self.world_positions = pos[first]

    @classmethod
    def from_mesh(cls, mesh, vertex_indices):
        idx = np.asarray(vertex_indices, dtype=np.int64)
        if len(idx) == 0:
            raise EmptyEndpoints("no anchor vertices")
        if idx.min() < 0 or idx.max() >= len(mesh.vertices):
            raise IndexError("anchor vertex out of range")
        return cls(idx, mesh.vertices[idx])


def supporting_lines(points, plane_point, plane_normal):
    """Vertical drop segments (point, foot) onto the shadow plane.

    Raises SelectionBelowPlane when a selection lies under the plane.
    """
    points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    plane_point = np.asarray(plane_point, dtype=np.float64)
    n = np.asarray(plane_normal, dtype=np.float64)
    n = n / np.linalg.norm(n)
    signed = (points - plane_point) @ n
    if (signed < 0).any():
        bad = int(np.argmin(signed))
        raise SelectionBelowPlane(
            f"selection {bad} is {-signed[bad]:.3g} mm below the plane")
    feet = points - signed[:, None] * n[None, :]
    return [(points[i], feet[i]) for i in range(len(points))]


@dataclass
class CylinderProbe:
    """Open cylinder centered on the scene, axis along the view."""

    center: np.ndarray
    axis: np.ndarray      # unit, towards the camera
    radius: float
    half_length: float

    @classmethod
    def fit(cls, scene_points, camera, radius_scale=0.6):
        pts = np.asarray(scene_points, dtype=np.float64)
        center = 0.5 * (pts.min(axis=0) + pts.max(axis=0))
        r_sphere = float(np.linalg.norm(pts - center, axis=1).max())
        axis = camera.position - center
        axis = axis / np.linalg.norm(axis)
        along = (pts - center) @ axis
        half = float(max(-along.min(), along.max(), 1e-6))
        return cls(center=center, axis=axis, radius=radius_scale * r_sphere,
                   half_length=half)

    def frame(self):
        helper = np.zeros(3)
        helper[int(np.argmin(np.abs(self.axis)))] = 1.0
        u = np.cross(self.axis, helper)
        u /= np.linalg.norm(u)
        return u, np.cross(self.axis, u)


@dataclass
class Anchor:
    world: np.ndarray        # selected surface point
    contact: np.ndarray      # closest point on the cylinder surface
    arc: np.ndarray          # (s,3) polyline on the cross-section circle
    angle: float             # azimuth around the cylinder axis
    clamped: bool


def _closest_on_cylinder(cyl, p, u, v):
    rel = p - cyl.center
    h = float(rel @ cyl.axis)
    clamped = abs(h) > cyl.half_length
    h = float(np.clip(h, -cyl.half_length, cyl.half_length))
    radial = rel - (rel @ cyl.axis) * cyl.axis
    norm = np.linalg.norm(radial)
    if norm < 1e-12:
        radial = u
        norm = 1.0
    contact = cyl.center + h * cyl.axis + (radial / norm) * cyl.radius
    angle = float(np.arctan2(radial @ v, radial @ u))
    return contact, angle, h, clamped


def supporting_anchors(anchor_set, cyl, camera):
    """Connector and arc geometry for each anchor, thinned by azimuth.

    Anchors are binned by angle around the cylinder axis; each bin
    keeps only the anchor nearest to the camera so dense selections do
    not pile arcs on top of each other.
    """
    u, v = cyl.frame()
    raw = []
    for p in anchor_set.world_positions:
        contact, angle, h, clamped = _closest_on_cylinder(cyl, p, u, v)
        if clamped:
            warnings.warn("anchor beyond cylinder cap; clamped to rim",
                          AnchorOutsideCylinderRange)
        ts = np.linspace(angle - ARC_HALF_ANGLE, angle + ARC_HALF_ANGLE,
                         ARC_SEGMENTS + 1)
        ring = (cyl.center[None, :] + h * cyl.axis[None, :]
                + cyl.radius * (np.cos(ts)[:, None] * u[None, :]
                                + np.sin(ts)[:, None] * v[None, :]))
        raw.append(Anchor(world=p, contact=contact, arc=ring,
                          angle=angle, clamped=clamped))

    bins = {}
    for a in raw:
        key = int(np.floor(np.rad2deg(a.angle) / THINNING_BIN_DEG))
        dist = float(np.linalg.norm(a.world - camera.position))
        if key not in bins or dist < bins[key][0]:
            bins[key] = (dist, a)
    kept = [a for _, a in sorted(bins.values(), key=lambda t: t[1].angle)]
    return kept
