"""Perspective camera and its pixel sample mapping.

Pixel (x, y) is sampled at the normalized image point (x / width,
y / height). Sampling at the cell corner rather than the cell center
makes the ray grid of a 2x-resolution render a superset of the original
grid, so doubling the resolution reproduces the original samples exactly
at even coordinates.
"""

from dataclasses import dataclass, field

import numpy as np

from vdk.errors import SchemaError


@dataclass
class Camera:
    """View and projection state, millimetre units.

    Raises :class:`SchemaError` naming the offending field when the
    configuration is unusable.
    """

    position: np.ndarray
    look_at: np.ndarray
    up: np.ndarray
    vfov_deg: float = 45.0
    near: float = 1.0
    far: float = 1000.0
    width: int = 512
    height: int = 512

    right: np.ndarray = field(init=False, repr=False)
    true_up: np.ndarray = field(init=False, repr=False)
    forward: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.position = np.asarray(self.position, dtype=np.float64)
        self.look_at = np.asarray(self.look_at, dtype=np.float64)
        self.up = np.asarray(self.up, dtype=np.float64)
        if not (0.0 < self.near < self.far):
            raise SchemaError("camera.near", f"need 0 < near < far, got {self.near}, {self.far}")
        if not (0.0 < self.vfov_deg < 180.0):
            raise SchemaError("camera.verticalFOV", f"need 0 < fov < 180, got {self.vfov_deg}")
        if self.width < 1 or self.height < 1:
            raise SchemaError("camera.viewport", f"bad viewport {self.width}x{self.height}")
        f = self.look_at - self.position
        fn = np.linalg.norm(f)
        if fn == 0:
            raise SchemaError("camera.lookAt", "lookAt coincides with position")
        f = f / fn
        r = np.cross(f, self.up)
        rn = np.linalg.norm(r)
        if rn < 1e-9:
            raise SchemaError("camera.up", "up is parallel to the view direction")
        r = r / rn
        self.forward = f
        self.right = r
        self.true_up = np.cross(r, f)

    @property
    def aspect(self):
        return self.width / self.height

    @property
    def tan_half_fov(self):
        return float(np.tan(np.deg2rad(self.vfov_deg) / 2.0))

    def to_view(self, points):
        """World points -> view space (camera at origin, looking down -z)."""
        rel = np.asarray(points, dtype=np.float64) - self.position
        basis = np.stack([self.right, self.true_up, -self.forward], axis=1)
        return rel @ basis

    def rotate_to_view(self, vectors):
        """World direction vectors -> view space (rotation only)."""
        basis = np.stack([self.right, self.true_up, -self.forward], axis=1)
        return np.asarray(vectors, dtype=np.float64) @ basis

    def project_view(self, view_points):
        """View-space points -> continuous pixel coordinates and 1/viewz.

        viewz is the distance along the view axis (positive in front of
        the camera). Callers must have clipped to viewz >= near first.
        """
        vp = np.asarray(view_points, dtype=np.float64)
        viewz = -vp[:, 2]
        invw = 1.0 / viewz
        ty = self.tan_half_fov
        tx = ty * self.aspect
        ndc_x = vp[:, 0] * invw / tx
        ndc_y = vp[:, 1] * invw / ty
        px = (ndc_x + 1.0) * 0.5 * self.width
        py = (1.0 - ndc_y) * 0.5 * self.height
        return np.stack([px, py], axis=1), invw

    def ray(self, px, py):
        """World-space unit ray through the sample point of pixel (px, py)."""
        ndc_x = 2.0 * (px / self.width) - 1.0
        ndc_y = 1.0 - 2.0 * (py / self.height)
        ty = self.tan_half_fov
        tx = ty * self.aspect
        d = ndc_x * tx * self.right + ndc_y * ty * self.true_up + self.forward
        return self.position, d / np.linalg.norm(d)

    def linear_depth(self, viewz):
        """Normalized linear depth of a view-axis distance, clamped to [0, 1]."""
        return np.clip((viewz - self.near) / (self.far - self.near), 0.0, 1.0)

    def scaled(self, factor):
        """Same view with the viewport scaled by an integer factor."""
        return Camera(position=self.position, look_at=self.look_at, up=self.up,
                      vfov_deg=self.vfov_deg, near=self.near, far=self.far,
                      width=self.width * factor, height=self.height * factor)
