"""Curvature-aligned cross fields.

A cross at a vertex is an unordered pair of perpendicular tangent
directions, stored as one angle theta in [0, pi/2) measured in a fixed
per-vertex tangent frame.  Initialization follows the maximum-curvature
direction; smoothing pulls poorly conditioned vertices toward their
neighbors while anisotropic vertices anchor the field.
"""

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from vdk.errors import NonConvergence
from vdk.mesh.curvature import _rotate_frame_to

HALF_PI = np.pi / 2.0
CONFIDENCE_EPS = 1e-9
GRAD_TOL = 1e-6
MAX_ITERS = 500


@dataclass
class CrossField:
    theta: np.ndarray          # (n,) in [0, pi/2)
    confidence: np.ndarray     # (n,) in [0, 1]
    frame_u: np.ndarray        # (n,3)
    frame_v: np.ndarray        # (n,3)
    converged: bool = True

    def directions(self):
        """World-space unit vector of one cross branch per vertex."""
        c = np.cos(self.theta)[:, None]
        s = np.sin(self.theta)[:, None]
        return c * self.frame_u + s * self.frame_v


def wrap_quarter(theta):
    return np.mod(theta, HALF_PI)


def tangent_frames(normals):
    """Deterministic orthonormal tangent bases for unit normals."""
    n = np.asarray(normals, dtype=np.float64)
    ref = np.zeros_like(n)
    # pick the axis least aligned with the normal
    least = np.argmin(np.abs(n), axis=1)
    ref[np.arange(len(n)), least] = 1.0
    u = np.cross(n, ref)
    u /= np.maximum(np.linalg.norm(u, axis=1, keepdims=True), 1e-30)
    v = np.cross(n, u)
    return u, v


def anisotropy_confidence(kappa1, kappa2):
    num = (kappa1 - kappa2) ** 2
    den = kappa1 ** 2 + kappa2 ** 2 + CONFIDENCE_EPS
    return np.clip(num / den, 0.0, 1.0)


def _edge_transport(frame_u, frame_v, normals, edges):
    """Per-edge angle rho so the smoothness residual is theta_i - theta_j - rho.

    Transport frame i into j's tangent plane by the minimal rotation,
    measure the transported u axis in frame j, and negate: a field equal
    to theta in frame i reads theta + angle in frame j.
    """
    i = edges[:, 0]
    j = edges[:, 1]
    tu, _ = _rotate_frame_to(frame_u[i], frame_v[i], normals[j])
    ang = np.arctan2((tu * frame_v[j]).sum(1), (tu * frame_u[j]).sum(1))
    return -ang


def _energy_and_grad(theta, edges, rho, weights, lam, conf, theta0):
    i = edges[:, 0]
    j = edges[:, 1]
    r = 4.0 * (theta[i] - theta[j] - rho)
    e_smooth = np.sum(weights * (1.0 - np.cos(r)))
    d = 4.0 * weights * np.sin(r)
    grad = np.zeros_like(theta)
    np.add.at(grad, i, d)
    np.add.at(grad, j, -d)
    rd = 4.0 * (theta - theta0)
    e_data = lam * np.sum(conf * (1.0 - np.cos(rd)))
    grad += 4.0 * lam * conf * np.sin(rd)
    return e_smooth + e_data, grad


def optimize_cross_field(mesh, curvature, lam=1.0, fixed=None):
    """Smooth a curvature-initialized cross field over a mesh.

    ``fixed`` optionally maps vertex index -> angle (radians in the vertex
    frame) held constant during optimization.  Warns ``NonConvergence``
    and returns the best iterate if the gradient tolerance is not met
    within the iteration cap.
    """
    normals = mesh.vertex_normals
    u, v = tangent_frames(normals)
    theta0 = wrap_quarter(
        np.arctan2((curvature.dir1 * v).sum(1), (curvature.dir1 * u).sum(1))
    )
    conf = anisotropy_confidence(curvature.kappa1, curvature.kappa2)
    edges = mesh.edges
    rho = _edge_transport(u, v, normals, edges)
    weights = np.ones(len(edges))

    theta_init = theta0.copy()
    free = np.ones(len(theta0), dtype=bool)
    if fixed:
        for idx, ang in fixed.items():
            theta_init[idx] = ang
            free[idx] = False
    free_idx = np.flatnonzero(free)

    def fun(x):
        full = theta_init.copy()
        full[free_idx] = x
        e, g = _energy_and_grad(full, edges, rho, weights, lam, conf, theta0)
        return e, g[free_idx]

    res = minimize(
        fun,
        theta_init[free_idx],
        jac=True,
        method="L-BFGS-B",
        options={"maxiter": MAX_ITERS, "gtol": GRAD_TOL, "ftol": 1e-14},
    )
    theta = theta_init.copy()
    theta[free_idx] = res.x
    _, g = _energy_and_grad(theta, edges, rho, weights, lam, conf, theta0)
    gmax = np.max(np.abs(g[free_idx])) if len(free_idx) else 0.0
    converged = bool(gmax < GRAD_TOL or res.success)
    if not converged:
        warnings.warn(
            f"cross field stopped at grad {gmax:.2e} after {res.nit} iterations",
            NonConvergence,
        )
    return CrossField(
        theta=wrap_quarter(theta),
        confidence=conf,
        frame_u=u,
        frame_v=v,
        converged=converged,
    )


def cross_field_energy(mesh, field, curvature=None, lam=1.0):
    """Energy of a field configuration; data term only with curvature."""
    normals = mesh.vertex_normals
    edges = mesh.edges
    rho = _edge_transport(field.frame_u, field.frame_v, normals, edges)
    weights = np.ones(len(edges))
    if curvature is None:
        conf = np.zeros(len(field.theta))
        theta0 = field.theta
    else:
        conf = field.confidence
        u, v = field.frame_u, field.frame_v
        theta0 = wrap_quarter(
            np.arctan2((curvature.dir1 * v).sum(1), (curvature.dir1 * u).sum(1))
        )
    e, _ = _energy_and_grad(field.theta, edges, rho, weights, lam, conf, theta0)
    return e
