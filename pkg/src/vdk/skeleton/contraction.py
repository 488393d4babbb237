"""Constrained Laplacian mesh contraction.

Each iteration solves the least-squares system

    [wL * L]        [0     ]
    [      ]  p' =  [      ]        (stacked smoothing + attraction rows)
    [W_H   ]        [W_H  p]

through its normal equations ``(wL^2 L^T L + W_H^2) p' = W_H^2 p`` with a
sparse direct factorization. The Laplacian keeps the original mesh
connectivity but its cotangent weights are recomputed from the current
(progressively collapsed) positions. The attraction weights grow as local
one-ring area shrinks, which slows the collapse near already-thin regions
and drives the surface toward its centerline.
"""

import logging
import time
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import splu

from vdk.errors import NumericalCollapse, SolverFailure
from vdk.skeleton.laplacian import assemble_cot_laplacian, check_edge_manifold

logger = logging.getLogger(__name__)

WL_SCALE = 2.0            # per-iteration growth of the smoothing weight
WH0 = 1.0
VOLUME_STOP = 1e-4        # stop once volume ratio drops below this
RESIDUAL_STOP = 0.01      # reject an iteration whose relative residual exceeds this
MAX_ITERATIONS = 20
MIN_RING_AREA = 1e-12     # mm^2; floors collapsed one-ring areas


@dataclass
class ContractionState:
    """Snapshot of a contraction run (immutable between iterations)."""

    positions: np.ndarray     # current p', (n, 3) mm
    wL: float                 # global smoothing weight
    wH: np.ndarray            # per-vertex attraction weights
    iteration: int
    volume_ratio: float


def _signed_volume(positions, faces):
    return np.einsum(
        "ij,ij->i",
        positions[faces[:, 0]],
        np.cross(positions[faces[:, 1]], positions[faces[:, 2]]),
    ).sum() / 6.0


def _ring_areas(positions, faces, n):
    cross = np.cross(
        positions[faces[:, 1]] - positions[faces[:, 0]],
        positions[faces[:, 2]] - positions[faces[:, 0]],
    )
    fa = 0.5 * np.linalg.norm(cross, axis=1)
    out = np.zeros(n)
    for j in range(3):
        np.add.at(out, faces[:, j], fa)
    return out


def initial_state(mesh):
    """Weights and positions before the first iteration."""
    wL = 1e-3 * float(np.sqrt(mesh.face_areas.mean()))
    n = len(mesh.vertices)
    return ContractionState(
        positions=mesh.vertices.copy(),
        wL=wL,
        wH=np.full(n, WH0),
        iteration=0,
        volume_ratio=1.0,
    )


def contract_once(mesh, state, ring_areas0=None):
    """Run one implicit contraction step and return the next state.

    The incoming state's weights are used for the solve; the returned
    state carries the weights for the following iteration (``wL`` scaled
    by 2, ``wH`` from the one-ring area ratio at the new positions).

    Raises
    ------
    SolverFailure
        If the normal-equations factorization fails.
    NumericalCollapse
        If the solution contains non-finite positions.
    """
    n = len(mesh.vertices)
    if ring_areas0 is None:
        ring_areas0 = _ring_areas(mesh.vertices, mesh.faces, n)
    lap = assemble_cot_laplacian(state.positions, mesh.faces)
    wh2 = state.wH * state.wH
    a = (state.wL * state.wL) * (lap.T @ lap) + sparse.diags(wh2)
    b = wh2[:, None] * state.positions
    try:
        lu = splu(a.tocsc())
        new_pos = lu.solve(b)
    except (RuntimeError, ValueError) as exc:
        raise SolverFailure(f"contraction solve failed: {exc}") from exc
    if not np.isfinite(new_pos).all():
        raise NumericalCollapse("contracted positions are not finite")

    residual = np.linalg.norm(a @ new_pos - b) / max(np.linalg.norm(b), 1e-300)
    ring = np.maximum(_ring_areas(new_pos, mesh.faces, n), MIN_RING_AREA)
    new_wh = WH0 * np.sqrt(ring_areas0 / ring)
    vol0 = _signed_volume(mesh.vertices, mesh.faces)
    ratio = _signed_volume(new_pos, mesh.faces) / vol0 if vol0 != 0 else 0.0
    next_state = ContractionState(
        positions=new_pos,
        wL=state.wL * WL_SCALE,
        wH=new_wh,
        iteration=state.iteration + 1,
        volume_ratio=float(ratio),
    )
    return next_state, float(residual)


def contract_to_skeleton(mesh, progress=None, should_cancel=None):
    """Contract ``mesh`` until its volume is near zero.

    Stops when the volume ratio drops below 1e-4, when the relative
    residual of a solve exceeds 1% (that iteration is discarded), or
    after 20 iterations (logged as a warning). Returns the last accepted
    :class:`ContractionState`.

    ``progress(state)`` is called after each accepted iteration;
    ``should_cancel()`` returning True stops the run early.
    """
    check_edge_manifold(mesh)
    t0 = time.time()
    ring0 = _ring_areas(mesh.vertices, mesh.faces, len(mesh.vertices))
    state = initial_state(mesh)
    while state.iteration < MAX_ITERATIONS:
        if should_cancel is not None and should_cancel():
            logger.info("contraction cancelled at iteration %d", state.iteration)
            break
        candidate, residual = contract_once(mesh, state, ring_areas0=ring0)
        if residual > RESIDUAL_STOP:
            logger.info(
                "stopping: relative residual %.3g exceeds %.0f%% at iteration %d",
                residual, RESIDUAL_STOP * 100.0, candidate.iteration,
            )
            break
        if candidate.volume_ratio > state.volume_ratio * (1.0 + 1e-9):
            logger.warning(
                "stopping: volume ratio rose %.3g -> %.3g at iteration %d",
                state.volume_ratio, candidate.volume_ratio, candidate.iteration,
            )
            break
        state = candidate
        logger.debug(
            "iteration %d: volume ratio %.3g, residual %.3g",
            state.iteration, state.volume_ratio, residual,
        )
        if progress is not None:
            progress(state)
        if state.volume_ratio < VOLUME_STOP:
            break
    else:
        logger.warning(
            "iteration cap (%d) reached at volume ratio %.3g",
            MAX_ITERATIONS, state.volume_ratio,
        )
    logger.info(
        "contraction finished: %d iterations, volume ratio %.3g, %.1fs",
        state.iteration, state.volume_ratio, time.time() - t0,
    )
    return state
