"""Analytic continuation of invariant-subspace bases along a path in lambda.

Kato's ODE ``r' = [P', P] r`` is discretised with forward Euler, using
the finite increment of the eigenprojection between consecutive path
points in place of ``P'``.  After each step the frame is projected back
onto the range of the new projection, which keeps long sweeps from
drifting out of the subspace without spoiling first-order accuracy.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ProjectionGapError
from .linalg import DEFAULT_GAP_TOL, invariant_subspace, thin_qr

__all__ = [
    "AnalyticFrame",
    "eigenprojection",
    "kato_step",
    "kato_continue",
    "initial_frame",
    "continue_frames",
    "side_half",
]

MAX_PROJECTION_GAP = 0.5
DEFAULT_STEP_GAP = 0.05
MAX_BISECTIONS = 16


@dataclass(frozen=True)
class AnalyticFrame:
    lam: complex
    W: np.ndarray
    P: np.ndarray


def side_half(side: str) -> str:
    """Which half of the spectrum is continued on each side."""
    if side == "minus":
        return "unstable"
    if side == "plus":
        return "stable"
    raise ValueError(f"side must be 'minus' or 'plus', not {side!r}")


def eigenprojection(A, half="stable", gap_tol=DEFAULT_GAP_TOL):
    """Spectral projection ``R (L* R)^{-1} L*`` onto the stable/unstable subspace."""
    frame = invariant_subspace(A, half, gap_tol)
    return frame.basis @ frame.left


def kato_step(W, P0, P1, reproject=True):
    """One Euler step of Kato's ODE from projection ``P0`` to ``P1``."""
    dP = P1 - P0
    gap = np.linalg.norm(dP)
    if gap >= MAX_PROJECTION_GAP:
        raise ProjectionGapError(
            f"projection jump {gap:.3g} >= {MAX_PROJECTION_GAP}; refine the path"
        )
    W1 = W + (dP @ (P0 @ W) - P0 @ (dP @ W))
    if reproject:
        W1 = P1 @ W1
    return W1


def kato_continue(projections: Sequence[np.ndarray], R0, reproject=True):
    """Continue the frame ``R0`` (spanning Range P_0) along ``projections``.

    Returns the list of frames, one per projection, starting with ``R0``.
    """
    frames = [np.asarray(R0)]
    for P0, P1 in zip(projections[:-1], projections[1:]):
        frames.append(kato_step(frames[-1], P0, P1, reproject))
    return frames


def initial_frame(A, half, gap_tol=DEFAULT_GAP_TOL):
    """Orthonormal basis of the invariant subspace with the QR phase convention."""
    Q, _ = thin_qr(invariant_subspace(A, half, gap_tol).basis)
    return Q


def _refined(points, refine):
    points = np.asarray(points, dtype=complex)
    if refine <= 1 or len(points) < 2:
        return points
    t = np.arange(refine) / refine
    fine = [p0 + t * (p1 - p0) for p0, p1 in zip(points[:-1], points[1:])]
    return np.concatenate(fine + [points[-1:]])


def _segment(problem, side, half, gap_tol, lam0, P0, lam1, P1, max_gap, depth):
    """Intermediate (lam, P) pairs strictly after lam0 up to and including lam1."""
    if np.linalg.norm(P1 - P0) < max_gap or depth == 0:
        return [(lam1, P1)]
    mid = (lam0 + lam1) / 2
    Pm = eigenprojection(problem.limit(side, mid), half, gap_tol)
    return _segment(problem, side, half, gap_tol, lam0, P0, mid, Pm, max_gap, depth - 1) + _segment(
        problem, side, half, gap_tol, mid, Pm, lam1, P1, max_gap, depth - 1
    )


def continue_frames(
    problem,
    points,
    side,
    refine=1,
    max_gap=DEFAULT_STEP_GAP,
    reproject=True,
    gap_tol=DEFAULT_GAP_TOL,
    start=None,
):
    """Analytic frames for one side of ``problem`` at every point of a path.

    Each segment is split into ``refine`` equal Euler steps, and further
    bisected while consecutive projections differ by ``max_gap`` or more
    in Frobenius norm.  Frames are returned only at the original points.
    ``start`` optionally supplies the frame at the first point (for
    resuming a sweep); otherwise it is the QR-normalised Schur basis.
    """
    half = side_half(side)
    fine = _refined(points, refine)
    is_kept = np.zeros(len(fine), dtype=bool)
    is_kept[:: max(refine, 1)] = True
    P = eigenprojection(problem.limit(side, fine[0]), half, gap_tol)
    if start is None:
        W = initial_frame(problem.limit(side, fine[0]), half, gap_tol)
    else:
        W = np.asarray(start)
    out = [AnalyticFrame(complex(fine[0]), W, P)]
    for i in range(1, len(fine)):
        P_next = eigenprojection(problem.limit(side, fine[i]), half, gap_tol)
        steps = _segment(problem, side, half, gap_tol, fine[i - 1], P, fine[i], P_next, max_gap, MAX_BISECTIONS)
        for _, Ps in steps:
            W = kato_step(W, P, Ps, reproject)
            P = Ps
        if is_kept[i]:
            out.append(AnalyticFrame(complex(fine[i]), W, P))
    return out
