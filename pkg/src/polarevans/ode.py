"""Runge-Kutta-Fehlberg 4(5) integration of complex array-valued ODEs.

The fifth-order solution is propagated (local extrapolation) and the
embedded fourth-order solution supplies the error estimate.  States may
be arrays of any shape; the right-hand side receives and returns arrays
of the same shape as ``y0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import NonFiniteState, ParameterError, StepSizeUnderflow

__all__ = ["IntegrationResult", "integrate_adaptive", "integrate_fixed"]

# Fehlberg (1969) coefficients
_C = np.array([0.0, 1 / 4, 3 / 8, 12 / 13, 1.0, 1 / 2])
_A = (
    (),
    (1 / 4,),
    (3 / 32, 9 / 32),
    (1932 / 2197, -7200 / 2197, 7296 / 2197),
    (439 / 216, -8.0, 3680 / 513, -845 / 4104),
    (-8 / 27, 2.0, -3544 / 2565, 1859 / 4104, -11 / 40),
)
_B5 = np.array([16 / 135, 0.0, 6656 / 12825, 28561 / 56430, -9 / 50, 2 / 55])
_B4 = np.array([25 / 216, 0.0, 1408 / 2565, 2197 / 4104, -1 / 5, 0.0])
_E = _B5 - _B4

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 5.0
UNDERFLOW = 1e-14
MAX_STEPS = 2_000_000


@dataclass
class IntegrationResult:
    """Outcome of one integration.

    ``mesh_points`` counts accepted steps plus one (the initial point).
    ``xs``/``ys`` hold the accepted mesh and states when the trajectory was
    requested, otherwise they are ``None``.
    """

    final_state: np.ndarray
    mesh_points: int
    rejected_steps: int
    min_step: float
    xs: np.ndarray | None = field(default=None, repr=False)
    ys: np.ndarray | None = field(default=None, repr=False)


def _stages(rhs, x, y, h):
    k = [None] * 6
    k[0] = rhs(x, y)
    for i in range(1, 6):
        incr = sum(a * kj for a, kj in zip(_A[i], k))
        k[i] = rhs(x + _C[i] * h, y + h * incr)
    return k


def _as_real(a):
    return a.view(np.float64) if np.iscomplexobj(a) else a


def integrate_adaptive(
    rhs: Callable[[float, np.ndarray], np.ndarray],
    x0: float,
    x1: float,
    y0,
    abs_tol: float = 1e-8,
    rel_tol: float = 1e-6,
    keep_trajectory: bool = False,
    first_step: float | None = None,
) -> IntegrationResult:
    """Integrate ``y' = rhs(x, y)`` from ``x0`` to ``x1`` with step control.

    A step is accepted when, over all real components of the flattened
    state (real and imaginary parts counted separately),
    ``|err| <= abs_tol + rel_tol * max(|y_old|, |y_new|)``.

    Raises
    ------
    StepSizeUnderflow
        When the controller asks for a step below ``1e-14 * |x1 - x0|``.
    NonFiniteState
        When ``rhs`` returns NaN or Inf.
    """
    if x0 == x1:
        raise ParameterError("integration interval is empty")
    if abs_tol <= 0 or rel_tol <= 0:
        raise ParameterError("tolerances must be positive")

    y = np.array(y0, dtype=np.result_type(np.asarray(y0).dtype, float), copy=True)
    span = x1 - x0
    direction = 1.0 if span > 0 else -1.0
    h = direction * (abs(first_step) if first_step else abs(span) / 100)
    h_floor = UNDERFLOW * abs(span)

    x = x0
    accepted, rejected = 0, 0
    min_step = abs(h)
    xs, ys = ([x0], [y.copy()]) if keep_trajectory else (None, None)

    for _ in range(MAX_STEPS):
        if direction * (x + h - x1) > 0:
            h = x1 - x
        k = _stages(rhs, x, y, h)
        for ki in k:
            if not np.all(np.isfinite(ki)):
                raise NonFiniteState(f"right-hand side is not finite near x={x:g}")
        y_new = y + h * sum(b * ki for b, ki in zip(_B5, k) if b)
        err = h * sum(e * ki for e, ki in zip(_E, k) if e)

        scale = abs_tol + rel_tol * np.maximum(np.abs(_as_real(y)), np.abs(_as_real(y_new)))
        ratio = np.max(np.abs(_as_real(err)) / scale) if err.size else 0.0

        if ratio <= 1.0:
            x_next = x + h
            last = direction * (x_next - x1) >= 0
            x = x1 if last else x_next
            y = y_new
            accepted += 1
            min_step = min(min_step, abs(h))
            if keep_trajectory:
                xs.append(x)
                ys.append(y.copy())
            if last:
                break
            factor = MAX_FACTOR if ratio == 0 else min(MAX_FACTOR, max(MIN_FACTOR, SAFETY * ratio ** -0.2))
            h *= factor
        else:
            rejected += 1
            h *= max(MIN_FACTOR, SAFETY * ratio ** -0.2)
            if abs(h) < h_floor:
                raise StepSizeUnderflow(
                    f"step size {abs(h):.3g} fell below {h_floor:.3g} at x={x:g}"
                )
    else:
        raise StepSizeUnderflow(f"exceeded {MAX_STEPS} steps before reaching x={x1:g}")

    result = IntegrationResult(
        final_state=y,
        mesh_points=accepted + 1,
        rejected_steps=rejected,
        min_step=min_step,
    )
    if keep_trajectory:
        result.xs = np.array(xs)
        result.ys = np.array(ys)
    return result


def integrate_fixed(rhs, x0, x1, y0, steps: int) -> np.ndarray:
    """Propagate the fifth-order Fehlberg solution with ``steps`` equal steps.

    Used for order-of-accuracy checks; no error control is applied.
    """
    y = np.array(y0, dtype=np.result_type(np.asarray(y0).dtype, float), copy=True)
    h = (x1 - x0) / steps
    for i in range(steps):
        x = x0 + i * h
        k = _stages(rhs, x, y, h)
        y = y + h * sum(b * ki for b, ki in zip(_B5, k) if b)
    return y
