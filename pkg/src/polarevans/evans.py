"""Evans function evaluation by polar-coordinate shooting.

Each side carries an orthonormal frame ``omega`` (the angle) and a
rescaled complex radius ``gamma``.  The frame is integrated from ``x = -M``
(unstable subspace of ``A_-``) or ``x = +M`` (stable subspace of ``A_+``)
to ``x = 0`` together with

    gamma' = (trace(omega° A omega) - mu_inf) gamma,

where ``mu_inf`` is the trace of the limiting matrix restricted to the
subspace, held fixed along the integration, and ``omega°`` is ``omega*``
or the generalized inverse depending on the frame equation.  Then

    D(lam) = gamma_plus * gamma_minus * det([omega_plus | omega_minus]).

The exterior-product method integrates the minors of the same frames in
``C(n, m)`` dimensions with the same exponent ``mu_inf``, so both methods
return the same function up to integration error.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import simpson

from .errors import (
    InitError,
    ParameterError,
    QuadratureError,
    RankError,
    StiefelDrift,
)
from .linalg import (
    compound_lift,
    minors_vector,
    stiefel_error,
    thin_qr,
    wedge_pair,
    WedgeVector,
)
from .ode import IntegrationResult, integrate_adaptive

__all__ = [
    "VARIANTS",
    "SchemeConfig",
    "SideInit",
    "PolarState",
    "EvansSample",
    "init_side",
    "omega_rhs",
    "gamma_rhs",
    "integrate_polar",
    "shoot_side",
    "evans_polar",
    "evans_exterior",
    "evaluate",
    "radial_quadrature",
]

VARIANTS = ("drury", "davey", "damped_drury", "damped_davey", "bridges_reich", "exterior")
_DAVEY_FAMILY = ("davey", "damped_davey")
_UNDAMPED = ("drury", "davey", "exterior")
INIT_RESIDUAL_TOL = 1e-6


@dataclass(frozen=True)
class SchemeConfig:
    """Frame equation, damping constant and integrator settings.

    ``drift_action`` decides what happens when the frame at ``x = 0`` is
    further than ``drift_tol`` (squared Frobenius) from orthonormal:
    ``"raise"``, ``"warn"`` or ``"ignore"``.
    """

    variant: str = "drury"
    c: float = 0.0
    abs_tol: float = 1e-8
    rel_tol: float = 1e-6
    drift_tol: float = 1e-6
    drift_action: str = "raise"

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ParameterError(f"unknown variant {self.variant!r}; choose from {VARIANTS}")
        if self.c < 0:
            raise ParameterError("damping constant must be nonnegative")
        if self.c and self.variant in _UNDAMPED:
            raise ParameterError(f"variant {self.variant!r} takes no damping constant")
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ParameterError("tolerances must be positive")
        if self.drift_action not in ("raise", "warn", "ignore"):
            raise ParameterError(f"bad drift_action {self.drift_action!r}")

    @property
    def label(self) -> str:
        name = self.variant.replace("_", "-")
        return f"{name}:{self.c:g}" if self.variant not in _UNDAMPED else name

    def with_tolerances(self, abs_tol, rel_tol) -> "SchemeConfig":
        return SchemeConfig(self.variant, self.c, abs_tol, rel_tol, self.drift_tol, self.drift_action)


@dataclass(frozen=True)
class SideInit:
    side: str
    W_frame: np.ndarray
    omega_inf: np.ndarray
    alpha_inf: np.ndarray
    gamma_inf: complex
    mu_inf: complex


@dataclass(frozen=True)
class PolarState:
    omega: np.ndarray
    gamma_tilde: complex


@dataclass(frozen=True)
class EvansSample:
    lam: complex
    D: complex
    mesh_minus: int
    mesh_plus: int
    stiefel_minus: float
    stiefel_plus: float
    scheme: SchemeConfig = field(repr=False, default=None)


def _start(problem, side):
    if side == "minus":
        return -problem.M
    if side == "plus":
        return problem.M
    raise ValueError(f"side must be 'minus' or 'plus', not {side!r}")


def init_side(problem, lam, side, W_frame, gauge=None) -> SideInit:
    """Polar coordinates of the analytic frame ``W_frame`` at numerical infinity.

    ``gauge`` optionally post-multiplies the orthonormal frame by a
    unitary matrix; the represented exterior product does not change.
    """
    _start(problem, side)
    W = np.asarray(W_frame)
    m = problem.dim(side)
    if W.shape != (problem.n, m):
        raise InitError(f"{side} frame must have shape {(problem.n, m)}, got {W.shape}")
    try:
        omega, _ = thin_qr(W)
    except RankError as exc:
        raise InitError(f"{side} frame is rank deficient") from exc
    if gauge is not None:
        omega = omega @ np.asarray(gauge)

    A_inf = problem.limit(side, lam)
    AO = A_inf @ omega
    residual = np.linalg.norm(AO - omega @ (omega.conj().T @ AO))
    if residual > INIT_RESIDUAL_TOL * max(np.linalg.norm(A_inf), 1.0):
        raise InitError(f"{side} frame does not span an invariant subspace (residual {residual:.2e})")

    restricted = np.linalg.eigvals(omega.conj().T @ AO).real
    if np.any(restricted <= 0 if side == "minus" else restricted >= 0):
        half = "unstable" if side == "minus" else "stable"
        raise InitError(f"{side} frame does not span the {half} subspace")

    alpha = omega.conj().T @ W
    if np.linalg.cond(alpha) > 1e12:
        raise InitError(f"{side} connector matrix is singular")
    return SideInit(
        side=side,
        W_frame=W,
        omega_inf=omega,
        alpha_inf=alpha,
        gamma_inf=complex(np.linalg.det(alpha)),
        mu_inf=complex(np.trace(omega.conj().T @ AO)),
    )


def _flow(variant, A, omega, c, direction):
    """Frame derivative and the trace entering the radial equation."""
    AO = A @ omega
    OhAO = omega.conj().T @ AO
    if variant in _DAVEY_FAMILY:
        G = omega.conj().T @ omega
        try:
            coeff = np.linalg.solve(G, OhAO)
        except np.linalg.LinAlgError as exc:
            raise RankError("frame lost rank in the generalized-inverse flow") from exc
        d_omega = AO - omega @ coeff
        tr = np.trace(coeff)
    elif variant == "bridges_reich":
        # (M - M*) omega with M = (I - omega omega*) A
        d_omega = AO - omega @ OhAO
        AhO = A.conj().T @ omega
        d_omega = d_omega - (AhO - AhO @ (omega.conj().T @ omega))
        tr = np.trace(OhAO)
    else:
        d_omega = AO - omega @ OhAO
        tr = np.trace(OhAO)
    if c:
        G = omega.conj().T @ omega
        d_omega = d_omega + (direction * c) * (omega - omega @ G)
    return d_omega, tr


def omega_rhs(variant, A, omega, c=0.0, direction=1):
    """Right-hand side of the frame equation for ``variant``.

    The damping term ``c omega (I - omega* omega)`` is multiplied by
    ``direction`` (+1 integrating towards increasing x, -1 towards
    decreasing x) so that it attracts towards the Stiefel manifold in the
    direction of integration.
    """
    if variant == "exterior" or variant not in VARIANTS:
        raise ParameterError(f"no frame equation for variant {variant!r}")
    return _flow(variant, np.asarray(A), np.asarray(omega), c, direction)[0]


def gamma_rhs(variant, A, omega, mu_inf, gamma):
    """``(trace(omega° A omega) - mu_inf) * gamma``."""
    if variant == "exterior" or variant not in VARIANTS:
        raise ParameterError(f"no radial equation for variant {variant!r}")
    tr = _flow(variant, np.asarray(A), np.asarray(omega), 0.0, 1)[1]
    return (tr - mu_inf) * gamma


def integrate_polar(
    problem,
    lam,
    side,
    config: SchemeConfig,
    omega0,
    gamma0,
    mu_inf,
    x_end=0.0,
    keep_trajectory=False,
):
    """Integrate the stacked state ``(omega, gamma)`` from ``-+M`` to ``x_end``.

    Returns ``(PolarState, IntegrationResult)``; with ``keep_trajectory``
    the result carries the accepted mesh and stacked states.
    """
    x0 = _start(problem, side)
    direction = 1.0 if x_end > x0 else -1.0
    n, m = np.shape(omega0)
    nm = n * m
    variant, c = config.variant, config.c
    A_of = problem.A

    def rhs(x, y):
        omega = y[:nm].reshape(n, m)
        d_omega, tr = _flow(variant, A_of(x, lam), omega, c, direction)
        out = np.empty_like(y)
        out[:nm] = d_omega.ravel()
        out[nm] = (tr - mu_inf) * y[nm]
        return out

    y0 = np.empty(nm + 1, dtype=complex)
    y0[:nm] = np.asarray(omega0).ravel()
    y0[nm] = gamma0
    res = integrate_adaptive(
        rhs, x0, x_end, y0, config.abs_tol, config.rel_tol, keep_trajectory=keep_trajectory
    )
    yf = res.final_state
    return PolarState(yf[:nm].reshape(n, m).copy(), complex(yf[nm])), res


def _check_drift(config, side, err):
    if err <= config.drift_tol or config.drift_action == "ignore":
        return
    msg = f"{side} frame drifted off the Stiefel manifold: error {err:.3e} > {config.drift_tol:.1e}"
    if config.drift_action == "raise":
        raise StiefelDrift(msg)
    warnings.warn(msg, RuntimeWarning, stacklevel=3)


def shoot_side(problem, lam, side, config: SchemeConfig, init: SideInit, keep_trajectory=False):
    """Shoot one side to ``x = 0``.

    Returns ``(PolarState, IntegrationResult, stiefel_error_at_0)``.
    """
    state, res = integrate_polar(
        problem, lam, side, config, init.omega_inf, init.gamma_inf, init.mu_inf,
        keep_trajectory=keep_trajectory,
    )
    err = stiefel_error(state.omega)
    _check_drift(config, side, err)
    return state, res, err


def _frames(frames):
    if len(frames) != 2:
        raise ValueError("frames must be a pair (W_minus, W_plus)")
    W_minus, W_plus = (getattr(f, "W", f) for f in frames)
    return np.asarray(W_minus), np.asarray(W_plus)


def evans_polar(problem, lam, config: SchemeConfig, frames, gauges=(None, None)) -> EvansSample:
    """Evans function at ``lam`` by the polar-coordinate method."""
    if config.variant == "exterior":
        raise ParameterError("use evans_exterior for the exterior-product method")
    W_minus, W_plus = _frames(frames)
    if W_minus.shape[1] + W_plus.shape[1] != problem.n:
        raise InitError("frame column counts must sum to n")
    init_m = init_side(problem, lam, "minus", W_minus, gauges[0])
    init_p = init_side(problem, lam, "plus", W_plus, gauges[1])
    sm, rm, em = shoot_side(problem, lam, "minus", config, init_m)
    sp, rp, ep = shoot_side(problem, lam, "plus", config, init_p)
    D = sp.gamma_tilde * sm.gamma_tilde * np.linalg.det(np.hstack([sp.omega, sm.omega]))
    return EvansSample(complex(lam), complex(D), rm.mesh_points, rp.mesh_points, em, ep, config)


def _shoot_exterior(problem, lam, side, W, config):
    m = W.shape[1]
    init = init_side(problem, lam, side, W)
    y0 = minors_vector(W).coords.astype(complex)
    shift = init.mu_inf * np.eye(len(y0))
    A_of = problem.A

    def rhs(x, y):
        return (compound_lift(A_of(x, lam), m) - shift) @ y

    res = integrate_adaptive(rhs, _start(problem, side), 0.0, y0, config.abs_tol, config.rel_tol)
    return WedgeVector(problem.n, m, res.final_state), res


def evans_exterior(problem, lam, frames, config: SchemeConfig | None = None) -> EvansSample:
    """Evans function at ``lam`` by integrating the lifted (minor) system."""
    config = config or SchemeConfig("exterior")
    W_minus, W_plus = _frames(frames)
    if W_minus.shape[1] + W_plus.shape[1] != problem.n:
        raise InitError("frame column counts must sum to n")
    ym, rm = _shoot_exterior(problem, lam, "minus", W_minus, config)
    yp, rp = _shoot_exterior(problem, lam, "plus", W_plus, config)
    D = wedge_pair(yp, ym)
    return EvansSample(complex(lam), complex(D), rm.mesh_points, rp.mesh_points, 0.0, 0.0, config)


def evaluate(problem, lam, config: SchemeConfig, frames) -> EvansSample:
    """Dispatch to the polar or the exterior-product method."""
    if config.variant == "exterior":
        return evans_exterior(problem, lam, frames, config)
    return evans_polar(problem, lam, config, frames)


def radial_quadrature(xs, omegas, problem, lam, side, init: SideInit) -> complex:
    """Rescaled radius at the end of a sampled frame trajectory, by quadrature.

    ``xs`` is the mesh in integration order (starting at ``-+M``) and
    ``omegas`` the frames on it.  The integral of
    ``trace(omega* A omega) - mu_inf`` is taken with composite Simpson in
    the direction of integration, so the plus side picks up the sign
    flip automatically.
    """
    xs = np.asarray(xs, dtype=float)
    if len(xs) < 3:
        raise QuadratureError("need at least three samples for Simpson's rule")
    vals = np.array(
        [np.trace(w.conj().T @ problem.A(x, lam) @ w) for x, w in zip(xs, omegas)]
    ) - init.mu_inf
    return complex(init.gamma_inf * np.exp(simpson(vals, x=xs)))
