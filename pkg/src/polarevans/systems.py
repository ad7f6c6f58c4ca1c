"""Spectral problems: eigenvalue ODEs ``W' = A(x, lam) W`` with limits at +-inf."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DimensionError, ParameterError

__all__ = [
    "SpectralProblem",
    "boussinesq_profile",
    "boussinesq_A",
    "boussinesq_limit",
    "boussinesq_problem",
    "constant_problem",
    "SYSTEMS",
    "make_system",
]


@dataclass(frozen=True)
class SpectralProblem:
    """An asymptotically constant eigenvalue ODE.

    ``k`` is the dimension of the stable subspace of ``A_plus``; the
    unstable subspace of ``A_minus`` then has dimension ``n - k``.  The
    problem is solved on ``[-M, M]``.
    """

    n: int
    k: int
    M: float
    A: Callable[[float, complex], np.ndarray]
    A_minus: Callable[[complex], np.ndarray]
    A_plus: Callable[[complex], np.ndarray]
    params: dict = field(default_factory=dict)
    name: str = "custom"

    def __post_init__(self):
        if not 1 <= self.k <= self.n - 1:
            raise DimensionError(f"need 1 <= k <= n-1, got n={self.n}, k={self.k}")
        if self.M <= 0:
            raise ParameterError("numerical infinity M must be positive")

    def with_M(self, M: float) -> "SpectralProblem":
        return SpectralProblem(
            self.n, self.k, M, self.A, self.A_minus, self.A_plus, dict(self.params), self.name
        )

    def limit(self, side: str, lam) -> np.ndarray:
        return self.A_minus(lam) if side == "minus" else self.A_plus(lam)

    def dim(self, side: str) -> int:
        """Column count of the frame shot from the given side."""
        return self.n - self.k if side == "minus" else self.k


def _check_speed(s):
    if not abs(s) < 1:
        raise ParameterError(f"wave speed must satisfy |s| < 1, got s={s}")


def _sech2_tanh(z):
    # overflow-safe sech^2 and tanh
    e = math.exp(-2 * abs(z))
    sech2 = 4 * e / (1 + e) ** 2
    tanh = math.copysign((1 - e) / (1 + e), z)
    return sech2, tanh


def boussinesq_profile(xi, s):
    """Solitary wave of the good Boussinesq equation and two derivatives.

    ``u = (3/2)(1 - s^2) sech^2(sqrt(1 - s^2) xi / 2)``.

    Returns
    -------
    (u, u_x, u_xx) : tuple of float
    """
    _check_speed(s)
    b = math.sqrt(1 - s * s)
    a = 1.5 * b * b
    S, T = _sech2_tanh(b * xi / 2)
    u = a * S
    u_x = -a * b * S * T
    u_xx = a * b * b * S * (1 - 1.5 * S)
    return u, u_x, u_xx


def _companion(lam, s, u, u_x, u_xx):
    A = np.zeros((4, 4), dtype=complex)
    A[0, 1] = A[1, 2] = A[2, 3] = 1.0
    A[3, 0] = -lam * lam - 2 * u_xx
    A[3, 1] = 2 * lam * s - 4 * u_x
    A[3, 2] = (1 - s * s) - 2 * u
    return A


def boussinesq_A(x, lam, s):
    """Coefficient matrix of the linearised Boussinesq eigenvalue problem."""
    return _companion(lam, s, *boussinesq_profile(x, s))


def boussinesq_limit(lam, s):
    """``A(x, lam)`` as ``|x| -> inf`` (the profile vanishes at both ends)."""
    _check_speed(s)
    return _companion(lam, s, 0.0, 0.0, 0.0)


def boussinesq_problem(s, M=8.0, ends="limit") -> SpectralProblem:
    """Linearised good Boussinesq system about its solitary wave.

    ``ends`` selects the matrices whose invariant subspaces initialise the
    shooting at ``x = -+M``: ``"limit"`` uses the profile-free limit (the
    same matrix on both sides), ``"frozen"`` uses ``A(-+M, lam)`` itself.
    """
    _check_speed(s)
    if ends == "limit":
        A_minus = A_plus = lambda lam: boussinesq_limit(lam, s)  # noqa: E731
    elif ends == "frozen":
        A_minus = lambda lam: boussinesq_A(-M, lam, s)  # noqa: E731
        A_plus = lambda lam: boussinesq_A(M, lam, s)  # noqa: E731
    else:
        raise ParameterError(f"ends must be 'limit' or 'frozen', not {ends!r}")
    return SpectralProblem(
        n=4,
        k=2,
        M=M,
        A=lambda x, lam: boussinesq_A(x, lam, s),
        A_minus=A_minus,
        A_plus=A_plus,
        params={"s": s, "ends": ends},
        name="boussinesq",
    )


def constant_problem(A0, k, lam_dependence=None, M=8.0) -> SpectralProblem:
    """x-independent test problem.

    By default ``A(x, lam) = A0 - lam I``; pass ``lam_dependence`` (a
    callable ``lam -> matrix``) to choose another family.
    """
    A0 = np.asarray(A0, dtype=complex)
    if A0.ndim != 2 or A0.shape[0] != A0.shape[1]:
        raise DimensionError("A0 must be square")
    n = A0.shape[0]
    if lam_dependence is None:
        eye = np.eye(n)

        def family(lam):
            return A0 - lam * eye

    else:
        family = lam_dependence
    return SpectralProblem(
        n=n,
        k=k,
        M=M,
        A=lambda x, lam: family(lam),
        A_minus=family,
        A_plus=family,
        params={},
        name="constant",
    )


def _default_constant(M=8.0):
    return constant_problem(np.diag([-1.0, -2.0, 1.0, 2.0]), 2, M=M)


SYSTEMS = {
    "boussinesq": (boussinesq_problem, {"s": 0.4, "ends": "limit"}),
    "constant": (lambda M=8.0: _default_constant(M), {}),
}


def make_system(name, params=None, M=None) -> SpectralProblem:
    """Build a registered system by name with keyword parameters."""
    if name not in SYSTEMS:
        raise ParameterError(f"unknown system {name!r}; choose from {sorted(SYSTEMS)}")
    factory, defaults = SYSTEMS[name]
    kwargs = dict(defaults)
    for key, value in (params or {}).items():
        if key not in defaults:
            raise ParameterError(f"system {name!r} has no parameter {key!r}")
        kwargs[key] = value
    if M is not None:
        kwargs["M"] = M
    return factory(**kwargs)
