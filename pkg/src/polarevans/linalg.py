"""Dense complex linear algebra for small systems.

Everything here works on plain ``numpy`` arrays.  Matrices are complex
(``complex128``) unless the input is real and the operation preserves
realness, in which case real arrays are returned; keeping real data real
matters for Evans functions evaluated on the real axis.

Multi-indices for exterior products are strictly increasing tuples in
lexicographic order, i.e. the order produced by
``itertools.combinations(range(n), k)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np
import scipy.linalg

from .errors import (
    DimensionError,
    EigenFailure,
    ProjectionConditionError,
    RankError,
    SpectralSeparationFailure,
)

__all__ = [
    "SubspaceFrame",
    "WedgeVector",
    "hermitian_split",
    "thin_qr",
    "det",
    "generalized_inverse",
    "invariant_subspace",
    "compound_lift",
    "compound_nonzeros",
    "minors_vector",
    "wedge_pair",
    "stiefel_error",
    "multi_indices",
]

DEFAULT_GAP_TOL = 1e-8
RANK_TOL = 1e-13
CONDITION_LIMIT = 1e12


def _square(M, name="M"):
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {M.shape}")
    return M


@dataclass(frozen=True)
class SubspaceFrame:
    """Orthonormal basis of an invariant subspace together with its dual.

    Attributes
    ----------
    basis : (n, m) array
        Orthonormal columns spanning the subspace.
    left : (m, n) array
        Rows spanning the matching left-invariant subspace, normalised so
        that ``left @ basis == I``.
    trace_restriction : complex
        Sum of the eigenvalues belonging to the subspace.
    eigenvalues : (m,) array
        Those eigenvalues themselves.
    """

    basis: np.ndarray
    left: np.ndarray
    trace_restriction: complex
    eigenvalues: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def projection(self) -> np.ndarray:
        return self.basis @ self.left


@dataclass(frozen=True)
class WedgeVector:
    """Coordinates of a k-vector in the basis e_I, I lexicographic."""

    n: int
    k: int
    coords: np.ndarray

    def __post_init__(self):
        if len(self.coords) != comb(self.n, self.k):
            raise DimensionError(
                f"expected {comb(self.n, self.k)} coordinates for ({self.n}, {self.k}), "
                f"got {len(self.coords)}"
            )


def hermitian_split(M):
    """Return the Hermitian and skew-Hermitian parts ``(H, K)`` of ``M``."""
    M = _square(M)
    Mh = M.conj().T
    return (M + Mh) / 2, (M - Mh) / 2


def thin_qr(W):
    """Reduced QR factorisation with a real, nonnegative diagonal in ``R``.

    Raises
    ------
    RankError
        If ``W`` is numerically rank deficient.
    """
    W = np.asarray(W)
    if W.ndim != 2 or W.shape[0] < W.shape[1]:
        raise DimensionError(f"thin_qr needs a tall matrix, got shape {W.shape}")
    Q, R = np.linalg.qr(W, mode="reduced")
    d = np.diag(R)
    scale = np.linalg.norm(W)
    mag = np.abs(d)
    if W.shape[1] and (scale == 0 or mag.min() <= RANK_TOL * scale):
        raise RankError("matrix is numerically rank deficient")
    phase = np.where(mag > 0, d / np.where(mag > 0, mag, 1), 1)
    Q = Q * phase
    R = phase.conj()[:, None] * R
    if np.iscomplexobj(R):
        R[np.diag_indices_from(R)] = mag
    return Q, R


def det(M):
    M = _square(M)
    return np.linalg.det(M)


def generalized_inverse(omega):
    """``(omega* omega)^{-1} omega*``, computed through a QR factorisation."""
    Q, R = thin_qr(omega)
    return scipy.linalg.solve_triangular(R, Q.conj().T)


def _schur_basis(A, half):
    sort = "lhp" if half == "stable" else "rhp"
    output = "real" if not np.iscomplexobj(A) else "complex"
    try:
        T, Z, sdim = scipy.linalg.schur(A, output=output, sort=sort)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigenFailure(str(exc)) from exc
    return T, Z, sdim


def _realify(A):
    A = np.asarray(A)
    if np.iscomplexobj(A) and not np.any(A.imag):
        return A.real.copy()
    return A


def invariant_subspace(A, half="stable", gap_tol=DEFAULT_GAP_TOL) -> SubspaceFrame:
    """Stable (Re < 0) or unstable (Re > 0) invariant subspace of ``A``.

    The basis comes from an ordered Schur decomposition; the left
    subspace from the ordered Schur decomposition of ``A*``.  Real input
    yields a real frame.

    Raises
    ------
    SpectralSeparationFailure
        If some eigenvalue satisfies ``|Re mu| < gap_tol``.
    """
    if half not in ("stable", "unstable"):
        raise ValueError(f"half must be 'stable' or 'unstable', not {half!r}")
    A = _realify(_square(A, "A"))
    if not np.all(np.isfinite(A)):
        raise EigenFailure("matrix has non-finite entries")

    T, Z, m = _schur_basis(A, half)
    eigs = np.linalg.eigvals(T) if not np.iscomplexobj(T) else np.diag(T)
    close = np.abs(eigs.real) < gap_tol
    if np.any(close):
        raise SpectralSeparationFailure(
            f"eigenvalue(s) {eigs[close]} within {gap_tol:g} of the imaginary axis"
        )
    R = Z[:, :m]
    sel = eigs[eigs.real < 0] if half == "stable" else eigs[eigs.real > 0]

    _, ZL, mL = _schur_basis(A.conj().T, half)
    if mL != m:
        raise EigenFailure("left and right invariant subspaces differ in dimension")
    L = ZL[:, :m]
    pairing = L.conj().T @ R
    if m and np.linalg.cond(pairing) > CONDITION_LIMIT:
        raise ProjectionConditionError("left/right subspace pairing is ill-conditioned")
    left = np.linalg.solve(pairing, L.conj().T) if m else L.conj().T
    trace = complex(np.trace(T[:m, :m]))
    return SubspaceFrame(basis=R, left=left, trace_restriction=trace, eigenvalues=sel)


def multi_indices(n, k):
    """Lexicographically ordered k-subsets of ``range(n)``."""
    return list(combinations(range(n), k))


@lru_cache(maxsize=None)
def _lift_tables(n, k):
    idx = multi_indices(n, k)
    pos = {I: p for p, I in enumerate(idx)}
    rows, cols, src_r, src_c, signs = [], [], [], [], []
    for p, I in enumerate(idx):
        members = set(I)
        for r in I:
            for j in range(n):
                if j in members:
                    continue
                J = tuple(sorted((members - {r}) | {j}))
                lo, hi = min(r, j), max(r, j)
                between = sum(1 for i in I if lo < i < hi)
                rows.append(p)
                cols.append(pos[J])
                src_r.append(r)
                src_c.append(j)
                signs.append(-1.0 if between % 2 else 1.0)
    diag_sel = np.zeros((len(idx), n))
    for p, I in enumerate(idx):
        diag_sel[p, list(I)] = 1.0
    return (
        np.array(rows, dtype=int),
        np.array(cols, dtype=int),
        np.array(src_r, dtype=int),
        np.array(src_c, dtype=int),
        np.array(signs),
        diag_sel,
    )


def compound_lift(A, k):
    """Infinitesimal k-th compound (exterior-power derivation) of ``A``.

    If ``W' = A W`` then ``minors_vector(W)' = compound_lift(A, k) @ minors_vector(W)``.
    """
    A = _square(A, "A")
    n = A.shape[0]
    if not 1 <= k <= n:
        raise DimensionError(f"need 1 <= k <= n, got k={k}, n={n}")
    rows, cols, sr, sc, signs, diag_sel = _lift_tables(n, k)
    N = comb(n, k)
    out = np.zeros((N, N), dtype=np.result_type(A.dtype, float))
    # (rows, cols) pairs are unique, so plain fancy assignment suffices
    out[rows, cols] = signs * A[sr, sc]
    out[np.arange(N), np.arange(N)] = diag_sel @ np.diag(A)
    return out


def compound_nonzeros(n, k):
    """Number of structurally nonzero entries of a generic k-th compound lift."""
    rows = _lift_tables(n, k)[0]
    return len(rows) + comb(n, k)


@lru_cache(maxsize=None)
def _minor_rows(n, k):
    return np.array(multi_indices(n, k), dtype=int).reshape(-1, k)


def minors_vector(W) -> WedgeVector:
    """All maximal minors of the tall matrix ``W`` as a :class:`WedgeVector`."""
    W = np.asarray(W)
    n, k = W.shape
    if n < k:
        raise DimensionError(f"minors_vector needs n >= k, got {W.shape}")
    if k == 0:
        return WedgeVector(n, 0, np.ones(1, dtype=W.dtype))
    sub = W[_minor_rows(n, k)]
    return WedgeVector(n, k, np.linalg.det(sub))


@lru_cache(maxsize=None)
def _pairing_tables(n, k):
    idx = multi_indices(n, k)
    comp_pos = {I: p for p, I in enumerate(multi_indices(n, n - k))}
    partner = np.empty(len(idx), dtype=int)
    signs = np.empty(len(idx))
    for p, I in enumerate(idx):
        Ic = tuple(i for i in range(n) if i not in I)
        partner[p] = comp_pos[Ic]
        # parity of the shuffle (I, Ic): count inversions
        inv = sum(1 for a in I for b in Ic if a > b)
        signs[p] = -1.0 if inv % 2 else 1.0
    return partner, signs


def wedge_pair(u, v):
    """Top-degree pairing ``u ^ v`` of a k-vector and an (n-k)-vector.

    ``wedge_pair(minors_vector(Wp), minors_vector(Wm)) == det([Wp | Wm])``.
    """
    if not isinstance(u, WedgeVector) or not isinstance(v, WedgeVector):
        raise DimensionError("wedge_pair expects WedgeVector arguments")
    if u.n != v.n or u.k + v.k != u.n:
        raise DimensionError(
            f"degrees ({u.n},{u.k}) and ({v.n},{v.k}) do not pair to a top form"
        )
    partner, signs = _pairing_tables(u.n, u.k)
    return np.sum(signs * u.coords * v.coords[partner])


def stiefel_error(omega) -> float:
    """Squared Frobenius distance ``||omega* omega - I||_F^2``."""
    omega = np.asarray(omega)
    G = omega.conj().T @ omega
    G[np.diag_indices_from(G)] -= 1
    return float(np.sum(np.abs(G) ** 2))
