import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import crandn
from polarevans.errors import DimensionError, RankError, SpectralSeparationFailure
from polarevans.linalg import (
    WedgeVector,
    compound_lift,
    compound_nonzeros,
    det,
    generalized_inverse,
    hermitian_split,
    invariant_subspace,
    minors_vector,
    multi_indices,
    stiefel_error,
    thin_qr,
    wedge_pair,
)
from polarevans.systems import boussinesq_A, boussinesq_limit, boussinesq_profile


def cofactor_det(M):
    if M.shape == (1, 1):
        return M[0, 0]
    return sum(
        (-1) ** j * M[0, j] * cofactor_det(np.delete(np.delete(M, 0, 0), j, 1))
        for j in range(M.shape[0])
    )


# hermitian_split

def test_hermitian_split_identity():
    H, K = hermitian_split(np.eye(3))
    assert np.array_equal(H, np.eye(3)) and not K.any()


def test_hermitian_split_skew():
    H, K = hermitian_split(1j * np.eye(3))
    assert not H.any() and np.allclose(K, 1j * np.eye(3))


def test_hermitian_split_recomposes(rng):
    M = crandn(rng, 4, 4)
    H, K = hermitian_split(M)
    assert np.abs(H + K - M).max() <= 1e-15
    assert np.array_equal(H, H.conj().T) and np.array_equal(K, -K.conj().T)


def test_hermitian_split_rejects_rectangular():
    with pytest.raises(DimensionError):
        hermitian_split(np.ones((2, 3)))


# thin_qr

def test_thin_qr_standard_columns():
    W = np.eye(5)[:, :3]
    Q, R = thin_qr(W)
    assert np.allclose(Q, W) and np.allclose(R, np.eye(3))


def test_thin_qr_scaling():
    Q, R = thin_qr(np.array([[3.0], [4.0], [0.0], [0.0]]))
    assert np.allclose(Q[:, 0], [0.6, 0.8, 0, 0]) and np.isclose(R[0, 0], 5)


def test_thin_qr_random(rng):
    W = crandn(rng, 6, 3)
    Q, R = thin_qr(W)
    assert np.linalg.norm(Q.conj().T @ Q - np.eye(3)) < 1e-12
    assert np.linalg.norm(Q @ R - W) < 1e-12 * np.linalg.norm(W)
    d = np.diag(R)
    assert np.all(d.real >= 0) and np.all(d.imag == 0)
    assert np.allclose(np.tril(R, -1), 0)


def test_thin_qr_rank_deficient():
    W = np.array([[1.0, 2.0], [1.0, 2.0], [0.0, 0.0]])
    with pytest.raises(RankError):
        thin_qr(W)


# det

def test_det_trivial():
    assert det(np.eye(3)) == 1
    assert np.isclose(det(np.diag([2, 3j])), 6j)


def test_det_vs_cofactor(rng):
    for _ in range(20):
        M = crandn(rng, 3, 3)
        ref = cofactor_det(M)
        assert abs(det(M) - ref) <= 1e-13 * max(1, abs(ref))


def test_det_singular_is_zero():
    assert abs(det(np.ones((3, 3)))) < 1e-15


# generalized_inverse

def test_generalized_inverse_orthonormal(rng):
    Q, _ = np.linalg.qr(crandn(rng, 5, 2))
    assert np.allclose(generalized_inverse(Q), Q.conj().T)


def test_generalized_inverse_scaled_vector():
    assert np.allclose(generalized_inverse(np.array([[2.0], [0.0]])), [[0.5, 0.0]])


def test_generalized_inverse_left_inverse(rng):
    Om = crandn(rng, 5, 2)
    assert np.linalg.norm(generalized_inverse(Om) @ Om - np.eye(2)) < 1e-11


# invariant_subspace

def test_invariant_subspace_2x2():
    f = invariant_subspace(np.diag([-1.0, 2.0]), "stable")
    assert f.dim == 1 and np.isclose(abs(f.basis[0, 0]), 1) and np.isclose(f.trace_restriction, -1)


def test_invariant_subspace_3x3():
    f = invariant_subspace(np.diag([-1.0, -2.0, 3.0]), "stable")
    assert f.dim == 2 and np.isclose(f.trace_restriction, -3)
    g = invariant_subspace(np.diag([-1.0, -2.0, 3.0]), "unstable")
    assert g.dim == 1 and np.isclose(g.trace_restriction, 3)


def test_invariant_subspace_boussinesq_quartic():
    lam, s = 0.1, 0.4
    roots = np.roots([1, 0, -(1 - s * s), -2 * lam * s, lam * lam])
    want = np.sort_complex(roots[roots.real > 0])
    f = invariant_subspace(boussinesq_limit(lam, s), "unstable")
    assert f.dim == 2
    assert np.allclose(np.sort_complex(f.eigenvalues), want, atol=1e-12)
    assert np.isclose(f.trace_restriction, want.sum(), atol=1e-12)


def test_invariant_subspace_separation_failure():
    with pytest.raises(SpectralSeparationFailure):
        invariant_subspace(np.diag([-1.0, 1e-10, 1.0]), "stable")


@pytest.mark.parametrize("seed", range(10))
def test_invariant_subspace_residuals(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 7))
    eig = crandn(rng, n)
    eig.real = np.where(np.abs(eig.real) < 0.2, np.sign(eig.real + 1e-300) * 0.2, eig.real)
    V = crandn(rng, n, n)
    A = V @ np.diag(eig) @ np.linalg.inv(V)
    for half in ("stable", "unstable"):
        m = int(np.sum(eig.real < 0) if half == "stable" else np.sum(eig.real > 0))
        if m == 0:
            continue
        f = invariant_subspace(A, half)
        B, L = f.basis, f.left
        nA = np.linalg.norm(A)
        assert np.linalg.norm(B.conj().T @ B - np.eye(m)) < 1e-12
        assert np.linalg.norm(L @ B - np.eye(m)) < 1e-10
        assert np.linalg.norm(A @ B - B @ (L @ A @ B)) <= 1e-8 * nA
        assert np.linalg.norm(B - B @ (B.conj().T @ B)) < 1e-12
        chosen = eig[eig.real < 0] if half == "stable" else eig[eig.real > 0]
        assert np.isclose(f.trace_restriction, chosen.sum(), atol=1e-8 * nA)


# multi-indices and compound lift

def test_multi_indices_lexicographic():
    assert multi_indices(4, 2) == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def test_compound_lift_k1_and_kn(rng):
    A = crandn(rng, 5, 5)
    assert np.allclose(compound_lift(A, 1), A)
    top = compound_lift(A, 5)
    assert top.shape == (1, 1) and np.isclose(top[0, 0], np.trace(A))


@pytest.mark.parametrize("x, lam, s", [(0.3, 0.16 + 0.2j, 0.4), (-1.7, 0.05, 0.6)])
def test_compound_lift_matches_lifted_boussinesq(x, lam, s):
    u, ux, uxx = boussinesq_profile(x, s)
    a = (1 - s * s) - 2 * u
    b = 2 * lam * s - 4 * ux
    c = lam * lam + 2 * uxx
    expected = np.array([
        [0, 1, 0, 0, 0, 0],
        [0, 0, 1, 1, 0, 0],
        [b, a, 0, 0, 1, 0],
        [0, 0, 0, 0, 1, 0],
        [c, 0, 0, a, 0, 1],
        [0, c, 0, -b, 0, 0],
    ], dtype=complex)
    assert np.allclose(compound_lift(boussinesq_A(x, lam, s), 2), expected, atol=1e-15)


def test_compound_lift_finite_difference_oracle():
    rng = np.random.default_rng(7)
    h = 1e-6
    cases = [(n, k) for n in range(2, 7) for k in range(1, n + 1)]
    for trial in range(50):
        n, k = cases[trial % len(cases)]
        A = crandn(rng, n, n)
        W = crandn(rng, n, k)
        fd = (minors_vector(W + h * A @ W).coords - minors_vector(W).coords) / h
        exact = compound_lift(A, k) @ minors_vector(W).coords
        bound = 10 * h * np.linalg.norm(A) ** 2 * np.linalg.norm(W) ** k
        assert np.linalg.norm(fd - exact) <= bound, (n, k)


def test_compound_lift_is_derivation_of_minors(rng):
    # exact check: minors of exp(tA) W evolve by the lift
    from scipy.linalg import expm

    A = 0.3 * crandn(rng, 5, 5)
    W = crandn(rng, 5, 3)
    t = 0.7
    lhs = minors_vector(expm(t * A) @ W).coords
    rhs = expm(t * compound_lift(A, 3)) @ minors_vector(W).coords
    assert np.allclose(lhs, rhs, rtol=1e-10, atol=1e-12)


@pytest.mark.parametrize("n", range(2, 7))
def test_compound_sparsity_count(n, rng):
    A = crandn(rng, n, n)
    for k in range(1, n + 1):
        count = np.count_nonzero(compound_lift(A, k))
        expected = (k * (n - k) + 1) * math.comb(n, k)
        assert count == expected == compound_nonzeros(n, k)


# minors and wedge pairing

def test_minors_unit_vector():
    y = minors_vector(np.eye(4)[:, :2])
    assert np.array_equal(y.coords, [1, 0, 0, 0, 0, 0])


def test_minors_antisymmetric(rng):
    W = crandn(rng, 4, 2)
    assert np.allclose(minors_vector(W[:, ::-1]).coords, -minors_vector(W).coords)


def test_minors_brute_force(rng):
    W = crandn(rng, 4, 2)
    brute = [W[i, 0] * W[j, 1] - W[j, 0] * W[i, 1] for i, j in itertools.combinations(range(4), 2)]
    assert np.abs(minors_vector(W).coords - brute).max() <= 1e-13


def test_wedge_vector_length_checked():
    with pytest.raises(DimensionError):
        WedgeVector(4, 2, np.zeros(5))


def test_wedge_pair_2d_signs():
    e1 = WedgeVector(2, 1, np.array([1.0, 0.0]))
    e2 = WedgeVector(2, 1, np.array([0.0, 1.0]))
    assert wedge_pair(e1, e2) == 1 and wedge_pair(e2, e1) == -1


def test_wedge_pair_4d():
    u = WedgeVector(4, 2, np.eye(6)[0])
    v = WedgeVector(4, 2, np.eye(6)[5])
    assert wedge_pair(u, v) == 1


def test_wedge_pair_degree_mismatch():
    with pytest.raises(DimensionError):
        wedge_pair(WedgeVector(4, 2, np.zeros(6)), WedgeVector(4, 1, np.zeros(4)))


def test_wedge_pair_equals_determinant_100(rng):
    for trial in range(100):
        n = int(rng.integers(2, 7))
        k = int(rng.integers(1, n))
        Wp, Wm = crandn(rng, n, k), crandn(rng, n, n - k)
        ref = np.linalg.det(np.hstack([Wp, Wm]))
        got = wedge_pair(minors_vector(Wp), minors_vector(Wm))
        assert abs(got - ref) <= 1e-12 * max(1.0, abs(ref))


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.data())
def test_wedge_pair_bilinear(n, data):
    k = data.draw(st.integers(1, n - 1))
    seed = data.draw(st.integers(0, 2**31))
    rng = np.random.default_rng(seed)
    a, b = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
    u1, u2 = (WedgeVector(n, k, crandn(rng, math.comb(n, k))) for _ in range(2))
    v = WedgeVector(n, n - k, crandn(rng, math.comb(n, n - k)))
    lhs = wedge_pair(WedgeVector(n, k, a * u1.coords + b * u2.coords), v)
    rhs = a * wedge_pair(u1, v) + b * wedge_pair(u2, v)
    assert abs(lhs - rhs) <= 1e-12 * (1 + abs(lhs))


# Stiefel error

def test_stiefel_error_values(rng):
    Q, _ = np.linalg.qr(crandn(rng, 5, 2))
    assert stiefel_error(Q) < 1e-28
    assert np.isclose(stiefel_error(np.array([[2.0], [0.0]])), 9)
    Om = crandn(rng, 5, 3)
    G = Om.conj().T @ Om - np.eye(3)
    direct = sum(abs(G[i, j]) ** 2 for i in range(3) for j in range(3))
    assert abs(stiefel_error(Om) - direct) <= 1e-14 * max(1, direct)
