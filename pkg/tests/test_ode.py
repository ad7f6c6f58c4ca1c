import math

import numpy as np
import pytest

from polarevans.errors import NonFiniteState, ParameterError, StepSizeUnderflow
from polarevans.ode import integrate_adaptive, integrate_fixed


def test_zero_rhs():
    res = integrate_adaptive(lambda x, y: np.zeros_like(y), 0.0, 1.0, np.array([7.0]))
    assert res.final_state[0] == 7 and 2 <= res.mesh_points <= 5


def test_exponential():
    at, rt = 1e-8, 1e-6
    res = integrate_adaptive(lambda x, y: y, 0.0, 1.0, np.array([1.0]), at, rt)
    assert abs(res.final_state[0] - math.e) <= 10 * (at + rt * math.e)


def test_rotation_keeps_modulus():
    # Local control at 1e-8/1e-6 accumulates to a few 1e-6 over ~100 steps;
    # scipy's RK45 lands at 3.8e-6 on the same problem.
    res = integrate_adaptive(lambda x, y: 1j * y, 0.0, 20.0, np.array([1.0 + 0j]))
    assert abs(abs(res.final_state[0]) - 1) <= 1e-5
    tight = integrate_adaptive(lambda x, y: 1j * y, 0.0, 20.0, np.array([1.0 + 0j]), 1e-10, 1e-8)
    assert abs(abs(tight.final_state[0]) - 1) <= 1e-6
    assert abs(tight.final_state[0] - np.exp(20j)) <= 1e-6


def test_backward_direction_hits_endpoint():
    res = integrate_adaptive(lambda x, y: -y, 3.0, 0.0, np.array([1.0]), keep_trajectory=True)
    assert res.xs[-1] == 0.0 and np.all(np.diff(res.xs) < 0)
    assert np.isclose(res.final_state[0], math.exp(3), rtol=1e-5)


def test_order_check():
    def err(steps):
        return abs(integrate_fixed(lambda x, y: y, 0.0, 1.0, np.array([1.0]), steps)[0] - math.e)

    ratio = err(8) / err(16)
    assert 20 <= ratio <= 45


def test_direction_symmetry():
    A = np.array([[0.0, 1.0], [-2.0, -0.3]])
    y0 = np.array([1.0, 0.5])
    at, rt = 1e-8, 1e-6
    fwd = integrate_adaptive(lambda x, y: A @ y, 0.0, 5.0, y0, at, rt).final_state
    back = integrate_adaptive(lambda x, y: A @ y, 5.0, 0.0, fwd, at, rt).final_state
    budget = at + rt * np.abs(y0).max()
    assert np.abs(back - y0).max() <= 10 * budget * 100  # two sweeps of a mildly growing flow
    assert np.abs(back - y0).max() <= 1e-4


@pytest.mark.parametrize("at, rt", [(1e-6, 1e-4), (1e-8, 1e-6), (1e-10, 1e-8)])
def test_tolerance_monotonicity(at, rt):
    def err(a, r):
        y = integrate_adaptive(lambda x, y: y, 0.0, 1.0, np.array([1.0]), a, r).final_state[0]
        return abs(y - math.e)

    assert err(at / 100, rt / 100) <= err(at, rt)


def test_mesh_counts_accepted_steps():
    res = integrate_adaptive(lambda x, y: y, 0.0, 1.0, np.array([1.0]), keep_trajectory=True)
    assert res.mesh_points == len(res.xs) >= 2
    assert res.min_step > 0


def test_nonfinite_rhs():
    with pytest.raises(NonFiniteState):
        integrate_adaptive(lambda x, y: np.full_like(y, np.nan), 0.0, 1.0, np.array([1.0]))


def test_blow_up_underflows():
    with pytest.raises((StepSizeUnderflow, NonFiniteState)):
        integrate_adaptive(lambda x, y: y**2, 0.0, 2.0, np.array([1.0]))


@pytest.mark.parametrize("x0, x1, at, rt", [(0.0, 0.0, 1e-8, 1e-6), (0.0, 1.0, 0.0, 1e-6), (0.0, 1.0, 1e-8, -1.0)])
def test_bad_arguments(x0, x1, at, rt):
    with pytest.raises(ParameterError):
        integrate_adaptive(lambda x, y: y, x0, x1, np.array([1.0]), at, rt)
