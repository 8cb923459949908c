"""TDSE propagator: unitarity, convergence order, and an independent
ODE-solver oracle."""

import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from latticedecay.model import ModelParams, SwitchingProfile
from latticedecay.propagator import (PropagatorConfig, TruncationError,
                                     propagate, survival_probability)


@pytest.fixture(scope="module")
def params():
    return ModelParams(0.3)


def _dense_rhs(profile):
    def rhs(t, y):
        n = y.size // 2
        c = y[:n] + 1j * y[n:]
        dv = profile.value_at(t)
        out = np.empty(n, dtype=complex)
        out[0] = -dv * c[1]
        out[1] = -dv * c[0] - c[2]
        out[2:-1] = -c[1:-2] - c[3:]
        out[-1] = -c[-2]
        dydt = -1j * out
        return np.concatenate([dydt.real, dydt.imag])
    return rhs


def test_matches_independent_ode_solver(params):
    """Cross-check against a high-order adaptive integrator."""
    profile = SwitchingProfile.linear(0.3, 1.0)
    config = PropagatorConfig(step=1e-3, t_max=6.0)
    n = 40
    traj = propagate(np.array([1.0]), profile, params, config, n_sites=n)
    y0 = np.zeros(2 * n)
    y0[0] = 1.0
    sol = solve_ivp(_dense_rhs(profile), (0.0, 6.0), y0, method="DOP853",
                    rtol=1e-11, atol=1e-12, t_eval=[6.0])
    ref = sol.y[:n, -1] + 1j * sol.y[n:, -1]
    got = traj.amplitudes[traj.sample_index(6.0)]
    np.testing.assert_allclose(got, ref, rtol=0, atol=5e-7)


def test_norm_conserved(params):
    config = PropagatorConfig(step=1e-3, t_max=30.0)
    traj = propagate(np.array([1.0]), SwitchingProfile.sudden(0.3),
                     params, config)
    assert np.max(np.abs(traj.norms() - 1.0)) < 1e-11


def test_second_order_convergence(params):
    profile = SwitchingProfile.sudden(0.3)
    ref = propagate(np.array([1.0]), profile, params,
                    PropagatorConfig(step=5e-5, t_max=5.0), n_sites=48)
    errs = []
    for h in (4e-3, 2e-3, 1e-3):
        traj = propagate(np.array([1.0]), profile, params,
                         PropagatorConfig(step=h, t_max=5.0), n_sites=48)
        errs.append(np.max(np.abs(
            traj.amplitudes[-1] - ref.amplitudes[-1])))
    # halving the step divides the error by ~4
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.2)
    assert errs[1] / errs[2] == pytest.approx(4.0, rel=0.2)


def test_rise_time_is_exact_sample(params):
    profile = SwitchingProfile.linear(0.3, 0.7303)
    config = PropagatorConfig(step=1e-3, t_max=3.0)
    traj = propagate(np.array([1.0]), profile, params, config)
    idx = traj.sample_index(0.7303)
    assert traj.times[idx] == pytest.approx(0.7303, abs=1e-12)
    handoff = traj.handoff()
    assert np.sum(np.abs(handoff.amplitudes) ** 2) == pytest.approx(1.0)


def test_truncated_chain_detects_wavefront(params):
    config = PropagatorConfig(step=1e-3, t_max=20.0)
    with pytest.raises(TruncationError):
        propagate(np.array([1.0]), SwitchingProfile.sudden(0.3),
                  params, config, n_sites=16)


def test_initial_state_must_be_normalized(params):
    config = PropagatorConfig(step=1e-3, t_max=1.0)
    with pytest.raises(ValueError):
        propagate(np.array([0.7]), SwitchingProfile.sudden(0.3),
                  params, config)


def test_profile_params_consistency(params):
    config = PropagatorConfig(step=1e-3, t_max=1.0)
    with pytest.raises(ValueError):
        propagate(np.array([1.0]), SwitchingProfile.sudden(0.5),
                  params, config)


def test_survival_accessor(params):
    config = PropagatorConfig(step=1e-3, t_max=2.0)
    traj = propagate(np.array([1.0]), SwitchingProfile.sudden(0.3),
                     params, config)
    t, p = survival_probability(traj)
    assert t[0] == 0.0 and p[0] == pytest.approx(1.0)
    assert np.all(p <= 1.0 + 1e-12)


def test_decay_slower_from_weaker_coupling():
    config = PropagatorConfig(step=1e-3, t_max=20.0)
    p_end = []
    for delta in (0.2, 0.4):
        traj = propagate(np.array([1.0]), SwitchingProfile.sudden(delta),
                         ModelParams(delta), config)
        p_end.append(traj.survival()[-1])
    assert p_end[0] > p_end[1]
