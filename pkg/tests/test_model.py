"""Model parameters, switching profiles, and trajectory containers."""

import math

import numpy as np
import pytest

from latticedecay.model import (ChainTrajectory, HandoffState, ModelParams,
                                ProfileError, SwitchingProfile,
                                apply_hamiltonian, default_n_sites)


def test_derived_parameters():
    p = ModelParams(0.3)
    assert p.alpha_sq == pytest.approx(0.91, abs=1e-15)
    assert p.alpha == pytest.approx(math.sqrt(0.91), rel=1e-15)
    assert p.gamma == pytest.approx(2 * 0.09 / math.sqrt(0.91), rel=1e-15)
    assert p.gamma == pytest.approx(0.18869127, abs=1e-7)
    assert p.lifetime == pytest.approx(5.2996, abs=1e-3)


@pytest.mark.parametrize("bad", [0.0, 1.0, -0.2, 1.3])
def test_delta_range_enforced(bad):
    with pytest.raises(ValueError):
        ModelParams(bad)


def test_sudden_profile_is_constant():
    prof = SwitchingProfile.sudden(0.4)
    assert prof.rise_time == 0.0
    t = np.linspace(0.0, 9.0, 11)
    assert np.all(prof.values_at(t) == 0.4)
    assert prof.average == 0.4


def test_linear_profile_ramp_and_average():
    prof = SwitchingProfile.linear(0.4, 2.0)
    assert prof.value_at(0.0) == 0.0
    assert prof.value_at(1.0) == pytest.approx(0.2)
    assert prof.value_at(2.0) == pytest.approx(0.4)
    assert prof.value_at(5.0) == pytest.approx(0.4)
    assert prof.average == pytest.approx(0.2)


def test_custom_profile_interpolates_and_clamps():
    t = np.linspace(0.0, 1.0, 101)
    v = 0.3 * np.sin(0.5 * math.pi * t) ** 2
    prof = SwitchingProfile.custom(0.3, 1.0, t, v,
                                   average=float(np.trapezoid(v, t)))
    assert prof.value_at(0.5) == pytest.approx(0.15, abs=1e-6)
    assert prof.value_at(3.0) == pytest.approx(0.3)
    assert prof.average == pytest.approx(0.15, abs=1e-3)


def test_negative_time_rejected():
    with pytest.raises(ValueError):
        SwitchingProfile.sudden(0.3).value_at(-0.1)


def test_hamiltonian_matches_dense_matrix():
    rng = np.random.default_rng(7)
    n = 12
    delta_v = 0.27
    h = np.zeros((n, n))
    for i in range(n - 1):
        h[i, i + 1] = h[i + 1, i] = -1.0
    h[0, 1] = h[1, 0] = -delta_v
    state = rng.normal(size=n) + 1j * rng.normal(size=n)
    got = apply_hamiltonian(state, delta_v)
    np.testing.assert_allclose(got, h @ state, rtol=0, atol=1e-14)


def test_default_chain_covers_light_cone():
    # wavefront speed is 2 sites per unit time
    assert default_n_sites(50.0) > 2 * 50
    assert default_n_sites(1.0) >= 64


def test_handoff_requires_normalization():
    with pytest.raises(ValueError):
        HandoffState(np.array([0.5 + 0.0j]))
    state = HandoffState.site(3)
    assert state.amplitudes[2] == 1.0
    assert np.sum(np.abs(state.amplitudes) ** 2) == pytest.approx(1.0)


def test_scaled_handoff_multiplies_tail_by_delta():
    p = ModelParams(0.3)
    state = HandoffState(np.array([0.6, 0.8], dtype=complex))
    theta = state.scaled(p)
    assert theta[0] == pytest.approx(0.6)
    assert theta[1] == pytest.approx(0.8 * 0.3)


def test_trajectory_accessors():
    times = np.linspace(0.0, 2.0, 21)
    amps = np.zeros((21, 6), dtype=complex)
    amps[:, 0] = np.exp(-times)
    traj = ChainTrajectory(times=times, amplitudes=amps, rise_time=1.0)
    assert traj.shifted_times[0] == -1.0
    np.testing.assert_allclose(traj.survival(), np.exp(-2 * times))
    assert traj.sample_index(1.0) == 10
    np.testing.assert_allclose(traj.site_amplitude(1), amps[:, 0])
