"""Model foundation: chain parameters, switching profiles, trajectories.

The system is a semi-infinite tight-binding chain (sites 1, 2, ...) whose
first link carries a reduced, possibly time-dependent hopping delta_v(t);
all other links have unit hopping and all site energies vanish.
Dimensionless units throughout: energies in units of the bulk hopping,
time in units of hbar over that hopping.

In matrix form, acting on an amplitude vector c = (c_1, c_2, ...):

    (Hc)_1 = -delta_v c_2
    (Hc)_n = -c_{n-1} - c_{n+1}      (n >= 3, with the bond-1 coupling
    (Hc)_2 = -delta_v c_1 - c_3       entering row 2 as well)

Truncation to a finite chain uses a hard wall: the last site couples
only inward.  Adequacy of the truncation is tracked by the trajectory's
tail-support check, never assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class ProfileError(ValueError):
    """Invalid switching-profile definition."""


@dataclass(frozen=True)
class ModelParams:
    """Coupling ratio of the first link and derived decay quantities."""

    delta: float

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")

    @property
    def alpha_sq(self) -> float:
        return 1.0 - self.delta ** 2

    @property
    def alpha(self) -> float:
        return math.sqrt(self.alpha_sq)

    @property
    def gamma(self) -> float:
        """Decay constant of the exponential regime, 2*delta^2/alpha."""
        return 2.0 * self.delta ** 2 / self.alpha

    @property
    def lifetime(self) -> float:
        return 1.0 / self.gamma


@dataclass(frozen=True)
class SwitchingProfile:
    """Time dependence delta_v(t) of the first-link coupling.

    The coupling rises from 0 to its final value ``delta`` over the
    interval [0, rise_time] and stays constant afterwards.  ``custom``
    profiles are sampled tables, linearly interpolated, with a declared
    time average over the rise interval (used by phase-universality
    checks without symbolic integration).
    """

    kind: str
    delta: float
    rise_time: float = 0.0
    table_t: np.ndarray | None = field(default=None, repr=False)
    table_v: np.ndarray | None = field(default=None, repr=False)
    declared_average: float | None = None

    KINDS = ("sudden", "linear", "custom")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ProfileError(f"unknown profile kind {self.kind!r}")
        if not 0.0 < self.delta < 1.0:
            raise ProfileError(f"delta must lie in (0, 1), got {self.delta}")
        if self.rise_time < 0.0:
            raise ProfileError("rise_time must be >= 0")
        if self.kind == "sudden" and self.rise_time != 0.0:
            raise ProfileError("sudden profile requires rise_time = 0")
        if self.kind == "linear" and self.rise_time <= 0.0:
            raise ProfileError("linear profile requires rise_time > 0 "
                               "(use the sudden kind for T = 0)")
        if self.kind == "custom":
            self._validate_table()

    def _validate_table(self):
        if self.table_t is None or self.table_v is None:
            raise ProfileError("custom profile requires a sampled table")
        t = np.asarray(self.table_t, dtype=float)
        v = np.asarray(self.table_v, dtype=float)
        if t.ndim != 1 or t.shape != v.shape or t.size < 2:
            raise ProfileError("custom table must be two equal-length 1-d "
                               "arrays with at least two samples")
        if np.any(np.diff(t) <= 0):
            raise ProfileError("custom table times must be increasing")
        if t[0] != 0.0 or abs(t[-1] - self.rise_time) > 1e-12:
            raise ProfileError("custom table must span [0, rise_time]")
        if np.any(v < -1e-12) or np.any(v > self.delta + 1e-12):
            raise ProfileError("custom table values must lie in [0, delta]")
        if abs(v[-1] - self.delta) > 1e-9:
            raise ProfileError("custom table must end at delta")
        if self.declared_average is None:
            raise ProfileError("custom profile requires a declared average")
        object.__setattr__(self, "table_t", t)
        object.__setattr__(self, "table_v", v)

    @classmethod
    def sudden(cls, delta: float) -> "SwitchingProfile":
        return cls(kind="sudden", delta=delta, rise_time=0.0)

    @classmethod
    def linear(cls, delta: float, rise_time: float) -> "SwitchingProfile":
        return cls(kind="linear", delta=delta, rise_time=rise_time)

    @classmethod
    def custom(cls, delta: float, rise_time: float, times, values,
               average: float) -> "SwitchingProfile":
        return cls(kind="custom", delta=delta, rise_time=rise_time,
                   table_t=np.asarray(times, dtype=float),
                   table_v=np.asarray(values, dtype=float),
                   declared_average=average)

    @property
    def average(self) -> float:
        """Mean of delta_v over [0, rise_time] (delta itself for sudden)."""
        if self.kind == "sudden":
            return self.delta
        if self.kind == "linear":
            return 0.5 * self.delta
        return float(self.declared_average)

    def value_at(self, t: float) -> float:
        if t < 0.0:
            raise ValueError("t must be >= 0")
        return float(self.values_at(np.array([t]))[0])

    def values_at(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.kind == "sudden" or self.rise_time == 0.0:
            return np.full_like(t, self.delta)
        if self.kind == "linear":
            return np.where(t >= self.rise_time, self.delta,
                            t * (self.delta / self.rise_time))
        ramp = np.interp(np.clip(t, 0.0, self.rise_time),
                         self.table_t, self.table_v)
        return np.where(t >= self.rise_time, self.delta, ramp)


def profile_value(profile: SwitchingProfile, t: float) -> float:
    """Coupling delta_v(t) for the given profile."""
    return profile.value_at(t)


def apply_hamiltonian(state: np.ndarray, delta_at_t: float) -> np.ndarray:
    """Apply the truncated chain Hamiltonian to an amplitude vector.

    Hard-wall truncation: the last site couples only to its inner
    neighbour.
    """
    state = np.asarray(state, dtype=complex)
    n = state.size
    if n < 2:
        raise ValueError("state must have at least 2 sites")
    out = np.zeros(n, dtype=complex)
    out[0] = -delta_at_t * state[1]
    if n == 2:
        out[1] = -delta_at_t * state[0]
        return out
    out[1:-1] = -state[:-2] - state[2:]
    out[-1] = -state[-2]
    out[1] = -delta_at_t * state[0] - state[2]
    return out


def default_n_sites(t_max: float) -> int:
    """Truncation length: wavefront speed <= 2 sites per unit time,
    plus a margin absorbing tail leakage."""
    return math.ceil(2.5 * t_max) + 64


@dataclass(frozen=True)
class HandoffState:
    """Amplitudes at the end of the switching interval (t = T)."""

    amplitudes: np.ndarray
    norm_tolerance: float = 1e-9

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        object.__setattr__(self, "amplitudes", amps)
        norm = np.sum(np.abs(amps) ** 2)
        if abs(norm - 1.0) > self.norm_tolerance:
            raise ValueError(f"handoff state not normalized: |psi|^2 = {norm}")

    @classmethod
    def site(cls, q: int, n_sites: int | None = None) -> "HandoffState":
        """Unit amplitude on site q (1-based), zero elsewhere."""
        if q < 1:
            raise ValueError("site index must be >= 1")
        n = n_sites if n_sites is not None else q + 1
        amps = np.zeros(n, dtype=complex)
        amps[q - 1] = 1.0
        return cls(amps)

    def scaled(self, params: ModelParams) -> np.ndarray:
        """theta-tilde: first entry unscaled, the rest multiplied by delta."""
        out = self.amplitudes.copy()
        out[1:] *= params.delta
        return out


@dataclass(frozen=True)
class ChainTrajectory:
    """Site amplitudes c_n(t) on a time grid, for a truncated chain.

    ``rise_time`` is carried so the shifted time t~ = t - T of the
    constant-coupling stage is always recoverable.
    """

    times: np.ndarray
    amplitudes: np.ndarray          # shape (n_times, n_sites)
    rise_time: float = 0.0
    tail_width: int = 10

    @property
    def n_sites(self) -> int:
        return self.amplitudes.shape[1]

    @property
    def shifted_times(self) -> np.ndarray:
        return self.times - self.rise_time

    def site_amplitude(self, n: int) -> np.ndarray:
        """c_n(t) for 1-based site index n."""
        return self.amplitudes[:, n - 1]

    def survival(self) -> np.ndarray:
        return np.abs(self.amplitudes[:, 0]) ** 2

    def norms(self) -> np.ndarray:
        return np.sum(np.abs(self.amplitudes) ** 2, axis=1)

    def tail_support(self) -> float:
        """Largest amplitude magnitude seen on the last tail_width sites."""
        return float(np.max(np.abs(self.amplitudes[:, -self.tail_width:])))

    @property
    def truncation_ok(self) -> bool:
        return self.tail_support() < 1e-8

    def sample_index(self, t: float) -> int:
        idx = int(np.argmin(np.abs(self.times - t)))
        if abs(self.times[idx] - t) > 1e-9:
            raise ValueError(f"time {t} is not on the sample grid")
        return idx

    def handoff(self, t: float | None = None) -> HandoffState:
        """State at t (default: the rise time) as a HandoffState."""
        t_h = self.rise_time if t is None else t
        return HandoffState(self.amplitudes[self.sample_index(t_h)])
