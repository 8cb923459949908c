"""Closed-form regime decompositions of the constant-coupling evolution.

Two pieces dominate different epochs after the switching interval:

* an exponentially decaying component from the Gamow pole at
  z_g = -i alpha, with the universal rate gamma/2 = delta^2/alpha for
  every site and every handoff state, and
* an oscillatory asymptotic component with a t~^(-3/2) amplitude
  envelope, period pi, and a phase/amplitude pair (Phi, A) set by the
  odd/even site sums S_o, S_e over the handoff.

Their sum is the additive ansatz c_n ~= c_n^(e) + c_n^(a), accurate at
figure scale across the changeover.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import HandoffState, ModelParams

SUM_TOL = 1e-12


@dataclass(frozen=True)
class AsymptoticForm:
    """Odd/even handoff sums defining the long-time oscillation."""

    s_odd: complex
    s_even: complex
    delta: float
    alpha_sq: float

    @property
    def x_even(self) -> complex:
        return -1j * self.s_even

    @property
    def amplitude(self) -> float:
        return math.hypot(self.s_odd.real, self.x_even.real)

    @property
    def phase(self) -> float:
        """Phi in (-pi/2, pi/2], the single-argument arctan convention."""
        phi = math.atan2(self.x_even.real, self.s_odd.real)
        if phi > 0.5 * math.pi:
            phi -= math.pi
        elif phi <= -0.5 * math.pi:
            phi += math.pi
        return phi


@dataclass(frozen=True)
class ExponentialForm:
    """Gamow-pole component: coefficient * exp(-gamma t~ / 2)."""

    coefficient: complex
    rate: float

    def __call__(self, t_tilde) -> np.ndarray | complex:
        return self.coefficient * np.exp(-self.rate * np.asarray(t_tilde))


def asymptotic_sums(handoff: HandoffState, params: ModelParams) -> AsymptoticForm:
    """S_o and S_e: theta-tilde weighted sums q(1+alpha^2) - 2 alpha^2
    over odd and even handoff sites."""
    theta = handoff.scaled(params)
    a2 = params.alpha_sq
    q = np.arange(1, theta.size + 1)
    weights = q * (1.0 + a2) - 2.0 * a2
    terms = theta * weights
    mags = np.abs(terms)
    if mags.size > 8 and mags[-1] > SUM_TOL and mags[-1] > mags[-5]:
        raise ValueError("handoff tail is not decaying; sums unreliable")
    odd = q % 2 == 1
    return AsymptoticForm(s_odd=complex(np.sum(terms[odd])),
                          s_even=complex(np.sum(terms[~odd])),
                          delta=params.delta, alpha_sq=a2)


def asymptotic_valid(n: int, t_tilde: float) -> bool:
    """Validity window of the stationary-phase forms: 2 t~ >> n pi."""
    return 2.0 * t_tilde >= n * math.pi + 10.0


def asymptotic_amplitude(form: AsymptoticForm, params: ModelParams,
                         n: int, t_tilde) -> np.ndarray | complex:
    """c_n^(a)(t~); requires t~ > 0."""
    t_tilde = np.asarray(t_tilde, dtype=float)
    if np.any(t_tilde <= 0.0):
        raise ValueError("asymptotic form needs t_tilde > 0")
    a2 = params.alpha_sq
    pref = 1.0 / (math.sqrt(math.pi) * (1.0 + a2) ** 2 * t_tilde ** 1.5)
    if n == 1:
        arg = 2.0 * t_tilde - 0.25 * math.pi
        val = pref * (form.s_odd * np.sin(arg)
                      - 1j * form.s_even * np.cos(arg))
    elif n >= 2:
        pref = pref * (1j ** (n - 1)) * (n + a2 * (n - 2)) / params.delta
        odd_arg = 2.0 * t_tilde - (n + 0.5) * 0.5 * math.pi
        even_arg = 2.0 * t_tilde - (n - 0.5) * 0.5 * math.pi
        val = pref * (form.s_odd * np.cos(odd_arg)
                      - 1j * form.s_even * np.cos(even_arg))
    else:
        raise ValueError("site index must be >= 1")
    return val if val.ndim else complex(val)


def exponential_form(handoff: HandoffState, params: ModelParams,
                     k: int) -> ExponentialForm:
    """Gamow-pole component of site k for the given handoff."""
    if k < 1:
        raise ValueError("site index must be >= 1")
    theta = handoff.scaled(params)
    q = np.arange(1, theta.size + 1)
    weights = (1j ** q) / params.alpha ** q
    terms = theta * weights
    mags = np.abs(terms)
    if mags.size > 8 and mags[-1] > SUM_TOL and mags[-1] > mags[-5]:
        raise ValueError("alpha^(-q)-weighted handoff sum diverges")
    pole_sum = complex(np.sum(terms))
    a2 = params.alpha_sq
    if k == 1:
        coeff = (1.0 + a2) / (2.0j * params.alpha) * pole_sum
    else:
        coeff = (1j ** (k - 2)) * params.delta * (1.0 + a2) \
            / (2.0 * params.alpha ** k) * pole_sum
    return ExponentialForm(coefficient=coeff, rate=0.5 * params.gamma)


def exponential_amplitude(handoff: HandoffState, params: ModelParams,
                          k: int, t_tilde) -> np.ndarray | complex:
    """c_k^(e)(t~)."""
    return exponential_form(handoff, params, k)(t_tilde)


def regime_ansatz(handoff: HandoffState, params: ModelParams,
                  n: int, t_tilde) -> np.ndarray | complex:
    """Additive ansatz c_n^(e) + c_n^(a)."""
    form = asymptotic_sums(handoff, params)
    return (exponential_amplitude(handoff, params, n, t_tilde)
            + asymptotic_amplitude(form, params, n, t_tilde))
