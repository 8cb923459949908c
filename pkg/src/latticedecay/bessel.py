"""Exact constant-coupling solution via Bessel series.

For constant first-link coupling delta the chain dynamics has a closed
solution: site amplitudes are weighted integrals over stationary Bloch
modes, and the weights reduce to a real-coefficient Fourier sequence
T_N obtained by a two-term recurrence from the initial occupations.
Each amplitude is then a rapidly convergent sum of Bessel functions

    c_1(t~) = sum_N T_N (N / (i t~)) calJ_N(2 t~)
    c_n(t~) = (1/delta) sum_N T_N [ (calJ_{N-n} - calJ_{N+n})
              + alpha^2 (calJ_{N-n+2} - calJ_{N+n-2}) ],   n >= 2

with calJ_q(x) = i^q J_q(x), symmetric under q -> -q.

Bessel values come from Miller's backward recurrence with the
normalization J_0 + 2 sum_k J_{2k} = 1; self-contained and accurate to
~1e-13 for the orders needed here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import HandoffState, ModelParams

_IPOW = np.array([1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j])

# geometric tail cut for the T_N series; |J| <= 1 bounds the terms
SERIES_TOL = 1e-14


def ipow(q) -> np.ndarray | complex:
    """i**q for integer q (array-friendly)."""
    return _IPOW[np.asarray(q) % 4]


def bessel_j_array(n_max: int, x: float) -> np.ndarray:
    """J_0(x) .. J_n_max(x) by Miller backward recurrence, x >= 0."""
    if x < 0.0:
        raise ValueError("x must be >= 0")
    out = np.zeros(n_max + 1)
    if x == 0.0:
        out[0] = 1.0
        return out
    top = max(n_max, int(x))
    m = top + 24 + int(12.0 * math.sqrt(top + 1.0))
    if m % 2:
        m += 1
    jp = 0.0                      # J_{n+1}, unnormalized
    jc = 1e-30                    # J_n, seed
    norm = 0.0
    for nn in range(m, 0, -1):
        jm = (2.0 * nn / x) * jc - jp
        jp = jc
        jc = jm                   # now holds J_{nn-1}
        k = nn - 1
        if k <= n_max:
            out[k] = jc
        if k > 0 and k % 2 == 0:
            norm += 2.0 * jc
        if abs(jc) > 1e250:
            jc *= 1e-250
            jp *= 1e-250
            norm *= 1e-250
            out *= 1e-250
    norm += jc                    # jc is J_0
    out /= norm
    return out


def caligraphic_j(q: int, x: float) -> complex:
    """calJ_q(x) = i^q J_q(x); symmetric in q."""
    q = abs(int(q))
    return complex(ipow(q)) * bessel_j_array(q, x)[q]


def caligraphic_j_array(n_max: int, x: float) -> np.ndarray:
    """calJ_0(x) .. calJ_n_max(x) as a complex vector."""
    return ipow(np.arange(n_max + 1)) * bessel_j_array(n_max, x)


@dataclass(frozen=True)
class StationaryMode:
    """Scattering mode of the chain at Bloch angle phi."""

    phi: float
    params: ModelParams

    @property
    def energy(self) -> float:
        return -2.0 * math.cos(self.phi)

    def u(self, n_max: int) -> np.ndarray:
        """Mode amplitudes u_1 .. u_n_max."""
        a2 = self.params.alpha_sq
        n = np.arange(1, n_max + 1)
        out = 2.0j * (np.sin(n * self.phi) + a2 * np.sin((n - 2) * self.phi))
        out[0] = 2.0j * self.params.delta * math.sin(self.phi)
        return out

    @property
    def reflection(self) -> complex:
        a2 = self.params.alpha_sq
        return (a2 + np.exp(-2.0j * self.phi)) / (a2 + np.exp(2.0j * self.phi))


@dataclass(frozen=True)
class FourierCoefficients:
    """The weight-function coefficients T_N for a given handoff state.

    ``t_coeffs[N]`` holds T_N (entry 0 is the formal T_0 = 0).  The
    coefficients are complex in general; for handoffs carrying the
    i^(q-1) phase structure, i^(1-N) T_N is real.
    """

    t_coeffs: np.ndarray
    delta: float

    @property
    def n_max(self) -> int:
        return self.t_coeffs.size - 1

    def real_magnitudes(self) -> np.ndarray:
        """i^(1-N) T_N; real for phase-structured handoffs."""
        n = np.arange(self.t_coeffs.size)
        return np.conj(ipow(n - 1)) * self.t_coeffs


def _auto_n_max(support: int, alpha_sq: float) -> int:
    if alpha_sq <= 0.0:
        return support + 2
    # |T_N| tail decays like alpha^N = (alpha_sq)^(N/2)
    tail = 2 * math.ceil(math.log(SERIES_TOL) / math.log(alpha_sq)) + 4 \
        if alpha_sq < 1.0 else 8000
    return support + 2 + min(int(tail), 12000)


def compute_t_coefficients(handoff: HandoffState, params: ModelParams,
                           n_max: int | None = None) -> FourierCoefficients:
    """Forward recurrence T_1 = c_1(0), T_2 = delta c_2(0),
    T_N = delta c_N(0) - alpha^2 T_{N-2}."""
    amps = handoff.amplitudes
    support = int(np.max(np.nonzero(np.abs(amps) > 0)[0]) + 1) \
        if np.any(np.abs(amps) > 0) else 1
    if n_max is None:
        n_max = _auto_n_max(support, params.alpha_sq)
    if n_max < support:
        raise ValueError("n_max must cover the handoff support")
    c0 = np.zeros(n_max + 1, dtype=complex)
    c0[1: support + 1] = amps[:support]
    t = np.zeros(n_max + 1, dtype=complex)
    t[1] = c0[1]
    if n_max >= 2:
        t[2] = params.delta * c0[2]
    for nn in range(3, n_max + 1):
        t[nn] = params.delta * c0[nn] - params.alpha_sq * t[nn - 2]
    return FourierCoefficients(t_coeffs=t, delta=params.delta)


def _effective_cut(coeffs: FourierCoefficients) -> int:
    mags = np.abs(coeffs.t_coeffs)
    keep = np.nonzero(mags > SERIES_TOL)[0]
    if keep.size == 0:
        raise ValueError("all Fourier coefficients below tolerance")
    n_cut = int(keep[-1])
    if n_cut == coeffs.n_max and mags[n_cut] > 1e-10:
        raise ValueError("coefficient tail not converged; raise n_max")
    return n_cut


def exact_amplitude(coeffs: FourierCoefficients, params: ModelParams,
                    n: int, t_tilde: float) -> complex:
    """Site amplitude c_n(t~) from the Bessel series."""
    return exact_amplitudes(coeffs, params, [n], np.array([t_tilde]))[0, 0]


def exact_amplitudes(coeffs: FourierCoefficients, params: ModelParams,
                     sites, t_tilde: np.ndarray) -> np.ndarray:
    """c_n(t~) for each requested site over a time grid.

    Returns an array of shape (len(t_tilde), len(sites)).  The removable
    t~ = 0 singularity of the site-1 series is handled analytically
    (only T_1 survives).
    """
    sites = [int(s) for s in sites]
    if any(s < 1 for s in sites):
        raise ValueError("site indices are 1-based")
    t_tilde = np.asarray(t_tilde, dtype=float)
    if np.any(t_tilde < 0):
        raise ValueError("t_tilde must be >= 0")
    n_cut = _effective_cut(coeffs)
    t_n = coeffs.t_coeffs[1: n_cut + 1]
    n_idx = np.arange(1, n_cut + 1)
    order_max = n_cut + max(sites) + 2
    out = np.empty((t_tilde.size, len(sites)), dtype=complex)
    a2 = params.alpha_sq
    for i, tt in enumerate(t_tilde):
        calj = caligraphic_j_array(order_max, 2.0 * tt)
        for j, site in enumerate(sites):
            if site == 1:
                if tt == 0.0:
                    out[i, j] = t_n[0]
                else:
                    out[i, j] = np.sum(t_n * n_idx * calj[n_idx] / (1j * tt))
            else:
                term = (calj[np.abs(n_idx - site)] - calj[n_idx + site]
                        + a2 * (calj[np.abs(n_idx - site + 2)]
                                - calj[n_idx + site - 2]))
                out[i, j] = np.sum(t_n * term) / params.delta
    return out


def integral_i_pn(p: int, n_idx: int, t_tilde: float) -> complex:
    """I_{p,N} as the two-term Bessel difference."""
    if p < 1:
        raise ValueError("p must be >= 1")
    x = 2.0 * t_tilde
    return caligraphic_j(n_idx - p, x) - caligraphic_j(n_idx + p, x)


def integral_i_pn_sum(p: int, n_idx: int, t_tilde: float) -> complex:
    """I_{p,N} as the telescoped recurrence sum (t~ > 0)."""
    if p < 1:
        raise ValueError("p must be >= 1")
    if t_tilde <= 0.0:
        raise ValueError("telescoped form needs t_tilde > 0")
    x = 2.0 * t_tilde
    total = 0.0 + 0.0j
    for m in range(1, p + 1):
        k = n_idx + p + 1 - 2 * m
        total += (k / (1j * t_tilde)) * caligraphic_j(k, x)
    return total
