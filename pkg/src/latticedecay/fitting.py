"""Fits on survival-probability series: decay rates, power-law
envelopes, and oscillation node geometry."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class FitError(ValueError):
    """Window or data unsuitable for the requested fit."""


@dataclass(frozen=True)
class FitResult:
    kind: str
    value: float
    stderr: float
    window: tuple[float, float]
    residual_norm: float
    extras: dict = field(default_factory=dict)


def _window_mask(t: np.ndarray, window) -> np.ndarray:
    lo, hi = window
    mask = (t >= lo) & (t <= hi)
    if np.count_nonzero(mask) < 10:
        raise FitError("window contains fewer than 10 samples")
    return mask


def _line_fit(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    """Least-squares slope with stderr and RMS residual."""
    coeffs, cov = np.polyfit(x, y, 1, cov=True)
    resid = y - np.polyval(coeffs, x)
    rms = float(np.sqrt(np.mean(resid ** 2)))
    return float(coeffs[0]), float(np.sqrt(cov[0, 0])), rms


def fit_exponential_rate(t: np.ndarray, p: np.ndarray, window) -> FitResult:
    """Slope of ln P(t); value is the decay rate gamma (positive for
    decaying signals)."""
    mask = _window_mask(np.asarray(t, float), window)
    pw = np.asarray(p, float)[mask]
    if np.any(pw <= 0.0):
        raise FitError("non-positive samples in the fit window")
    slope, err, rms = _line_fit(np.asarray(t, float)[mask], np.log(pw))
    return FitResult(kind="exponential-rate", value=-slope, stderr=err,
                     window=tuple(window), residual_norm=rms)


def envelope_maxima(t: np.ndarray, p: np.ndarray,
                    window=None) -> tuple[np.ndarray, np.ndarray]:
    """Local maxima of P(t), used as envelope samples away from nodes."""
    t = np.asarray(t, float)
    p = np.asarray(p, float)
    if window is not None:
        mask = (t >= window[0]) & (t <= window[1])
        t, p = t[mask], p[mask]
    idx = np.nonzero((p[1:-1] > p[:-2]) & (p[1:-1] >= p[2:]))[0] + 1
    return t[idx], p[idx]


def fit_powerlaw_envelope(t: np.ndarray, p: np.ndarray, window) -> FitResult:
    """Log-log slope of the oscillation envelope (expected -3)."""
    tm, pm = envelope_maxima(t, p, window)
    if tm.size < 5:
        raise FitError("fewer than 5 envelope maxima in the window")
    slope, err, rms = _line_fit(np.log(tm), np.log(pm))
    return FitResult(kind="powerlaw-slope", value=slope, stderr=err,
                     window=tuple(window), residual_norm=rms,
                     extras={"n_maxima": int(tm.size)})


def _nodes_from_signed(t: np.ndarray, x: np.ndarray) -> np.ndarray:
    sign = np.sign(x)
    idx = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    frac = x[idx] / (x[idx] - x[idx + 1])
    return t[idx] + frac * (t[idx + 1] - t[idx])


def _nodes_from_probability(t: np.ndarray, p: np.ndarray) -> np.ndarray:
    idx = np.nonzero((p[1:-1] < p[:-2]) & (p[1:-1] <= p[2:]))[0] + 1
    nodes = []
    for i in idx:
        denom = p[i - 1] - 2.0 * p[i] + p[i + 1]
        if denom <= 0.0:
            continue
        # parabolic vertex; P ~ quadratic near a node
        shift = 0.5 * (p[i - 1] - p[i + 1]) / denom
        nodes.append(t[i] + shift * (t[i + 1] - t[i]))
    return np.asarray(nodes)


def fit_oscillation(t: np.ndarray, series: np.ndarray, window,
                    rise_time: float = 0.0) -> FitResult:
    """Node geometry of the asymptotic oscillation.

    Accepts either a signed/complex amplitude series (nodes = zero
    crossings) or a probability series (nodes = interpolated minima).
    Returns the extracted phase Phi from matching node positions to
    2 t~ - pi/4 + Phi = k pi, with node positions and spacing in
    ``extras``.  Amplitude nodes are spaced pi/2 in t~.
    """
    t = np.asarray(t, float)
    mask = (t >= window[0]) & (t <= window[1])
    tw = t[mask]
    xw = np.asarray(series)[mask]
    if np.iscomplexobj(xw):
        re, im = xw.real, xw.imag
        xw = re if np.max(np.abs(re)) >= np.max(np.abs(im)) else im
    if np.any(xw < 0.0):
        nodes = _nodes_from_signed(tw, xw)
    else:
        nodes = _nodes_from_probability(tw, xw)
    if nodes.size < 4:
        raise FitError("fewer than 4 nodes in the window")
    spacing = np.diff(nodes)
    # phase of each node, folded into (-pi/2, pi/2]
    phi = np.mod(0.25 * math.pi - 2.0 * (nodes - rise_time), math.pi)
    phi[phi > 0.5 * math.pi] -= math.pi
    # unfold around the median to avoid averaging across the branch cut
    med = np.median(phi)
    phi[phi - med > 0.5 * math.pi] -= math.pi
    phi[med - phi > 0.5 * math.pi] += math.pi
    value = float(np.mean(phi))
    stderr = float(np.std(phi) / math.sqrt(phi.size))
    return FitResult(kind="node-phase", value=value, stderr=stderr,
                     window=tuple(window),
                     residual_norm=float(np.std(phi)),
                     extras={"nodes": nodes,
                             "spacing": float(np.mean(spacing)),
                             "spacing_std": float(np.std(spacing))})
