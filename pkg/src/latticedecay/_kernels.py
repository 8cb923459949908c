"""Hot propagation kernels: Crank-Nicolson steps on the tridiagonal chain.

Two interchangeable implementations of the same step loop:

* a numba ``@njit`` kernel doing an explicit Thomas solve per step, and
* a numpy/scipy fallback calling ``solve_banded`` per step.

The numba path is used when available; set ``LATTICEDECAY_NO_NUMBA=1``
to force the fallback.  ``benchmarks/bench_propagator.py`` compares the
two.

Each Crank-Nicolson step solves

    (I + i h/2 H(t_mid)) psi' = (I - i h/2 H(t_mid)) psi

where H is the chain Hamiltonian with first-link coupling g1 evaluated
at the step midpoint.  The Cayley form is exactly norm-preserving up to
linear-solve roundoff.
"""

from __future__ import annotations

import os

import numpy as np

_ENV_FLAG = "LATTICEDECAY_NO_NUMBA"


def numba_disabled() -> bool:
    return os.environ.get(_ENV_FLAG, "0") not in ("", "0")


def numba_available() -> bool:
    if numba_disabled():
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def _cn_run_fallback(psi: np.ndarray, g1_mid: np.ndarray, h: float,
                     stride: int, out: np.ndarray) -> None:
    """Reference path: one banded LAPACK solve per step."""
    from scipy.linalg import solve_banded

    n = psi.size
    ihalf = 0.5j * h
    ab = np.zeros((3, n), dtype=complex)
    ab[1, :] = 1.0
    ab[0, 2:] = -ihalf          # upper diagonal, bulk bonds
    ab[2, 1: n - 1] = -ihalf    # lower diagonal, bulk bonds
    k = 0
    rhs = np.empty(n, dtype=complex)
    for step in range(g1_mid.size):
        g1 = g1_mid[step]
        a0 = -ihalf * g1
        b0 = ihalf * g1
        ab[0, 1] = a0
        ab[2, 0] = a0
        rhs[1:-1] = psi[1:-1] + ihalf * (psi[:-2] + psi[2:])
        rhs[0] = psi[0] + b0 * psi[1]
        rhs[1] = psi[1] + b0 * psi[0] + ihalf * psi[2]
        rhs[-1] = psi[-1] + ihalf * psi[-2]
        psi[:] = solve_banded((1, 1), ab, rhs, check_finite=False)
        if (step + 1) % stride == 0:
            out[k] = psi
            k += 1


def _make_numba_kernel():
    from numba import njit

    @njit(cache=True, nogil=True)
    def _cn_run_numba(psi, g1_mid, h, stride, out):  # pragma: no cover
        n = psi.shape[0]
        ihalf = 0.5j * h
        rhs = np.empty(n, dtype=np.complex128)
        cp = np.empty(n - 1, dtype=np.complex128)
        k = 0
        for step in range(g1_mid.shape[0]):
            g1 = g1_mid[step]
            a0 = -ihalf * g1     # first bond, matrix A = I + i h/2 H
            a = -ihalf           # bulk bonds
            # rhs = (I - i h/2 H) psi
            rhs[0] = psi[0] + ihalf * g1 * psi[1]
            rhs[1] = psi[1] + ihalf * g1 * psi[0] + ihalf * psi[2]
            for j in range(2, n - 1):
                rhs[j] = psi[j] + ihalf * (psi[j - 1] + psi[j + 1])
            rhs[n - 1] = psi[n - 1] + ihalf * psi[n - 2]
            # Thomas solve of A psi' = rhs (unit diagonal, symmetric
            # off-diagonal: a0 on bond 0, a elsewhere)
            cp[0] = a0
            psi[0] = rhs[0]
            prev_off = a0
            for j in range(1, n):
                denom = 1.0 - prev_off * cp[j - 1]
                if j < n - 1:
                    cp[j] = a / denom
                psi[j] = (rhs[j] - prev_off * psi[j - 1]) / denom
                prev_off = a
            for j in range(n - 2, -1, -1):
                psi[j] = psi[j] - cp[j] * psi[j + 1]
            if (step + 1) % stride == 0:
                out[k] = psi
                k += 1

    return _cn_run_numba


_numba_kernel = None


def cn_run(psi: np.ndarray, g1_mid: np.ndarray, h: float, stride: int,
           out: np.ndarray, use_numba: bool | None = None) -> None:
    """Advance ``psi`` in place through len(g1_mid) CN steps of size h,
    writing a sample into ``out`` every ``stride`` steps."""
    global _numba_kernel
    if g1_mid.size % stride != 0 or out.shape[0] != g1_mid.size // stride:
        raise ValueError("step count must be an integer multiple of stride "
                         "matching the output array")
    if use_numba is None:
        use_numba = numba_available()
    if use_numba:
        if _numba_kernel is None:
            _numba_kernel = _make_numba_kernel()
        _numba_kernel(psi, np.ascontiguousarray(g1_mid, dtype=np.float64),
                      float(h), int(stride), out)
    else:
        _cn_run_fallback(psi, g1_mid, h, stride, out)
