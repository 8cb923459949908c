"""Benchmark: numba kernel vs pure-numpy/scipy fallback propagator.

Run:  python3 benchmarks/bench_propagator.py [--t-max 50] [--repeats 3]

The numba path is timed twice; the first call includes JIT compilation
and is reported separately.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from latticedecay import ModelParams, PropagatorConfig, SwitchingProfile
from latticedecay import _kernels
from latticedecay.propagator import propagate


def _time_run(use_numba: bool, t_max: float, repeats: int) -> list[float]:
    params = ModelParams(0.3)
    profile = SwitchingProfile.linear(0.3, 1.0)
    config = PropagatorConfig(step=1e-3, t_max=t_max)
    out = []
    for _ in range(repeats):
        start = time.perf_counter()
        propagate(np.array([1.0]), profile, params, config,
                  use_numba=use_numba)
        out.append(time.perf_counter() - start)
    return out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--t-max", type=float, default=50.0)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    print(f"chain propagation to t = {args.t_max} (step 1e-3)")
    fallback = _time_run(False, args.t_max, args.repeats)
    print(f"fallback (scipy banded): best {min(fallback):.3f} s "
          f"of {args.repeats}")
    if not _kernels.numba_available():
        print("numba unavailable or disabled "
              "(LATTICEDECAY_NO_NUMBA); skipping jit timing")
        return
    warm = _time_run(True, args.t_max, 1)[0]
    jit = _time_run(True, args.t_max, args.repeats)
    print(f"numba first call (includes jit): {warm:.3f} s")
    print(f"numba warm: best {min(jit):.3f} s of {args.repeats}")
    print(f"speedup (warm vs fallback): {min(fallback) / min(jit):.1f}x")


if __name__ == "__main__":
    main()
