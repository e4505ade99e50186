"""Benchmark the compiled scalar kernels against the pure-numpy fallback.

Run from the repository root:

    python3 benchmarks/bench_kernels.py

The active backend is chosen at import time by TERRASIM_NUMBA; this script
bypasses the alias and times both families directly, so one invocation
covers both paths (including numba compile/warmup, reported separately).
"""
import math
import time

import numpy as np

from terrasim import _kernels
from terrasim.soil import load_preset

R, B = 0.33, 0.24


def packed(soil):
    return (R, B, soil.k_c / B + soil.k_phi, soil.n, soil.c,
            math.tan(soil.phi), soil.k_x, soil.k_y,
            soil.a0, soil.a1, soil.b0, soil.b1)


def bench(fn, cases, repeat):
    t0 = time.perf_counter()
    for _ in range(repeat):
        for args in cases:
            fn(*args)
    return (time.perf_counter() - t0) / (repeat * len(cases))


def main():
    clay, _ = load_preset("clay")
    sand, _ = load_preset("sand")
    rng = np.random.default_rng(0)

    quad_cases = []
    solve_cases = []
    for soil in (clay, sand):
        args = packed(soil)
        for _ in range(50):
            h = rng.uniform(0.005, 0.25)
            s = rng.uniform(0.0, 0.3)
            tb = rng.uniform(-0.5, 0.5)
            quad_cases.append((h, s, tb, *args))
            solve_cases.append((rng.uniform(500.0, 6000.0), s, tb, *args, 0.0))

    print(f"numba backend active: {_kernels.NUMBA_ENABLED}")
    if _kernels.NUMBA_ENABLED:
        t0 = time.perf_counter()
        _kernels.force_integrals_scalar(*quad_cases[0])
        _kernels.wheel_forces_scalar(*solve_cases[0])
        print(f"numba warmup (compile or cache load): "
              f"{time.perf_counter() - t0:.2f} s")

    rows = [
        ("force_integrals", _kernels.force_integrals_scalar,
         _kernels.force_integrals_numpy, quad_cases, 200),
        ("wheel_forces (sinkage solve)", _kernels.wheel_forces_scalar,
         _kernels.wheel_forces_numpy, solve_cases, 20),
    ]
    print(f"{'kernel':32s} {'scalar/njit':>14s} {'numpy':>14s} {'speedup':>9s}")
    for name, scalar_fn, numpy_fn, cases, repeat in rows:
        if not _kernels.NUMBA_ENABLED:
            name += " (scalar uninjitted)"
        t_scalar = bench(scalar_fn, cases, repeat)
        t_numpy = bench(numpy_fn, cases, repeat)
        print(f"{name:32s} {t_scalar * 1e6:11.1f} us {t_numpy * 1e6:11.1f} us"
              f" {t_numpy / t_scalar:8.1f}x")


if __name__ == "__main__":
    main()
