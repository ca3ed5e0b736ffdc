"""Benchmark the numba kernels against the pure-numpy fallback.

Run: python benchmarks/bench_kernels.py [n_samples]

The first numba call compiles (or loads the on-disk cache); compilation
is excluded by warming every kernel before timing.
"""

import sys
import time

import numpy as np

from crossarray import kernels


def time_call(fn, *args, repeats=20):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 2_000_000
    rng = np.random.default_rng(0)
    series = rng.normal(size=(n, 3))
    rel = rng.normal(size=(n, 3)) + 5.0
    vel = rng.normal(size=(n, 3))
    x = rng.normal(size=n) + 10.0
    valid = rng.random(n) > 0.2

    cases = [
        ("diff_central", kernels.diff_central, (series, 0.01)),
        ("bearing_kinematics", kernels.bearing_kinematics, (rel, vel, 1e-6)),
        ("windowed_rel_std", kernels.windowed_rel_std, (x, valid, 25, 5)),
    ]

    if not kernels.HAS_NUMBA:
        print("numba not importable; timing the numpy path only")

    print(f"n = {n} samples, best of 20")
    header = f"{'kernel':<22}{'numpy':>12}"
    if kernels.HAS_NUMBA:
        header += f"{'numba':>12}{'speedup':>10}"
    print(header)
    for name, fn, args in cases:
        with kernels.use_backend("numpy"):
            t_np = time_call(fn, *args)
        row = f"{name:<22}{t_np * 1e3:>10.2f}ms"
        if kernels.HAS_NUMBA:
            with kernels.use_backend("numba"):
                fn(*args)  # compile / load cache before timing
                t_nb = time_call(fn, *args)
            row += f"{t_nb * 1e3:>10.2f}ms{t_np / t_nb:>9.2f}x"
        print(row)


if __name__ == "__main__":
    main()
