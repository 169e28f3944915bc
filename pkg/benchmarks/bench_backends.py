#!/usr/bin/env python3
"""Benchmark the compiled kernels against their pure-Python twins.

Usage: python benchmarks/bench_backends.py [--steps N] [--batch M]
"""

import argparse
import math
import time

import numpy as np

from mprk22 import _kernels_py

try:
    from mprk22 import _kernels
except ImportError:
    _kernels = None


def best_of(fn, repeats=5):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--steps", type=int, default=100_000, help="trajectory length")
    parser.add_argument("--batch", type=int, default=1_000_000, help="stability batch size")
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    z_a = -rng.uniform(1e-6, 50.0, args.batch)
    z_b = -rng.uniform(1e-6, 50.0, args.batch)

    cases = {
        f"trajectory ({args.steps} steps)": lambda mod: mod.linear2x2_trajectory(
            25.0, 25.0, 0.5, 1.0, 4.0, 0.998, 0.002, args.steps
        ),
        f"r_ncs batch ({args.batch} points)": lambda mod: mod.r_ncs_batch(z_a, z_b, 0.7),
        f"r_cs batch ({args.batch} points)": lambda mod: mod.r_cs_batch(z_a + z_b, 0.7),
    }

    print(f"{'kernel':<32} {'python':>12} {'compiled':>12} {'speedup':>9}")
    for name, call in cases.items():
        t_py = best_of(lambda: call(_kernels_py))
        if _kernels is None:
            print(f"{name:<32} {t_py * 1e3:>10.2f}ms {'n/a':>12} {'n/a':>9}")
            continue
        t_c = best_of(lambda: call(_kernels))
        print(f"{name:<32} {t_py * 1e3:>10.2f}ms {t_c * 1e3:>10.2f}ms {t_py / t_c:>8.1f}x")
    if _kernels is None:
        print("\ncompiled kernels not built; run pip install -e . --no-build-isolation")


if __name__ == "__main__":
    main()
