#!/usr/bin/env python3
"""Throughput comparison of the compiled and pure-Python sampling kernels.

Runs the CHSH pair sampler on both backends, checks that the aggregated
counts are identical, and reports trials/second and the speedup.

    python benchmarks/bench_kernels.py [--trials N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from blcsim import kernels
from blcsim.quantum import OPTIMAL_CHSH_AXES, singlet


def bench(backend: str, trials: int, seed: int) -> tuple[float, np.ndarray]:
    amps = singlet().amplitudes
    axes_a, axes_b = OPTIMAL_CHSH_AXES
    t0 = time.perf_counter()
    counts = kernels.sample_pair_counts(
        amps, axes_a, (0.5, 0.5), axes_b, (0.5, 0.5),
        first_b=False, seed=seed, n_trials=trials, backend=backend,
    )
    return time.perf_counter() - t0, counts


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=1_000_000)
    parser.add_argument("--seed", type=int, default=123)
    args = parser.parse_args()

    backends = kernels.available_backends()
    print(f"active backend: {kernels.backend_name()}")
    results = {}
    for name in sorted(backends):
        # Python fallback gets a proportionally smaller run, scaled up.
        n = args.trials if name == "compiled" else max(args.trials // 20, 10_000)
        elapsed, counts = bench(name, n, args.seed)
        rate = n / elapsed
        results[name] = rate
        print(f"{name:>8}: {n:>9} trials in {elapsed:7.3f}s  ({rate:,.0f} trials/s)")

    if {"python", "compiled"} <= set(backends):
        n_check = 100_000
        _, c_py = bench("python", n_check, args.seed)
        _, c_cy = bench("compiled", n_check, args.seed)
        identical = np.array_equal(c_py, c_cy)
        print(f"counts identical over {n_check} trials: {identical}")
        print(f"speedup: {results['compiled'] / results['python']:.1f}x")
        return 0 if identical else 1
    print("only one backend available; no comparison run")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
