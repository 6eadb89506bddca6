#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Runs the same workloads through ``linegeo._kernels`` (Cython) and
``linegeo._kernels_py`` and reports wall times and speedups:

    python benchmarks/compare_backends.py [--repeat N]
"""

import argparse
import math
import time

from linegeo import _kernels_py

try:
    from linegeo import _kernels
except ImportError:
    _kernels = None


def time_call(fn, repeat):
    best = math.inf
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def workloads():
    yield (
        "radial blow-up (tol 1e-6)",
        lambda k: k.geod_integrate(0.0, 1.0, 10.0, 1e-6, 1e-8, 1e-14, 5_000_000),
        lambda out: f"{len(out[0])} samples",
    )
    yield (
        "oscillating orbit, t=100 (tol 1e-10)",
        lambda k: k.geod_integrate(
            0.4, 0.96j, 100.0, 1e-10, 1e-8, 1e-14, 5_000_000
        ),
        lambda out: f"{len(out[0])} samples",
    )
    yield (
        "travel-time series at R=0.9, x200",
        lambda k: [k.appell_f1(0.9, 1e-14, 10_000) for _ in range(200)][-1],
        lambda out: f"{out[1]} anti-diagonals",
    )


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3, help="timing repetitions")
    args = parser.parse_args()

    if _kernels is None:
        print("compiled extension not available; showing pure-Python times only\n")

    header = f"{'workload':45s} {'python':>10s} {'compiled':>10s} {'speedup':>8s}"
    print(header)
    print("-" * len(header))
    for name, call, describe in workloads():
        t_py, out_py = time_call(lambda: call(_kernels_py), args.repeat)
        if _kernels is not None:
            t_c, out_c = time_call(lambda: call(_kernels), args.repeat)
            print(
                f"{name:45s} {t_py * 1e3:8.2f}ms {t_c * 1e3:8.2f}ms "
                f"{t_py / t_c:7.1f}x   [{describe(out_c)}]"
            )
        else:
            print(f"{name:45s} {t_py * 1e3:8.2f}ms {'-':>10s} {'-':>8s}")


if __name__ == "__main__":
    main()
