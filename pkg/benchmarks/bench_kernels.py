#!/usr/bin/env python
"""Time the numba kernels against their numpy fallbacks.

Usage:
    python benchmarks/bench_kernels.py
    python benchmarks/bench_kernels.py --lengths 1000 10000 --trials 1000000
    python benchmarks/bench_kernels.py --output bench.json
"""

import argparse
import json
import time

import numpy as np

from nbk import _kernels
from nbk.core import LogProb, validate_params


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def recurrence_args(k, r, p):
    params = validate_params(k, r, p)
    pows = np.array([float(params.p ** (j - 1)) for j in range(1, k + 1)])
    start = LogProb.from_fraction(params.p ** params.kr)
    return (k, r, pows, float(params.q), start.mantissa, start.exponent)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--lengths", type=int, nargs="+", default=[1_000, 10_000, 100_000])
    parser.add_argument("--trials", type=int, nargs="+", default=[1_000_000, 10_000_000])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--output", help="also write results as JSON")
    args = parser.parse_args()

    if not _kernels.NUMBA_AVAILABLE:
        raise SystemExit("numba is not installed; nothing to compare")

    rec = recurrence_args(5, 3, "1/10")
    rng = np.random.Generator(np.random.PCG64(0))

    # compile outside the timed region
    _kernels.scaled_recurrence_numba(*rec, 10)
    _kernels.scan_waiting_times_numba(rng.random(100) < 0.5, 2, 2, 10)

    rows = []
    for n in args.lengths:
        t_nb = best_of(lambda: _kernels.scaled_recurrence_numba(*rec, n), args.repeat)
        t_np = best_of(lambda: _kernels.scaled_recurrence_numpy(*rec, n), args.repeat)
        rows.append({"kernel": "scaled_recurrence", "size": n, "numba_s": t_nb, "numpy_s": t_np})

    for n in args.trials:
        trials = rng.random(n) < 0.5
        t_nb = best_of(lambda: _kernels.scan_waiting_times_numba(trials, 2, 2, n), args.repeat)
        t_np = best_of(lambda: _kernels.scan_waiting_times_numpy(trials, 2, 2, n), args.repeat)
        rows.append({"kernel": "scan_waiting_times", "size": n, "numba_s": t_nb, "numpy_s": t_np})

    print(f"{'kernel':<20} {'size':>10} {'numba [s]':>12} {'numpy [s]':>12} {'speedup':>9}")
    for row in rows:
        speedup = row["numpy_s"] / row["numba_s"]
        print(f"{row['kernel']:<20} {row['size']:>10} {row['numba_s']:>12.5f} "
              f"{row['numpy_s']:>12.5f} {speedup:>8.1f}x")

    if args.output:
        with open(args.output, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
