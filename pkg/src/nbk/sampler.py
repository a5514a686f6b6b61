"""Monte Carlo waiting times for r non-overlapping runs of k successes.

Trials come from numpy's PCG64 generator.  Consecutive waiting times are
cut from one long Bernoulli stream: after the r-th run completes the next
sample starts on the following trial with all counters at zero, which is
exactly a fresh start.  For parallel batches, derive one child seed per
batch with ``numpy.random.SeedSequence(seed).spawn(n_batches)`` and merge
the histograms with :func:`merge_histograms`; merging is associative and
order independent.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from . import _kernels
from .core import Params, pmf_table
from .errors import SimulationCapExceeded

TRIAL_CAP = 10**9
_MAX_CHUNK = 1 << 24


def mean_waiting_time(params: Params) -> Fraction:
    """E[X] = r (1 - p^k) / (q p^k)."""
    pk = params.p**params.k
    return params.r * (1 - pk) / (params.q * pk)


def _as_generator(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def sample_waiting_times(
    params: Params, size: int, seed=None, *, trial_cap: int = TRIAL_CAP
) -> np.ndarray:
    """Draw `size` independent waiting times as an int64 array."""
    if size < 0:
        raise ValueError("size must be >= 0")
    rng = _as_generator(seed)
    p = float(params.p)
    mean = float(mean_waiting_time(params))
    out = np.empty(size, dtype=np.int64)
    filled = 0
    carry = np.zeros(0, dtype=bool)
    used = 0
    while filled < size:
        want = min(_MAX_CHUNK, math.ceil((size - filled) * mean * 1.1) + 1024)
        if used + want > trial_cap:
            want = trial_cap - used
            if want <= 0:
                raise SimulationCapExceeded(
                    f"more than {trial_cap} Bernoulli trials without finishing"
                )
        used += want
        trials = np.concatenate((carry, rng.random(want) < p))
        times, consumed = _kernels.scan_waiting_times(trials, params.k, params.r, size - filled)
        out[filled:filled + times.size] = times
        filled += times.size
        carry = trials[consumed:]
    return out


def sample_waiting_time(params: Params, seed=None) -> int:
    """One waiting time.  Pass a Generator to continue an existing stream."""
    return int(sample_waiting_times(params, 1, seed)[0])


@dataclass
class EmpiricalDist:
    params: Params
    sample_count: int
    histogram: dict[int, int]
    seed: int | None
    tv_distance: float = field(default=math.nan)

    def argmax(self) -> int:
        return max(self.histogram, key=lambda n: (self.histogram[n], -n))


def merge_histograms(hists: Iterable[dict[int, int]]) -> dict[int, int]:
    total = Counter()
    for h in hists:
        total.update(h)
    return dict(sorted(total.items()))


def total_variation(histogram: dict[int, int], params: Params, n_cap: int) -> float:
    """1/2 sum |empirical - exact| over n <= n_cap, with mass above n_cap lumped."""
    count = sum(histogram.values())
    table = pmf_table(params, max(n_cap, params.kr), method="float")
    exact = table.floats()
    emp = np.zeros(exact.size)
    beyond = 0
    for n, c in histogram.items():
        if n > n_cap:
            beyond += c
        else:
            emp[n - params.kr] = c / count
    exact_beyond = 1.0 - math.fsum(exact)
    return 0.5 * (math.fsum(np.abs(emp - exact)) + abs(beyond / count - exact_beyond))


def empirical_pmf(
    params: Params, sample_count: int, seed: int | None = None, n_cap: int | None = None
) -> EmpiricalDist:
    """Histogram of `sample_count` simulated waiting times and its TV distance
    to the exact PMF on [kr, n_cap] (default: the largest value sampled)."""
    if sample_count < 1:
        raise ValueError("sample_count must be >= 1")
    times = sample_waiting_times(params, sample_count, seed)
    values, counts = np.unique(times, return_counts=True)
    hist = {int(v): int(c) for v, c in zip(values, counts)}
    if n_cap is None:
        n_cap = int(values[-1])
    tv = total_variation(hist, params, n_cap)
    return EmpiricalDist(params, sample_count, hist, seed, tv)
