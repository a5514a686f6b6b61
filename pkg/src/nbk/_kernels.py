"""Hot numeric loops, each with a numba and a pure-numpy implementation.

The numba versions are used when numba imports cleanly and the
environment variable ``NBK_DISABLE_NUMBA`` is unset (or ``0``).  Both
implementations are always importable so that tests and the benchmark
can compare them directly.
"""

from __future__ import annotations

import math
import os

import numpy as np

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover
    NUMBA_AVAILABLE = False

_flag = os.environ.get("NBK_DISABLE_NUMBA", "").strip().lower()
USE_NUMBA = NUMBA_AVAILABLE and _flag in ("", "0", "false", "no")


# -- scaled-float PMF recurrence -------------------------------------------
#
# Entry s holds P_{kr+s} = mant[s] * 2**expo[s] with mant in [0.5, 1).
# Power-of-two rescaling is exact, so the dynamic range is unlimited and
# only the k+4 roundings per step contribute error.


def scaled_recurrence_numpy(k, r, pows, q, m0, e0, length):
    mant = np.zeros(length, dtype=np.float64)
    expo = np.zeros(length, dtype=np.int64)
    if length == 0:
        return mant, expo
    mant[0] = m0
    expo[0] = e0
    js = np.arange(1, k + 1, dtype=np.float64)
    for s in range(1, length):
        jmax = min(k, s)
        eref = expo[s - 1]
        # window[j-1] = P_{kr+s-j}
        wm = mant[s - jmax:s][::-1]
        we = expo[s - jmax:s][::-1]
        coef = (s + js[:jmax] * (r - 1)) * pows[:jmax]
        acc = np.dot(coef, np.ldexp(wm, we - eref))
        m, e = np.frexp(q * acc / s)
        mant[s] = m
        expo[s] = eref + e
    return mant, expo


def _scaled_recurrence_py(k, r, pows, q, m0, e0, length):
    mant = np.zeros(length, dtype=np.float64)
    expo = np.zeros(length, dtype=np.int64)
    if length == 0:
        return mant, expo
    mant[0] = m0
    expo[0] = e0
    for s in range(1, length):
        jmax = min(k, s)
        eref = expo[s - 1]
        acc = 0.0
        for j in range(1, jmax + 1):
            acc += (s + j * (r - 1)) * pows[j - 1] * math.ldexp(
                mant[s - j], expo[s - j] - eref
            )
        m, e = math.frexp(q * acc / s)
        mant[s] = m
        expo[s] = eref + e
    return mant, expo


# -- non-overlapping run scanner -------------------------------------------


def scan_waiting_times_numpy(trials, k, r, max_samples):
    """Split a Bernoulli stream into waiting times for r runs of k successes.

    Returns ``(times, consumed)``: at most `max_samples` waiting times and
    the index just past the last completed waiting time.  Trials from
    `consumed` on belong to an unfinished sample.
    """
    t = np.asarray(trials, dtype=np.int8)
    edges = np.diff(np.concatenate(([0], t, [0])))
    starts = np.flatnonzero(edges == 1)
    ends = np.flatnonzero(edges == -1)
    nruns = (ends - starts) // k
    total = int(nruns.sum())
    if total < r:
        return np.zeros(0, dtype=np.int64), 0
    first = np.cumsum(nruns) - nruns
    rank = np.arange(total) - np.repeat(first, nruns)
    completions = np.repeat(starts, nruns) + k * (rank + 1) - 1
    sample_ends = completions[r - 1::r][:max_samples]
    times = np.diff(np.concatenate(([-1], sample_ends))).astype(np.int64)
    return times, int(sample_ends[-1]) + 1


def _scan_waiting_times_py(trials, k, r, max_samples):
    out = np.zeros(max_samples, dtype=np.int64)
    run = 0
    runs = 0
    start = 0
    count = 0
    for i in range(trials.size):
        if trials[i]:
            run += 1
            if run == k:
                run = 0
                runs += 1
                if runs == r:
                    out[count] = i + 1 - start
                    count += 1
                    start = i + 1
                    runs = 0
                    if count == max_samples:
                        break
        else:
            run = 0
    return out[:count], start


if NUMBA_AVAILABLE:
    scaled_recurrence_numba = njit(cache=True, nogil=True)(_scaled_recurrence_py)
    scan_waiting_times_numba = njit(cache=True, nogil=True)(_scan_waiting_times_py)
else:  # pragma: no cover
    scaled_recurrence_numba = None
    scan_waiting_times_numba = None


if USE_NUMBA:
    scaled_recurrence = scaled_recurrence_numba
    scan_waiting_times = scan_waiting_times_numba
else:
    scaled_recurrence = scaled_recurrence_numpy
    scan_waiting_times = scan_waiting_times_numpy
