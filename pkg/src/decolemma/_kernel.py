"""Low-level phase-sum evaluation shared by ``rlsum`` and ``dft``.

All sums go through :func:`compensated_sum`, a pairwise reduction in which
every addition is an error-free transformation (TwoSum); the rounding errors
of each level are collected and added back at the end.
"""
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

THREADS_ENV = "DECOLEMMA_THREADS"

# complex elements per evaluation block (times x grid points)
_BLOCK_ELEMENTS = 1 << 20


def thread_count():
    """Worker count for time sweeps, capped by ``DECOLEMMA_THREADS``."""
    cap = os.environ.get(THREADS_ENV)
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            pass
    return n


def _two_sum(a, b):
    s = a + b
    bp = s - a
    err = (a - (s - bp)) + (b - bp)
    return s, err


def compensated_sum(x, axis=-1):
    """Sum ``x`` along ``axis`` with error-free pairwise accumulation.

    Works for real and complex input; complex addition is componentwise, so
    TwoSum applies to both parts at once.
    """
    x = np.moveaxis(np.asarray(x), axis, -1)
    if not np.iscomplexobj(x):
        x = x.astype(float, copy=False)
    if x.shape[-1] == 0:
        return np.zeros(x.shape[:-1], dtype=x.dtype)[()]
    err = np.zeros(x.shape[:-1], dtype=x.dtype)
    while x.shape[-1] > 1:
        if x.shape[-1] % 2:
            pad = np.zeros(x.shape[:-1] + (1,), dtype=x.dtype)
            x = np.concatenate([x, pad], axis=-1)
        s, e = _two_sum(x[..., 0::2], x[..., 1::2])
        err = err + e.sum(axis=-1)
        x = s
    return (x[..., 0] + err)[()]


def phase_sums(values, n_intervals, times):
    """Evaluate (1/N) sum_j f_j exp(i j t / N) for every t in ``times``.

    ``values`` holds f_0..f_N.  Returns a complex array shaped like ``times``.
    """
    values = np.asarray(values, dtype=complex)
    times = np.asarray(times, dtype=float)
    flat = times.ravel()
    out = np.empty(flat.shape, dtype=complex)
    if flat.size == 0:
        return out.reshape(times.shape)
    j = np.arange(values.size, dtype=float)
    chunk = max(1, _BLOCK_ELEMENTS // values.size)

    def work(start):
        t = flat[start:start + chunk]
        phase = np.exp(1j * (np.outer(t, j) / n_intervals))
        out[start:start + chunk] = compensated_sum(phase * values, axis=-1) / n_intervals

    starts = range(0, flat.size, chunk)
    workers = thread_count()
    if workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(work, starts))
    else:
        for s in starts:
            work(s)
    return out.reshape(times.shape)
