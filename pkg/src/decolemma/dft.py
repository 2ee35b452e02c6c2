"""The discrete Riemann-Lebesgue sum read as a Fourier transform in t.

R_D(t) = (1/N) sum_j f(x_j) exp(i x_j t) is the DFT of the samples f(x_j)
evaluated at a continuous time argument.  :func:`dft_at` evaluates it at one
point; :func:`sweep` evaluates it on many, switching to an FFT or a chirp-z
transform when the times are equispaced.  Every fast result is spot-checked
against direct evaluation and discarded on mismatch, so the contract of
:func:`sweep` is equivalence with the direct sum, not speed.
"""
import csv
import io
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import czt

from . import _kernel
from .errors import ValidationError

LOGGER = logging.getLogger(__name__)

SPOT_CHECKS = 8
SPOT_TOLERANCE = 1e-10
PARSEVAL_TOLERANCE = 1e-9
# below this many times the direct path is cheaper than setting up a transform
MIN_FAST_TIMES = 32


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Values of a function of dimensionless time on increasing times."""

    times: np.ndarray
    values: np.ndarray
    method: str = field(default="direct", compare=False)

    def __post_init__(self):
        t = np.array(self.times, dtype=float).ravel()
        v = np.array(self.values).ravel()
        if t.size != v.size:
            raise ValidationError("times and values differ in length")
        if t.size > 1 and np.any(np.diff(t) <= 0):
            raise ValidationError("times must be strictly increasing")
        t.flags.writeable = False
        v.flags.writeable = False
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.times.size

    @property
    def magnitude(self):
        return np.abs(self.values)

    def write_csv(self, stream):
        """Write ``t,re,im,abs`` rows with 17 significant digits."""
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(["t", "re", "im", "abs"])
        vals = self.values.astype(complex)
        for t, v in zip(self.times, vals):
            writer.writerow([f"{t:.17g}", f"{v.real:.17g}", f"{v.imag:.17g}", f"{abs(v):.17g}"])

    def to_csv(self):
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()


def dft_at(sf, t):
    """Evaluate the transform of ``sf`` at dimensionless time ``t``."""
    t = float(t)
    if not np.isfinite(t):
        raise ValidationError("t must be finite")
    return complex(_kernel.phase_sums(sf.values, sf.n_intervals, np.array([t]))[0])


def _equispaced(times):
    """Return (t0, h) when ``times`` lie on t0 + m h, else None."""
    if times.size < 2:
        return None
    t0 = times[0]
    h = (times[-1] - t0) / (times.size - 1)
    if h <= 0:
        return None
    ideal = t0 + h * np.arange(times.size)
    if np.max(np.abs(times - ideal)) > 1e-12 * max(1.0, float(np.max(np.abs(times)))):
        return None
    return t0, h


def _canonical_length(n, t0, h):
    """FFT length L when h = 2 pi N / L and t0 is a multiple of h."""
    ratio = 2 * np.pi * n / h
    length = round(ratio)
    if length < 1 or abs(ratio - length) > 1e-9 * ratio:
        return None
    m0 = t0 / h
    if abs(m0 - round(m0)) > 1e-9 * max(1.0, abs(m0)):
        return None
    return length


def _fold(values, length):
    folded = np.zeros(length, dtype=complex)
    np.add.at(folded, np.arange(values.size) % length, values)
    return folded


def parseval_residual(values, length=None):
    """Relative violation of sum_m |G_m|^2 = L sum_j |g_j|^2.

    ``values`` are folded modulo ``length`` (default: N, the number of
    intervals, which gives the transform on t_m = 2 pi m) before the FFT.
    """
    values = np.asarray(values, dtype=complex)
    if length is None:
        length = max(values.size - 1, 1)
    g = _fold(values, length)
    big_g = np.fft.fft(g)
    lhs = float(np.sum(np.abs(big_g) ** 2))
    rhs = float(length * np.sum(np.abs(g) ** 2))
    if rhs == 0.0:
        return abs(lhs)
    return abs(lhs - rhs) / rhs


def _fft_path(values, n, t0, h, count, length):
    g = _fold(values, length)
    if parseval_residual(g, length) > PARSEVAL_TOLERANCE:
        return None
    spectrum = length * np.fft.ifft(g)
    m0 = int(round(t0 / h))
    idx = (m0 + np.arange(count)) % length
    return spectrum[idx] / n


def _czt_path(values, n, t0, h, count):
    w = np.exp(1j * h / n)
    a = np.exp(-1j * t0 / n)
    return czt(values, m=count, w=w, a=a) / n


def _spot_check(sf, times, fast, rng):
    scale = max(sf.l1_weight(), np.finfo(float).tiny)
    picks = rng.choice(times.size, size=min(SPOT_CHECKS, times.size), replace=False)
    ref = _kernel.phase_sums(sf.values, sf.n_intervals, times[picks])
    return float(np.max(np.abs(fast[picks] - ref)) / scale) <= SPOT_TOLERANCE


def sweep(sf, times, fast=True, seed=0):
    """Evaluate R_D at every time in ``times``.

    Parameters
    ----------
    sf : SampledFunction
    times : array_like of float
        Strictly increasing dimensionless times.
    fast : bool
        Allow the FFT / chirp-z path for equispaced times.
    seed : int
        Seed for choosing spot-check times; results never depend on it.

    Returns
    -------
    TimeSeries
        ``method`` is ``"fft"``, ``"czt"`` or ``"direct"``.
    """
    times = np.asarray(times, dtype=float).ravel()
    if not np.all(np.isfinite(times)):
        raise ValidationError("times must be finite")
    if times.size > 1 and np.any(np.diff(times) <= 0):
        raise ValidationError("times must be strictly increasing")
    n = sf.n_intervals
    if fast and times.size >= MIN_FAST_TIMES:
        grid = _equispaced(times)
        if grid is not None:
            t0, h = grid
            length = _canonical_length(n, t0, h)
            if length is not None:
                values, method = _fft_path(sf.values, n, t0, h, times.size, length), "fft"
            else:
                values, method = _czt_path(sf.values, n, t0, h, times.size), "czt"
            rng = np.random.default_rng(seed)
            if values is not None and _spot_check(sf, times, values, rng):
                return TimeSeries(times, values, method)
            LOGGER.warning("fast %s path failed its spot check; using direct sums", method)
    values = _kernel.phase_sums(sf.values, n, times)
    return TimeSeries(times, values, "direct")
