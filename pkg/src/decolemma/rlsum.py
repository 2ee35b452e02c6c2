"""The discrete Riemann-Lebesgue sum, its cancellation diagnostics and the
lemma-based decoherence verdict.

R_D(t) = sum_{j=0}^{N} (1/N) f(j/N) exp(i t j/N).

Note the weights: N + 1 terms of weight 1/N, so R_D(0) = (N+1)/N for f = 1.
This convention is kept everywhere.
"""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernel
from .dft import sweep
from .errors import NotInL1Class, ValidationError, WindowEmpty, WindowViolation
from .quasicont import DEFAULT_MIN_P, GLOBAL, decompose

DEFAULT_ETA = 0.1
DEFAULT_KAPPA = 10.0
DEFAULT_EPSILON = 0.1
DEFAULT_TIME_SAMPLES = 512

DECOHERES = "Decoheres"
NO_DECOHERENCE = "NoDecoherence"
INCONCLUSIVE = "Inconclusive"

# reason codes carried by verdicts
WITHIN_BOUND = "WithinBound"
EXCEEDS_BOUND = "ExceedsBound"
NOT_IN_L1 = "NotInL1Class"
WINDOW_EMPTY = "WindowEmpty"


@dataclass(frozen=True)
class TimeWindow:
    """Dimensionless interval [kappa * pi, pi * P]."""

    t_low: float
    t_high: float
    kappa: float

    def __contains__(self, t):
        return self.t_low <= t <= self.t_high

    def times(self, count):
        """``count`` log-spaced times spanning the window."""
        if self.t_low == self.t_high:
            return np.array([self.t_low])
        return np.geomspace(self.t_low, self.t_high, count)


@dataclass(frozen=True)
class CancellationReport:
    """Pairing of grid points whose cosine terms cancel at time ``t``.

    ``pairs`` holds (i, k) with x_k the grid point nearest x_i + pi/t;
    ``deltas[i]`` is the phase defect x_k t - x_i t - pi for each paired
    ``i`` and NaN elsewhere.  ``delta_min`` is the defect of smallest
    magnitude (signed), or NaN when nothing pairs.
    """

    t: float
    offset: float
    pairs: tuple
    uncancelled: tuple
    deltas: np.ndarray
    delta_min: float

    @property
    def partner(self):
        """Map from every paired index to its partner."""
        out = {}
        for i, k in self.pairs:
            out[i] = k
            out[k] = i
        return out


@dataclass(frozen=True)
class HalfPeriodResidual:
    r_pi: float
    period_bound: float
    count_bound: float
    points: int


@dataclass(frozen=True)
class DecoherenceVerdict:
    """Outcome of applying the lemma to a sampled function.

    ``predicted_bound`` is C * epsilon plus the flatness slack
    eta * C * (N+1)/N; ``observed_max`` is the largest |R_D| found on the
    sampled window.
    """

    status: str
    reason: str
    window: Optional[TimeWindow] = None
    predicted_bound: float = 0.0
    observed_max: float = 0.0
    certificate: object = None
    detail: str = ""

    @property
    def decoheres(self):
        return self.status == DECOHERES

    def report_lines(self):
        lines = [f"status: {self.status}", f"reason: {self.reason}"]
        if self.detail:
            lines.append(f"detail: {self.detail}")
        if self.certificate is not None:
            lines.extend(self.certificate.report_lines())
        if self.window is not None:
            lines.append(f"window_low: {self.window.t_low:.17g}")
            lines.append(f"window_high: {self.window.t_high:.17g}")
            lines.append(f"kappa: {self.window.kappa:.17g}")
        lines.append(f"predicted_bound: {self.predicted_bound:.17g}")
        lines.append(f"observed_max: {self.observed_max:.17g}")
        return lines


def _finite_time(t):
    t = float(t)
    if not math.isfinite(t):
        raise ValidationError("t must be finite")
    return t


def direct_sum(sf, t):
    """R_D(t) for the sampled function ``sf``, with compensated summation."""
    t = _finite_time(t)
    return complex(_kernel.phase_sums(sf.values, sf.n_intervals, np.array([t]))[0])


def trig_split(sf, t):
    """Cosine and sine sums of ``sf`` at time ``t``.

    Returns ``(cos_part, sin_part)``, each a ``(re, im)`` pair of floats:
    ``cos_part = (1/N) sum f(x_i) cos(x_i t)`` split into the real and
    imaginary parts of f, and likewise for the sine.  The two recombine as
    ``complex(*cos_part) + 1j * complex(*sin_part) == direct_sum(sf, t)``.
    """
    t = _finite_time(t)
    n = sf.n_intervals
    arg = sf.grid.indices * t / n
    c, s = np.cos(arg), np.sin(arg)
    f = sf.values
    cos_part = (
        float(_kernel.compensated_sum(f.real * c) / n),
        float(_kernel.compensated_sum(f.imag * c) / n),
    )
    sin_part = (
        float(_kernel.compensated_sum(f.real * s) / n),
        float(_kernel.compensated_sum(f.imag * s) / n),
    )
    return cos_part, sin_part


def recombine_trig(cos_part, sin_part):
    return complex(*cos_part) + 1j * complex(*sin_part)


def delta_profile(grid, t):
    """Pair each grid point with the point half a period of cos(x t) away.

    Scanning indices in increasing order, point i is paired with the nearest
    index k to i + pi N / t when x_i + pi / t still lies in [0, 1] and
    neither point is already taken.  Everything else is uncancelled.  At
    t = 0 the defect would be -pi for every point, so t must be positive.
    """
    t = _finite_time(t)
    if t <= 0:
        raise ValidationError("t must be positive; at t = 0 every defect equals -pi")
    n = grid.n_intervals
    offset = math.pi * n / t
    used = np.zeros(grid.size, dtype=bool)
    deltas = np.full(grid.size, np.nan)
    pairs = []
    uncancelled = []
    for i in range(grid.size):
        if used[i]:
            continue
        target = i + offset
        k = int(math.floor(target + 0.5))
        if target > n * (1 + 1e-12) or k > n or k == i or used[k]:
            uncancelled.append(i)
            continue
        used[i] = used[k] = True
        pairs.append((i, k))
        deltas[i] = (k - i) * t / n - math.pi
    paired = deltas[~np.isnan(deltas)]
    delta_min = float(paired[np.argmin(np.abs(paired))]) if paired.size else math.nan
    return CancellationReport(t, offset, tuple(pairs), tuple(uncancelled), deltas, delta_min)


def residual_half_period(grid, n):
    """Contribution of one uncancelled half-period at t = (2n + 1) pi.

    Returns the residual r_pi over the first ceil((N+1)/(2n+1)) points, the
    bound pi / t = 1 / (2n + 1) and the count bound ceil(...) / N.
    """
    if int(n) != n or n < 0:
        raise ValidationError("n must be a nonnegative integer")
    n = int(n)
    periods = 2 * n + 1
    t = periods * math.pi
    if periods > grid.n_intervals:
        raise WindowViolation(t, math.pi * grid.n_intervals)
    count = -(-grid.size // periods)
    i = np.arange(count)
    r_pi = float(_kernel.compensated_sum(np.cos(i * t / grid.n_intervals)) / grid.n_intervals)
    return HalfPeriodResidual(r_pi, math.pi / t, count / grid.n_intervals, count)


def poincare_times(grid):
    """Return (2 pi, 2 pi N).

    The first is the recurrence time quoted for integer frequencies; the
    second is the smallest t > 0 with exp(i x_j t) = 1 for every x_j = j/N.
    They coincide only for N = 1.
    """
    return 2 * math.pi, 2 * math.pi * grid.n_intervals


def component_sum(cert, k, t):
    """(1/P) sum over the P + 1 points of component ``k`` of exp(i x t)."""
    t = _finite_time(t)
    idx = np.asarray(cert.component_range(k), dtype=float)
    phases = np.exp(1j * (idx * t / cert.n_intervals))
    return complex(_kernel.compensated_sum(phases) / cert.points_per_component)


def recombined_sum(cert, t):
    """sum_k (P/N) C_k R_D^(k)(t) for the certificate's step function."""
    t = _finite_time(t)
    p, n = cert.points_per_component, cert.n_intervals
    parts = [
        (p / n) * c * component_sum(cert, k, t)
        for k, c in enumerate(cert.component_constants, start=1)
    ]
    return complex(_kernel.compensated_sum(np.array(parts, dtype=complex)))


def decoherence_window(cert, kappa=DEFAULT_KAPPA):
    """Window [kappa pi, pi P]; raises :class:`WindowEmpty` if kappa > P."""
    kappa = float(kappa)
    if not kappa >= 1:
        raise ValidationError("kappa must be at least 1")
    p = cert.points_per_component
    if kappa > p:
        raise WindowEmpty(kappa, p)
    return TimeWindow(kappa * math.pi, math.pi * p, kappa)


def lemma_verdict(
    sf,
    flatness_tol=DEFAULT_ETA,
    min_p=DEFAULT_MIN_P,
    kappa=DEFAULT_KAPPA,
    epsilon=DEFAULT_EPSILON,
    n_time_samples=DEFAULT_TIME_SAMPLES,
    normalization=GLOBAL,
):
    """Decide whether R_D of ``sf`` is negligible on the decoherence window.

    NoDecoherence when the window cannot exist (kappa > N), when ``sf`` is
    not in the L1 class, or when the certified P is below kappa.  Otherwise
    |R_D| is sampled at ``n_time_samples`` log-spaced window times and
    compared with C * epsilon + eta * C * (N+1)/N, eta being the achieved
    flatness: Decoheres when the sampled maximum stays within it,
    Inconclusive when it does not.
    """
    for name, value in (("flatness_tol", flatness_tol), ("epsilon", epsilon)):
        if not value > 0:
            raise ValidationError(f"{name} must be positive")
    if not kappa >= 1:
        raise ValidationError("kappa must be at least 1")
    if int(n_time_samples) != n_time_samples or n_time_samples < 2:
        raise ValidationError("n_time_samples must be an integer >= 2")
    n = sf.n_intervals
    if kappa > n:
        return DecoherenceVerdict(
            NO_DECOHERENCE, WINDOW_EMPTY, detail=f"kappa={kappa} exceeds N={n}"
        )
    try:
        cert = decompose(sf, flatness_tol, min_p, normalization)
    except NotInL1Class as exc:
        return DecoherenceVerdict(NO_DECOHERENCE, NOT_IN_L1, detail=str(exc))
    try:
        window = decoherence_window(cert, kappa)
    except WindowEmpty as exc:
        return DecoherenceVerdict(
            NO_DECOHERENCE, WINDOW_EMPTY, certificate=cert, detail=str(exc)
        )
    c = cert.c_max
    bound = c * epsilon + cert.flatness * c * (n + 1) / n
    series = sweep(sf, window.times(int(n_time_samples)))
    observed = float(series.magnitude.max())
    if observed <= bound:
        return DecoherenceVerdict(DECOHERES, WITHIN_BOUND, window, bound, observed, cert)
    return DecoherenceVerdict(INCONCLUSIVE, EXCEEDS_BOUND, window, bound, observed, cert)
