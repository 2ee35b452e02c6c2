"""Discrete quantum models: expectation dynamics and the lemma-based prediction.

For a Hamiltonian with levels omega_i and a state rho, the expectation of O
evolves as

    <O>(t) = sum_{i,j} conj(rho_ij) O_ij exp(i (omega_i - omega_j) t / hbar).

On an equidistant ladder the double sum collapses onto the level distance
d = i - j.  The d > 0 amplitudes b_d form the frequency profile to which the
single-variable lemma is applied; d < 0 contributes the complex conjugate
and d = 0 is the equilibrium (diagonal) value.

The bins d = 1..N are placed on a grid of N - 1 intervals, so the profile
sum differs from R_D only by the unimodular factor exp(i Delta t / hbar).
"""
import functools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernel
from .dft import TimeSeries
from .errors import (
    HermiticityViolation,
    NonEquidistantSpectrum,
    ProfileReconstructionError,
    ValidationError,
)
from .grid import DEFAULT_TOLERANCE, UniformGrid, grid_from_energies, sample
from .quasicont import DEFAULT_MIN_P
from .rlsum import (
    DECOHERES,
    DEFAULT_EPSILON,
    DEFAULT_ETA,
    DEFAULT_KAPPA,
    DEFAULT_TIME_SAMPLES,
    NO_DECOHERENCE,
    WINDOW_EMPTY,
    DecoherenceVerdict,
    direct_sum,
    lemma_verdict,
)

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-8
POSITIVITY_MAX_LEVELS = 2000
IMAG_TOL = 1e-8
RECONSTRUCTION_TOL = 1e-10
RECONSTRUCTION_CHECKS = 16
REVIVAL_FRACTION = 0.5

ZERO_MASS = "ZeroOffDiagonalMass"
NON_EQUIDISTANT = "NonEquidistantSpectrum"


def _hermitian_defect(a):
    return float(np.max(np.abs(a - a.conj().T))) / max(1.0, float(np.max(np.abs(a))))


@dataclass(frozen=True, eq=False)
class DiscreteModel:
    """Energies, state and observable, all in the energy eigenbasis."""

    energies: np.ndarray
    rho: np.ndarray
    observable: np.ndarray
    hbar: float = 1.0

    def __post_init__(self):
        w = np.array(self.energies, dtype=float).ravel()
        rho = np.array(self.rho, dtype=complex)
        obs = np.array(self.observable, dtype=complex)
        n = w.size
        if n < 1:
            raise ValidationError("model needs at least one level")
        if rho.shape != (n, n) or obs.shape != (n, n):
            raise ValidationError(
                f"rho {rho.shape} and observable {obs.shape} must be {n}x{n}"
            )
        if not (np.all(np.isfinite(w)) and np.all(np.isfinite(rho)) and np.all(np.isfinite(obs))):
            raise ValidationError("model contains non-finite entries")
        if n > 1 and np.any(np.diff(w) <= 0):
            raise ValidationError("energies must be strictly increasing")
        if not self.hbar > 0:
            raise ValidationError("hbar must be positive")
        if _hermitian_defect(rho) > HERMITIAN_TOL:
            raise ValidationError("rho is not Hermitian")
        if _hermitian_defect(obs) > HERMITIAN_TOL:
            raise ValidationError("observable is not Hermitian")
        if abs(np.trace(rho) - 1) > TRACE_TOL:
            raise ValidationError(f"trace of rho is {np.trace(rho).real!r}, not 1")
        for arr in (w, rho, obs):
            arr.flags.writeable = False
        object.__setattr__(self, "energies", w)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "observable", obs)
        object.__setattr__(self, "hbar", float(self.hbar))

    @property
    def levels(self):
        return self.energies.size

    @functools.cached_property
    def kernel(self):
        """conj(rho) * O elementwise."""
        k = self.rho.conj() * self.observable
        k.flags.writeable = False
        return k

    def check_positivity(self, tol=POSITIVITY_TOL):
        """Raise if rho has an eigenvalue below ``-tol``.

        Returns the smallest eigenvalue, or ``None`` when the model is too
        large for the check (more than 2000 levels).
        """
        if self.levels > POSITIVITY_MAX_LEVELS:
            return None
        smallest = float(np.linalg.eigvalsh(self.rho)[0])
        if smallest < -tol:
            raise ValidationError(f"rho is not positive semidefinite (eigenvalue {smallest:.3e})")
        return smallest

    def to_dimensionless(self, t_phys):
        """Time conjugate to energies normalised onto [0, 1]."""
        if self.levels < 2:
            return np.asarray(t_phys, dtype=float)
        return np.asarray(t_phys, dtype=float) * (self.energies[-1] - self.energies[0]) / self.hbar

    def from_dimensionless(self, t):
        if self.levels < 2:
            return np.asarray(t, dtype=float)
        return np.asarray(t, dtype=float) * self.hbar / (self.energies[-1] - self.energies[0])


def _expectation_complex(model, times):
    w = model.energies - model.energies[0]
    v = np.exp(1j * np.outer(np.atleast_1d(times), w) / model.hbar)
    return np.sum((v @ model.kernel) * v.conj(), axis=1)


def expectation_series(model, times):
    """<O>(t) at every physical time in ``times`` (brute-force double sum)."""
    times = np.asarray(times, dtype=float).ravel()
    vals = _expectation_complex(model, times)
    scale = max(float(np.abs(model.kernel).sum()), np.finfo(float).tiny)
    residue = float(np.max(np.abs(vals.imag))) if vals.size else 0.0
    if residue > IMAG_TOL * scale:
        raise HermiticityViolation(residue, scale)
    return vals.real


def expectation(model, t, dimensionless=False):
    """<O>(t) at physical time ``t`` (or dimensionless, if requested)."""
    t = float(t)
    if not math.isfinite(t):
        raise ValidationError("t must be finite")
    if dimensionless:
        t = float(model.from_dimensionless(t))
    return float(expectation_series(model, [t])[0])


def equilibrium_value(model):
    """The diagonal part sum_i conj(rho_ii) O_ii."""
    return float(np.trace(model.kernel).real)


@dataclass(frozen=True, eq=False)
class FrequencyProfile:
    """Kernel amplitudes binned by level distance d = i - j > 0.

    Attributes
    ----------
    bins : ndarray of complex
        b_d for d = 1..N.
    diagonal_part : complex
        The d = 0 term (equilibrium value).
    spacing : float
        Level spacing Delta (energy units).
    hbar : float
    sampled : SampledFunction or None
        b_d / scale on a grid of N - 1 intervals; ``None`` with fewer than
        two bins or when every bin vanishes.
    scale : float
        (1/(N-1)) sum |b_d|, so that the sampled profile has unit triangle
        bound.
    off_diagonal_mass : float
        2 sum |b_d|, the largest possible |<O>(t) - <O>_*|.
    """

    bins: np.ndarray
    diagonal_part: complex
    spacing: float
    hbar: float
    sampled: object = None
    scale: float = 0.0
    off_diagonal_mass: float = 0.0

    @property
    def n_bins(self):
        return self.bins.size

    @property
    def rate(self):
        """Profile dimensionless time per unit physical time."""
        return max(self.n_bins - 1, 1) * self.spacing / self.hbar

    def to_profile_time(self, t_phys):
        return np.asarray(t_phys, dtype=float) * self.rate

    def physical_time(self, t_profile):
        return np.asarray(t_profile, dtype=float) / self.rate

    @property
    def recurrence_time(self):
        """Physical time 2 pi hbar / Delta at which every phase realigns."""
        return 2 * math.pi * self.hbar / self.spacing

    def off_diagonal(self, t_phys):
        """2 Re sum_d b_d exp(i d Delta t / hbar)."""
        t = float(t_phys)
        carrier = np.exp(1j * self.spacing * t / self.hbar)
        if self.sampled is not None:
            m = self.sampled.n_intervals
            s = direct_sum(self.sampled, float(self.to_profile_time(t)))
            return 2 * (carrier * self.scale * m * s).real
        d = np.arange(1, self.n_bins + 1)
        terms = self.bins * np.exp(1j * d * self.spacing * t / self.hbar)
        return 2 * complex(_kernel.compensated_sum(terms)).real

    def reconstruct(self, t_phys):
        return self.diagonal_part.real + self.off_diagonal(t_phys)


def frequency_profile(model, tolerance=DEFAULT_TOLERANCE, check=True):
    """Collapse the double sum of ``model`` onto level distances.

    Raises
    ------
    NonEquidistantSpectrum
        When the levels are not equidistant within ``tolerance``.
    ProfileReconstructionError
        When ``check`` is set and the profile fails to reproduce
        :func:`expectation` at 16 pseudo-random times.
    """
    if model.levels < 2:
        raise ValidationError("a frequency profile needs at least two levels")
    grid, emap = grid_from_energies(model.energies, model.hbar, tolerance)
    n = grid.n_intervals
    k = model.kernel
    bins = np.array(
        [_kernel.compensated_sum(np.diagonal(k, offset=-d)) for d in range(1, n + 1)],
        dtype=complex,
    )
    bins.flags.writeable = False
    diag = complex(_kernel.compensated_sum(np.diagonal(k)))
    total = float(np.abs(bins).sum())
    sampled, scale = None, 0.0
    if n >= 2 and total > 0:
        scale = total / (n - 1)
        sampled = sample(UniformGrid(n - 1), bins / scale)
    profile = FrequencyProfile(
        bins=bins,
        diagonal_part=diag,
        spacing=emap.bandwidth / n,
        hbar=model.hbar,
        sampled=sampled,
        scale=scale,
        off_diagonal_mass=2 * total,
    )
    if check:
        _self_check(model, profile)
    return profile


def _self_check(model, profile):
    rng = np.random.default_rng(0)
    times = rng.uniform(0, profile.recurrence_time, RECONSTRUCTION_CHECKS)
    ref = expectation_series(model, times)
    got = np.array([profile.reconstruct(t) for t in times])
    scale = max(float(np.abs(model.kernel).sum()), np.finfo(float).tiny)
    err = float(np.max(np.abs(got - ref)))
    if err > RECONSTRUCTION_TOL * scale:
        raise ProfileReconstructionError(
            f"profile reconstruction error {err:.3e} exceeds {RECONSTRUCTION_TOL:g} x {scale:.3e}"
        )


@dataclass(frozen=True, eq=False)
class ModelPrediction:
    """Lemma verdict for a model, mapped back to physical time.

    ``deviation_bound`` = ``verdict.predicted_bound * off_diagonal_mass``
    bounds |<O>(t) - <O>_*| on ``physical_window`` when the verdict is
    Decoheres.
    """

    verdict: DecoherenceVerdict
    physical_window: Optional[tuple] = None
    profile: Optional[FrequencyProfile] = None
    equilibrium: float = 0.0
    off_diagonal_mass: float = 0.0
    deviation_bound: float = 0.0

    @property
    def status(self):
        return self.verdict.status

    @property
    def recurrence_time(self):
        return None if self.profile is None else self.profile.recurrence_time

    def report_lines(self):
        lines = self.verdict.report_lines()
        lines.append(f"equilibrium_value: {self.equilibrium:.17g}")
        lines.append(f"off_diagonal_mass: {self.off_diagonal_mass:.17g}")
        lines.append(f"deviation_bound: {self.deviation_bound:.17g}")
        if self.physical_window is not None:
            lo, hi = self.physical_window
            lines.append(f"physical_window_low: {lo:.17g}")
            lines.append(f"physical_window_high: {hi:.17g}")
        if self.recurrence_time is not None:
            lines.append(f"recurrence_time: {self.recurrence_time:.17g}")
        if self.off_diagonal_mass == 0:
            lines.append("note: zero off-diagonal mass; the state is already at equilibrium")
        return lines


def predict(
    model,
    flatness_tol=DEFAULT_ETA,
    min_p=DEFAULT_MIN_P,
    kappa=DEFAULT_KAPPA,
    epsilon=DEFAULT_EPSILON,
    n_time_samples=DEFAULT_TIME_SAMPLES,
    tolerance=DEFAULT_TOLERANCE,
):
    """Apply the lemma to the frequency profile of ``model``."""
    eq = equilibrium_value(model)
    if model.levels < 2:
        verdict = DecoherenceVerdict(DECOHERES, ZERO_MASS, detail="single level")
        return ModelPrediction(verdict, (0.0, math.inf), None, eq)
    try:
        profile = frequency_profile(model, tolerance)
    except NonEquidistantSpectrum as exc:
        verdict = DecoherenceVerdict(NO_DECOHERENCE, NON_EQUIDISTANT, detail=str(exc))
        return ModelPrediction(verdict, None, None, eq)
    mass = profile.off_diagonal_mass
    if mass == 0:
        verdict = DecoherenceVerdict(DECOHERES, ZERO_MASS)
        return ModelPrediction(verdict, (0.0, math.inf), profile, eq, 0.0, 0.0)
    if profile.sampled is None:
        verdict = DecoherenceVerdict(
            NO_DECOHERENCE, WINDOW_EMPTY, detail="a single frequency bin admits no window"
        )
        return ModelPrediction(verdict, None, profile, eq, mass)
    verdict = lemma_verdict(
        profile.sampled, flatness_tol, min_p, kappa, epsilon, n_time_samples
    )
    window = None
    if verdict.window is not None:
        window = (
            float(profile.physical_time(verdict.window.t_low)),
            float(profile.physical_time(verdict.window.t_high)),
        )
    return ModelPrediction(verdict, window, profile, eq, mass, verdict.predicted_bound * mass)


@dataclass(frozen=True, eq=False)
class EvolutionCheck:
    """Brute-force evolution compared with the predicted window."""

    series: TimeSeries
    equilibrium: float
    deviation: np.ndarray = field(repr=False)
    window: Optional[tuple] = None
    max_deviation_in_window: Optional[float] = None
    revival_time: Optional[float] = None

    def write_csv(self, stream):
        stream.write("t_phys,expectation,deviation\n")
        for t, v, d in zip(self.series.times, self.series.values, self.deviation):
            stream.write(f"{t:.17g},{float(v):.17g},{d:.17g}\n")


def _revival(times, dev, window):
    if dev.size == 0 or dev[0] == 0:
        return None
    threshold = REVIVAL_FRACTION * dev[0]
    if window is not None:
        start = np.searchsorted(times, window[1], side="right")
    else:
        below = np.flatnonzero(dev < threshold)
        if below.size == 0:
            return None
        start = below[0]
    hits = np.flatnonzero(dev[start:] > threshold)
    return float(times[start + hits[0]]) if hits.size else None


def evolve_and_check(model, times, window=None, prediction=None):
    """Evolve ``model`` by brute force and compare with the prediction.

    Parameters
    ----------
    model : DiscreteModel
    times : array_like of float
        Strictly increasing physical times; the first one defines the
        initial deviation used by the revival detector.
    window : (float, float), optional
        Physical window to check.  Defaults to the window of ``prediction``,
        which itself defaults to :func:`predict` with default parameters.

    Returns
    -------
    EvolutionCheck
        ``revival_time`` is the first time after the window (or, without a
        window, after the deviation first halves) at which the deviation
        exceeds half its initial value.
    """
    times = np.asarray(times, dtype=float).ravel()
    if window is None:
        if prediction is None:
            prediction = predict(model)
        window = prediction.physical_window
    vals = expectation_series(model, times)
    eq = equilibrium_value(model)
    dev = np.abs(vals - eq)
    in_window = None
    if window is not None:
        mask = (times >= window[0]) & (times <= window[1])
        if mask.any():
            in_window = float(dev[mask].max())
    series = TimeSeries(times, vals)
    return EvolutionCheck(series, eq, dev, window, in_window, _revival(times, dev, window))
