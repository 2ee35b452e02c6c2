"""Equidistant sample grids on [0, 1] and functions sampled on them.

Every other module works on a :class:`UniformGrid` with points x_i = i/N,
i = 0..N.  Physical energy tables are brought onto such a grid with
:func:`grid_from_energies`, which refuses spectra that are not equidistant
rather than resampling them.
"""
from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch, NonEquidistantSpectrum, NonFiniteValue, ValidationError

DEFAULT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class UniformGrid:
    """The point set {i/N : i = 0..N}.

    Parameters
    ----------
    n_intervals : int
        Number of intervals N; the grid has N + 1 points.
    """

    n_intervals: int

    def __post_init__(self):
        n = self.n_intervals
        if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
            raise ValidationError(f"n_intervals must be a positive integer, got {n!r}")
        object.__setattr__(self, "n_intervals", int(n))

    @property
    def size(self):
        return self.n_intervals + 1

    @property
    def spacing(self):
        return 1.0 / self.n_intervals

    @property
    def indices(self):
        return np.arange(self.size)

    @property
    def points(self):
        pts = self.indices / self.n_intervals
        pts.flags.writeable = False
        return pts

    def __len__(self):
        return self.size


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Complex samples f(x_i), one per grid point."""

    grid: UniformGrid
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex)
        if vals.ndim != 1 or vals.size != self.grid.size:
            raise LengthMismatch(self.grid.size, vals.size if vals.ndim == 1 else vals.shape)
        bad = np.flatnonzero(~np.isfinite(vals))
        if bad.size:
            raise NonFiniteValue(int(bad[0]))
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def n_intervals(self):
        return self.grid.n_intervals

    @property
    def is_real(self):
        return not np.any(self.values.imag)

    def l1_weight(self):
        """The triangle bound (1/N) sum |f(x_i)| on |R_D(t)|."""
        return float(np.abs(self.values).sum() / self.n_intervals)

    def __len__(self):
        return self.grid.size


@dataclass(frozen=True)
class AffineEnergyMap:
    """Affine map from physical energies onto the unit grid.

    ``map(w) = scale * (w - offset)`` sends the lowest level to 0 and the
    highest to 1.  Together with ``hbar`` it also converts between physical
    time and the dimensionless time conjugate to the unit grid.
    """

    scale: float
    offset: float
    hbar: float = 1.0

    def __post_init__(self):
        if not self.scale > 0:
            raise ValidationError("scale must be positive")
        if not self.hbar > 0:
            raise ValidationError("hbar must be positive")

    def to_unit(self, energies):
        return self.scale * (np.asarray(energies, dtype=float) - self.offset)

    def to_energy(self, x):
        return np.asarray(x, dtype=float) / self.scale + self.offset

    @property
    def bandwidth(self):
        """omega_N - omega_0 in energy units."""
        return 1.0 / self.scale

    def dimensionless_time(self, t_phys):
        # phase (w_i - w_j) t / hbar == (x_i - x_j) * t_dimless
        return np.asarray(t_phys, dtype=float) / (self.scale * self.hbar)

    def physical_time(self, t_dimless):
        return np.asarray(t_dimless, dtype=float) * self.scale * self.hbar


def make_uniform_grid(n_intervals):
    """Return the grid {i/N}, i = 0..N."""
    return UniformGrid(n_intervals)


def grid_from_energies(energies, hbar=1.0, tolerance=DEFAULT_TOLERANCE):
    """Map an equidistant energy ladder onto the unit grid.

    Parameters
    ----------
    energies : sequence of float
        Strictly increasing energy levels, at least two.
    hbar : float
        Action scale used for time conversion.
    tolerance : float
        Maximum relative deviation of any gap from the mean gap.

    Returns
    -------
    grid : UniformGrid
        Grid with N = len(energies) - 1.
    energy_map : AffineEnergyMap
        Map with ``energy_map.to_unit(energies[i]) == i / N``.

    Raises
    ------
    NonEquidistantSpectrum
        If the gaps disagree by more than ``tolerance``.
    """
    w = np.asarray(energies, dtype=float)
    if w.ndim != 1 or w.size < 2:
        raise ValidationError("need at least two energy levels")
    if not np.all(np.isfinite(w)):
        raise NonFiniteValue(int(np.flatnonzero(~np.isfinite(w))[0]))
    if not hbar > 0:
        raise ValidationError("hbar must be positive")
    if not tolerance > 0:
        raise ValidationError("tolerance must be positive")
    gaps = np.diff(w)
    if np.any(gaps <= 0):
        raise ValidationError("energies must be strictly increasing")
    n = w.size - 1
    mean_gap = (w[-1] - w[0]) / n
    deviation = float(np.max(np.abs(gaps - mean_gap)) / mean_gap)
    if deviation > tolerance:
        raise NonEquidistantSpectrum(deviation, tolerance)
    return UniformGrid(n), AffineEnergyMap(1.0 / (w[-1] - w[0]), float(w[0]), float(hbar))


def sample(grid, values):
    """Wrap ``values`` as a :class:`SampledFunction` on ``grid``."""
    return SampledFunction(grid, values)
