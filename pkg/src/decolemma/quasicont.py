"""Class-1 quasi-continuous decompositions and L1-class membership.

A grid of N + 1 points is split into G consecutive components of P + 1
points each, so G * (P + 1) = N + 1.  A sampled function belongs to the
(discrete) L1 class when it is almost constant on every component; the
:class:`DecompositionCertificate` returned by :func:`decompose` records the
partition together with the component constants that prove it.

Components are numbered k = 1..G, matching the usual mathematical
convention.  Component k covers global indices (k-1)(P+1) .. k(P+1) - 1.
"""
from dataclasses import dataclass

import numpy as np

from .errors import IndexOutOfComponent, NotInL1Class, ValidationError
from .grid import UniformGrid

DEFAULT_MIN_P = 8
FLOOR_FACTOR = 1e-12

GLOBAL = "global"
LOCAL = "local"


@dataclass(frozen=True, eq=False)
class DecompositionCertificate:
    """A partition of the grid on which ``f`` is almost constant.

    Attributes
    ----------
    n_intervals : int
        N of the underlying grid.
    g_components : int
        Number of components G.
    points_per_component : int
        P; every component holds P + 1 consecutive points.
    component_constants : ndarray of complex
        C_k for k = 1..G (stored 0-based), the mean of f over X_k.
    flatness : float
        Achieved flatness: the largest |f(x) - C_k| over all components,
        divided by the normalisation scale (see :func:`decompose`).
    c_max : float
        C = max_k |C_k|.
    normalization : str
        ``"global"`` or ``"local"``.
    """

    n_intervals: int
    g_components: int
    points_per_component: int
    component_constants: np.ndarray
    flatness: float
    c_max: float
    normalization: str = GLOBAL

    def __post_init__(self):
        consts = np.array(self.component_constants, dtype=complex)
        consts.flags.writeable = False
        object.__setattr__(self, "component_constants", consts)
        if self.g_components * (self.points_per_component + 1) != self.n_intervals + 1:
            raise ValidationError("components do not tile the grid")
        if consts.size != self.g_components:
            raise ValidationError("one constant per component required")

    @property
    def grid(self):
        return UniformGrid(self.n_intervals)

    @property
    def p(self):
        return self.points_per_component

    @property
    def g(self):
        return self.g_components

    def _check_k(self, k):
        if not 1 <= k <= self.g_components:
            raise ValidationError(f"component index {k} outside 1..{self.g_components}")

    def component_range(self, k):
        """Global index range of component ``k`` (1-based)."""
        self._check_k(k)
        width = self.points_per_component + 1
        return range((k - 1) * width, k * width)

    def component_of(self, j):
        """The 1-based component holding global index ``j``."""
        if not 0 <= j <= self.n_intervals:
            raise ValidationError(f"index {j} outside grid 0..{self.n_intervals}")
        return j // (self.points_per_component + 1) + 1

    def piecewise_constant(self):
        """The step function taking value C_k on component k."""
        return np.repeat(self.component_constants, self.points_per_component + 1)

    def report_lines(self):
        lines = [
            f"G: {self.g_components}",
            f"P: {self.points_per_component}",
            f"eta_achieved: {self.flatness:.17g}",
            f"C: {self.c_max:.17g}",
            f"normalization: {self.normalization}",
        ]
        for k, c in enumerate(self.component_constants, start=1):
            lines.append(f"C_{k}: {c.real:.17g},{c.imag:.17g}")
        return lines


def admissible_partitions(n_intervals, min_p=1):
    """Values of P with (P + 1) | (N + 1) and P >= min_p, largest first."""
    total = n_intervals + 1
    divisors = set()
    d = 1
    while d * d <= total:
        if total % d == 0:
            divisors.update((d, total // d))
        d += 1
    return sorted((d - 1 for d in divisors if d - 1 >= max(min_p, 1)), reverse=True)


def _measure(values, p, normalization):
    blocks = values.reshape(-1, p + 1)
    consts = blocks.mean(axis=1)
    dev = np.abs(blocks - consts[:, None])
    c_max = float(np.abs(consts).max())
    floor = FLOOR_FACTOR * float(np.abs(values).max())
    if floor == 0.0:
        # f vanishes identically
        return consts, 0.0, c_max
    if normalization == GLOBAL:
        flat = float(dev.max() / max(c_max, floor))
    else:
        scale = np.maximum(np.abs(consts), floor)
        flat = float((dev.max(axis=1) / scale).max())
    return consts, flat, c_max


def flatness_at(sf, p, normalization=GLOBAL):
    """Flatness achieved by the partition with P = ``p``."""
    if (sf.n_intervals + 1) % (p + 1):
        raise ValidationError(f"P+1={p + 1} does not divide N+1={sf.n_intervals + 1}")
    return _measure(sf.values, p, normalization)[1]


def decompose(sf, flatness_tol, min_p=DEFAULT_MIN_P, normalization=GLOBAL):
    """Find the class-1 decomposition with the largest admissible P.

    A partition is admissible when P >= ``min_p`` and (P + 1) divides N + 1.
    C_k is the mean of f over component k.  With the default ``"global"``
    normalisation the flatness is

        max_k max_{x in X_k} |f(x) - C_k| / max(C, floor),

    where C = max_k |C_k| and floor = 1e-12 * max_i |f(x_i)|.  This is the
    quantity that enters the recombination error bound eta * C * (N+1)/N.
    ``"local"`` divides each component's deviation by max(|C_k|, floor)
    instead, which is stricter wherever f is small.  The complex modulus is
    used, so real and imaginary parts satisfy the bound separately.

    Raises
    ------
    NotInL1Class
        If no admissible partition reaches ``flatness_tol``.
    """
    if not flatness_tol > 0:
        raise ValidationError("flatness_tol must be positive")
    if int(min_p) != min_p or min_p < 1:
        raise ValidationError("min_p must be a positive integer")
    if normalization not in (GLOBAL, LOCAL):
        raise ValidationError(f"unknown normalization {normalization!r}")
    best = None
    for p in admissible_partitions(sf.n_intervals, int(min_p)):
        consts, flat, c_max = _measure(sf.values, p, normalization)
        if flat <= flatness_tol:
            return DecompositionCertificate(
                n_intervals=sf.n_intervals,
                g_components=(sf.n_intervals + 1) // (p + 1),
                points_per_component=p,
                component_constants=consts,
                flatness=flat,
                c_max=c_max,
                normalization=normalization,
            )
        if best is None or flat < best[1]:
            best = (p, flat)
    if best is None:
        raise NotInL1Class(None, None, flatness_tol)
    raise NotInL1Class(best[0], best[1], flatness_tol)


def relabel_component(cert, k, j):
    """Local index r_k in 0..P of global index ``j`` inside component ``k``."""
    cert._check_k(k)
    if not 0 <= j <= cert.n_intervals or cert.component_of(j) != k:
        raise IndexOutOfComponent(k, j)
    return j - (k - 1) * (cert.points_per_component + 1)


def global_index(cert, k, r):
    """Inverse of :func:`relabel_component`."""
    cert._check_k(k)
    if not 0 <= r <= cert.points_per_component:
        raise ValidationError(f"local index {r} outside 0..{cert.points_per_component}")
    return (k - 1) * (cert.points_per_component + 1) + r
