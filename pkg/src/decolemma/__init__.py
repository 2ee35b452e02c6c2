"""Decide whether a discrete quantum system decoheres without simulating it.

The central object is the discrete Riemann-Lebesgue sum

    R_D(t) = sum_{j=0}^{N} (1/N) f(j/N) exp(i t j/N),

whose decay on the window pi << t <= pi P is certified by a class-1
quasi-continuous decomposition of f.
"""
__version__ = "0.1.0"

from .dft import TimeSeries, dft_at, parseval_residual, sweep
from .errors import (
    DecolemmaError,
    HermiticityViolation,
    IndexOutOfComponent,
    LengthMismatch,
    NonEquidistantSpectrum,
    NonFiniteValue,
    NotInL1Class,
    ValidationError,
    WindowEmpty,
    WindowViolation,
)
from .grid import AffineEnergyMap, SampledFunction, UniformGrid, grid_from_energies, make_uniform_grid, sample
from .model import (
    DiscreteModel,
    equilibrium_value,
    evolve_and_check,
    expectation,
    frequency_profile,
    predict,
)
from .quasicont import DecompositionCertificate, decompose, global_index, relabel_component
from .rlsum import (
    CancellationReport,
    DecoherenceVerdict,
    TimeWindow,
    component_sum,
    decoherence_window,
    delta_profile,
    direct_sum,
    lemma_verdict,
    poincare_times,
    recombined_sum,
    residual_half_period,
    trig_split,
)
