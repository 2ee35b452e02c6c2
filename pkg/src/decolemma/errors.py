"""Exception types raised by decolemma.

Analysis outcomes (no decoherence, inconclusive) are never exceptions; they
are encoded in :class:`decolemma.rlsum.DecoherenceVerdict`.  Exceptions are
reserved for invalid input and for conditions under which an operation has
no meaningful result.
"""


class DecolemmaError(Exception):
    """Base class for all library errors."""


class ValidationError(DecolemmaError, ValueError):
    """Input violates a documented precondition."""


class LengthMismatch(ValidationError):
    def __init__(self, expected, got):
        self.expected = expected
        self.got = got
        super().__init__(f"expected {expected} values, got {got}")


class NonFiniteValue(ValidationError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"non-finite value at index {index}")


class NonEquidistantSpectrum(ValidationError):
    """Energy gaps disagree by more than the requested relative tolerance."""

    def __init__(self, max_deviation, tolerance):
        self.max_deviation = max_deviation
        self.tolerance = tolerance
        super().__init__(
            f"spectrum is not equidistant: max relative gap deviation "
            f"{max_deviation:.3e} exceeds tolerance {tolerance:.3e}"
        )


class NotInL1Class(DecolemmaError):
    """No class-1 decomposition reaches the requested flatness.

    ``best_p`` and ``best_flatness`` describe the admissible partition that
    came closest, or are ``None`` when no partition was admissible at all.
    """

    def __init__(self, best_p, best_flatness, flatness_tol):
        self.best_p = best_p
        self.best_flatness = best_flatness
        self.flatness_tol = flatness_tol
        if best_p is None:
            detail = "no admissible partition"
        else:
            detail = f"best P={best_p} with flatness {best_flatness:.3e}"
        super().__init__(f"not in L1 class at flatness {flatness_tol}: {detail}")


class IndexOutOfComponent(ValidationError):
    def __init__(self, k, j):
        self.k = k
        self.j = j
        super().__init__(f"global index {j} is not in component {k}")


class WindowEmpty(DecolemmaError):
    """The decoherence window [kappa*pi, pi*P] is empty (kappa > P)."""

    def __init__(self, kappa, p):
        self.kappa = kappa
        self.p = p
        super().__init__(f"decoherence window empty: kappa={kappa} > P={p}")


class WindowViolation(ValidationError):
    def __init__(self, t, t_max):
        self.t = t
        self.t_max = t_max
        super().__init__(f"time {t} lies beyond the window limit {t_max}")


class HermiticityViolation(DecolemmaError):
    def __init__(self, residue, scale):
        self.residue = residue
        self.scale = scale
        super().__init__(
            f"imaginary residue {residue:.3e} exceeds tolerance at scale {scale:.3e}"
        )


class ProfileReconstructionError(DecolemmaError):
    """The binned frequency profile failed to reproduce the expectation value."""
