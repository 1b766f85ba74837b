"""Error taxonomy shared across the library."""


class GflstabError(Exception):
    """Base class for all library errors."""


class ConfigError(GflstabError):
    """Invalid configuration text or parameter set; carries a line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SingularNetworkError(GflstabError):
    """Network reduction degenerates (|Z_g + Z_l'| ~ 0)."""


class NoEquilibriumError(GflstabError):
    """|p_m/p_e| > 1: the converter cannot synchronize."""


class DegreeOverflowError(GflstabError):
    """Polynomial operation would exceed the target degree without truncation."""


class NotASaddleError(GflstabError):
    """Boundary tracing seeded at a point without an unstable eigenvalue."""


class ResonanceError(GflstabError):
    """Homogeneous Lyapunov solve hit a resonant eigenvalue combination."""


class NonHurwitzError(GflstabError):
    """Linearization has an eigenvalue with nonnegative real part."""


class WindowTooSmallError(GflstabError):
    """Critical-level search found no sign-change locus in the window."""


class EvolutionDivergedError(GflstabError):
    """Level-set boundary escaped the search window during evolution."""


class TangencyBudgetError(GflstabError):
    """Tangency not reached within the time budget; carries the last safe coefficients."""

    def __init__(self, message, last_safe=None):
        self.last_safe = last_safe
        super().__init__(message)


class NumericalFailureError(GflstabError):
    """Simulation produced a non-finite state; carries the last good sample."""

    def __init__(self, message, last_sample=None):
        self.last_sample = last_sample
        super().__init__(message)


class ClassificationInconclusiveError(GflstabError):
    """Oracle probes returned undetermined verdicts; carries the offending probes."""

    def __init__(self, message, probes=()):
        self.probes = tuple(probes)
        super().__init__(message)
