"""Exception hierarchy shared by all stages."""


class SpikePhaseError(Exception):
    """Base class for every error raised by this package."""


class DomainError(SpikePhaseError, ValueError):
    """An argument falls outside the domain of an operation."""


class SizeError(DomainError):
    """Problem is too large for an exhaustive routine."""


class GenerationError(SpikePhaseError, RuntimeError):
    """Random construction failed within the attempt budget."""


class InconsistencyError(SpikePhaseError):
    """Data cannot be realized by any admissible signal."""


class RankDeficiencyError(SpikePhaseError, ArithmeticError):
    """A linear system is numerically rank deficient."""


class NumericalError(SpikePhaseError, ArithmeticError):
    """An iterative numerical routine failed."""


class OffCircleError(InconsistencyError):
    """A Prony root lies too far from the unit circle."""


class InsufficientComponentError(SpikePhaseError):
    """The propagated component is too small to invert the resampling."""


class PipelineError(SpikePhaseError):
    """A stage of the recovery pipeline failed.

    The original exception is kept as ``__cause__`` and in :attr:`cause`.
    """

    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")
