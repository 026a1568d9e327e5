"""Exception types raised by the library."""


class QwlabError(Exception):
    """Base class for all library errors."""


class DimensionMismatchError(QwlabError, ValueError):
    """Operands describe registers of incompatible dimension."""


class NotHermitianError(QwlabError, ValueError):
    """A matrix required to be Hermitian is not, beyond tolerance."""


class InvalidStateError(QwlabError, ValueError):
    """A density matrix violates its construction invariants."""


class DecompositionError(QwlabError, ValueError):
    """An observable spectrum does not admit the declared symmetry split."""


class ZeroVarianceError(QwlabError, RuntimeError):
    """Pearson correlation undefined: a subsystem variance is (numerically) zero.

    This is the flagged error for charge-frozen subsystems; callers that can
    proceed without the Pearson value catch it and record a flag instead.
    """

    def __init__(self, side: str):
        self.side = side
        super().__init__(f"zero variance on subsystem {side}; Pearson undefined")


class TraceDriftError(QwlabError, RuntimeError):
    """Lindblad integration lost trace normalization beyond the abort threshold."""


class DimensionOverflowError(QwlabError, ValueError):
    """Requested problem size exceeds the configured desk-scale cap."""


class EmptySectorError(QwlabError, ValueError):
    """A symmetry sector contains no basis states."""
