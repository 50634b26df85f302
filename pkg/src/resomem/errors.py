"""Exception types shared across the simulation modules."""


class ResomemError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(ResomemError):
    """Fock-space truncation too small, or mismatched dimensions."""


class DomainError(ResomemError):
    """Parameter outside its mathematical domain."""


class ContractError(ResomemError):
    """A caller-side precondition (e.g. normalization) was violated."""


class NumericalAccuracyWarning(UserWarning):
    """Raised via warnings.warn when truncation-edge weight endangers accuracy."""
