"""Exception types shared across the package."""


class VortexError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(VortexError):
    """An argument violates a documented precondition."""


class PresentationMismatchError(VortexError):
    """Two ring elements belong to different presentations."""


class NonNilpotentError(VortexError):
    """A formal series was applied to an element with a forbidden scalar part."""


class SubsetLimitError(VortexError):
    """A subset enumeration was requested beyond the supported size."""


class NotFoundError(VortexError):
    """A guaranteed object was not found, signalling a precondition breach upstream."""


class NoThresholdError(VortexError):
    """No coupling threshold exists because the decoupled vector is not interior."""


class UnsupportedKindError(VortexError):
    """The requested quantity is not computed for this moduli-space kind."""


class UnsupportedManifoldError(VortexError):
    """The requested datum is not available for this manifold descriptor."""


class NotOpenDenseError(VortexError):
    """The map space does not sit as an open dense subset of the moduli space."""


class ConsistencyError(VortexError):
    """Two independent internal computations of the same quantity disagree."""


class ModelError(VortexError):
    """A problem instance is internally inconsistent."""


class ParseError(VortexError):
    """A model file could not be parsed."""
