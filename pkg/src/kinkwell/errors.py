"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input outside the supported parameter box."""


class AccuracyError(RuntimeError):
    """Requested accuracy could not be reached; carries the achieved estimate."""

    def __init__(self, message: str, achieved: float = float("nan")):
        super().__init__(message)
        self.achieved = achieved


class NoRootError(RuntimeError):
    """A bracket contained no sign change of the target residual."""


class ResolutionError(RuntimeError):
    """Bracket scan could not separate nearby roots even after refinement."""
