"""Exception types shared across the package."""


class ArgumentError(ValueError):
    """Invalid argument: wrong size, dimension mismatch, non-finite input."""


class SingularityError(ValueError):
    """Coincident interpolation nodes: the closed-form coefficient ratio divides by zero."""


class ResourceError(RuntimeError):
    """Requested computation exceeds the built-in combinatorial guard."""


class StepSizeError(RuntimeError):
    """Integrator grid too coarse for the requested per-step accuracy."""

    def __init__(self, message, suggested_steps=None):
        super().__init__(message)
        self.suggested_steps = suggested_steps
