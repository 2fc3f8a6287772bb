"""Exception types shared across the package."""


class AccuracyError(RuntimeError):
    """A numerical routine could not meet its accuracy contract.

    Carries the best available residual estimate in ``residual``.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class MagnitudeError(OverflowError):
    """An intermediate quantity left the representable double range."""
