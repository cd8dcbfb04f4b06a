"""Exception hierarchy shared by all modules."""


class MomentumJumpError(Exception):
    """Base class for errors raised by this package."""


class DomainError(MomentumJumpError, ValueError):
    """An argument lies outside the domain of the operation."""


class UnsupportedConfinementError(DomainError):
    """The operation is only defined for another confinement variant."""


class NumericalError(MomentumJumpError, ArithmeticError):
    """A numerical procedure failed (non-convergence, bad bracket, ...)."""


class NoSolutionError(NumericalError):
    """An inverse problem has no solution inside the search bracket."""


class ConfigError(MomentumJumpError, ValueError):
    """Invalid device configuration. ``path`` names the offending key."""

    def __init__(self, message, path=""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)
