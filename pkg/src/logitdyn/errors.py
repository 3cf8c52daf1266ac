"""Exception types shared across the package."""


class LogitDynError(Exception):
    """Base class for all package errors."""


class InvalidProfileError(LogitDynError):
    """Profile length or entries do not match the game."""


class InvalidParametersError(LogitDynError):
    """Game constructor parameters violate their constraints."""


class CapacityError(LogitDynError):
    """Profile space (or pair space) exceeds the configured cap."""


class MissingPotentialError(LogitDynError):
    """Operation requires a game with an attached exact potential."""


class ReversibilityError(LogitDynError):
    """Operation requires a reversible chain but detailed balance fails."""


class InvalidSetError(LogitDynError):
    """Bottleneck set has stationary mass above 1/2."""


class HorizonError(LogitDynError):
    """Iteration horizon exhausted before the target was reached.

    Carries the last distance value seen, when available.
    """

    def __init__(self, message, last_value=None):
        super().__init__(message)
        self.last_value = last_value


class NumericalError(LogitDynError):
    """A numerical routine failed to converge or cross-check."""


class UnsupportedGameError(LogitDynError):
    """Operation is only defined for 2-strategy games."""


class ConfigError(LogitDynError):
    """Experiment configuration is malformed."""
