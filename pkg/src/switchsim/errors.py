"""Exception hierarchy shared by every module."""


class SwitchSimError(Exception):
    """Base class for all library errors."""


class DimensionError(SwitchSimError, ValueError):
    """Operand dimensions disagree or exceed the configured cap."""


class StructureError(SwitchSimError, ValueError):
    """Subsystem factorization is missing or unsuitable for the operation."""


class ContractError(SwitchSimError, ValueError):
    """An input violates a documented precondition (Hermiticity, normalization, ...)."""


class ValidationError(SwitchSimError, ValueError):
    """A parameter object (spectrum, control weight, sweep spec) is malformed."""


class DegenerateOutcomeError(SwitchSimError, ArithmeticError):
    """A measurement outcome has (numerically) zero probability."""

    def __init__(self, message, prob=0.0):
        super().__init__(message)
        self.prob = prob
