"""Exception types raised across the package."""


class StepDetError(Exception):
    """Base class for domain errors (CLI maps these to exit code 2)."""


class InvalidPermutation(StepDetError, ValueError):
    pass


class TooLarge(StepDetError):
    pass


class SpecViolation(StepDetError, ValueError):
    pass


class InvalidConfig(StepDetError, ValueError):
    pass


class UnknownAlgorithm(StepDetError, KeyError):
    def __str__(self) -> str:  # KeyError would repr() the message
        return str(self.args[0]) if self.args else ""


class ContractViolation(StepDetError, ValueError):
    pass


class DivisionUndefined(StepDetError, ZeroDivisionError):
    pass


class DegenerateInput(StepDetError, ValueError):
    pass
