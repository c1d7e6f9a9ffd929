"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class HsspError(Exception):
    exit_code = 1


class ParameterError(HsspError, ValueError):
    exit_code = 2


class HypothesisViolation(HsspError):
    """The instance falls outside the hypotheses the method needs (e.g. p | q - 1)."""

    exit_code = 3


class CheckFailure(HsspError):
    exit_code = 4


class PromiseViolation(CheckFailure):
    """An oracle's level sets are not the orbits (or cosets) of any candidate subgroup."""


class InsufficientSamples(CheckFailure):
    pass


class CapacityError(HsspError):
    exit_code = 5
