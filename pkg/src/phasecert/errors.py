"""Exception hierarchy shared by all phasecert modules.

The CLI maps these onto exit codes: parameter violations -> 2,
format problems -> 3, size refusals -> 4, anything else -> 1.
"""


class PhasecertError(Exception):
    """Base class for all library errors."""


class NotCoprime(PhasecertError):
    pass


class ZeroMultiplier(PhasecertError):
    pass


class ModulusMismatch(PhasecertError):
    pass


class PairOutOfRange(PhasecertError):
    pass


class TooLarge(PhasecertError):
    """A requested exhaustive computation exceeds the desk-scale cost cap."""


class LengthMismatch(PhasecertError):
    pass


class EmptySet(PhasecertError):
    pass


class DimensionMismatch(PhasecertError):
    pass


class NotInCube(PhasecertError):
    pass


class ZeroDilation(PhasecertError):
    pass


class ParamsTooLarge(PhasecertError):
    pass


class DuplicateElements(PhasecertError):
    pass


class CubeOverflow(PhasecertError):
    pass


class TooManyColumns(PhasecertError):
    pass


class ZeroTheta(PhasecertError):
    pass


class ModulusTooSmall(PhasecertError):
    pass


class UnequalStageSizes(PhasecertError):
    pass


class StageSizeMismatch(PhasecertError):
    pass


class ParameterConditionViolated(PhasecertError):
    """Raised in strict mode; the message names the violated inequality."""


class FormatError(PhasecertError):
    pass
