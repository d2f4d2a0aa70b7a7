"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: contract errors exit 1, parse errors
exit 2, invariant violations exit 3.
"""


class SDQuiverError(Exception):
    """Base class for all library errors."""


class ContractError(SDQuiverError, ValueError):
    """A documented precondition was violated by the caller."""


class DimensionError(ContractError):
    """Matrix or representation shapes do not fit together."""


class NotReflectableError(ContractError):
    """The stacked (or concatenated) arrow matrix lacks full rank."""


class NotInChartError(ContractError):
    """The pencil determinant vanishes identically."""


class DepthExhaustedError(ContractError):
    """A bounded search ran out of depth before reaching an answer."""


class ParseError(SDQuiverError, ValueError):
    """Malformed input document or rational literal."""


class InvariantViolation(SDQuiverError, AssertionError):
    """An internal cross-check failed. Always a bug."""
