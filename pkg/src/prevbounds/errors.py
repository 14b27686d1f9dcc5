"""Exception hierarchy.

Every error raised on purpose by the library derives from
:class:`PrevBoundsError`; the CLI maps the two broad families
(:class:`InputError` and :class:`InfeasibleError`) onto exit codes.
"""


class PrevBoundsError(Exception):
    """Base class for all library errors."""


class InputError(PrevBoundsError, ValueError):
    """A malformed or out-of-contract argument."""


class InfeasibleError(PrevBoundsError):
    """An optimisation set turned out to be empty."""


# core
class EmptyConditioningEvent(InputError):
    pass


class OutOfRange(InputError):
    pass


class DomainMismatch(InputError):
    pass


# lp
class MalformedProgram(InputError):
    pass


class UnboundedRegion(PrevBoundsError):
    pass


class VertexBudgetExceeded(PrevBoundsError):
    pass


# consistency
class EmptyCredalSet(InfeasibleError):
    pass


class EmptyConstrainedCredalSet(EmptyCredalSet):
    pass


# jensen
class BoundaryPoint(InputError):
    pass


class ConjugacyViolation(InputError):
    pass


class BadExponents(InputError):
    pass


class NegativeMoment(InputError):
    pass


# tailbounds
class NonPositiveThreshold(InputError):
    pass


class NonPositiveEpsilon(InputError):
    pass


class NegativityFlagMissing(InputError):
    pass


class ZeroLowerPrevision(InputError):
    pass


# cli / document
class ParseError(InputError):
    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class SchemaError(InputError):
    pass


class DimensionError(InputError):
    pass


class UnknownIdentifier(InputError):
    pass
