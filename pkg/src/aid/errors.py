"""Exception hierarchy shared by every module of the package."""


class AidError(Exception):
    """Base class for all errors raised by :mod:`aid`."""


class InvalidVariableName(AidError, ValueError):
    pass


class UnknownVariable(AidError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class ArityMismatch(AidError, ValueError):
    pass


class DuplicateVariableInSequence(AidError, ValueError):
    pass


class EmptySequence(AidError, ValueError):
    pass


class BoundOutOfRange(AidError, ValueError):
    pass


class MixedAssumptionKinds(AidError, ValueError):
    pass


class AtomSyntaxError(AidError, ValueError):
    def __init__(self, text, position, expected):
        self.text = text
        self.position = position
        self.expected = expected
        super().__init__(f"at column {position}: expected {expected} in {text!r}")


class TeamFormatError(AidError, ValueError):
    pass


class RaggedRow(TeamFormatError):
    pass


class DuplicateHeader(TeamFormatError):
    pass


class EmptyHeader(TeamFormatError):
    pass


class InvalidRuleInstance(AidError, ValueError):
    def __init__(self, step, reason):
        self.step = step
        self.reason = reason
        super().__init__(f"step {step}: {reason}")


class DerivableGoal(AidError):
    """Raised when a counterexample is requested for a goal that is derivable."""


class VariableCapExceeded(AidError):
    pass


class ArityRestrictionViolated(AidError):
    pass


class NonUnaryAtoms(AidError):
    pass


class GoalBoundIsOne(AidError):
    pass


class ResourceBudgetExceeded(AidError):
    pass


class CertificateTooLarge(AidError):
    """The counterexample team would exceed the row cap."""


class CertificateError(AidError, AssertionError):
    """A constructed counterexample failed its own self-check."""
