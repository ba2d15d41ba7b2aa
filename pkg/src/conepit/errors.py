"""Exception hierarchy shared by all conepit modules."""


class ConepitError(Exception):
    """Base class for every error raised by this package."""


class UsageError(ConepitError):
    """Malformed input documents or values (CLI exit code 2)."""


class PreconditionError(ConepitError):
    """A mathematical precondition of an operation does not hold (CLI exit code 3)."""


class ParseError(UsageError):
    pass


class ValidationError(UsageError):
    pass


class ArityMismatch(PreconditionError):
    pass


class FieldMismatch(PreconditionError):
    pass


class MixedFields(FieldMismatch):
    pass


class ZeroInverse(PreconditionError):
    pass


class CharTooSmall(PreconditionError):
    pass


class ZeroPolynomial(PreconditionError):
    pass


class TooLarge(PreconditionError):
    pass


class DuplicateNodes(PreconditionError):
    pass


class EmptyInput(PreconditionError):
    pass


class ArityTooSmall(PreconditionError):
    pass


class BadParameters(PreconditionError):
    pass


class DesignTooSmall(PreconditionError):
    pass


class RaggedInput(PreconditionError):
    pass


class RankZero(PreconditionError):
    pass


class NotIsolating(PreconditionError):
    pass


class VerificationFailed(ConepitError):
    """A guaranteed verification step failed; indicates a bug or a violated caller promise."""
