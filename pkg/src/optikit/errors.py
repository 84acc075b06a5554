"""Exception types shared across the package."""


class OptikitError(Exception):
    """Base class for every error raised by optikit."""


class DomainMismatch(OptikitError):
    pass


class Overflow(OptikitError):
    pass


class OutOfTable(OptikitError):
    pass


class SignatureMismatch(OptikitError):
    pass


class UnsupportedAction(OptikitError):
    pass


class NotDualisable(OptikitError):
    pass


class InvalidFunctor(OptikitError):
    pass


class AuditFailure(OptikitError):
    pass


class KindMismatch(OptikitError):
    pass


class NoCommonKind(OptikitError):
    pass


class NotAbove(OptikitError):
    pass


class StateMismatch(OptikitError):
    pass


class InvalidMonoid(OptikitError):
    pass
