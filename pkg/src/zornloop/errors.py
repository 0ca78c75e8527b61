"""Exception hierarchy shared by every module.

Precondition failures carry an optional ``witness`` payload that the CLI
serializes verbatim.
"""


class ZornError(Exception):
    """Base class; ``witness`` is JSON-serializable or None."""

    def __init__(self, message="", witness=None):
        super().__init__(message)
        self.witness = witness


class NotInvertible(ZornError):
    pass


class NotCoprime(ZornError):
    pass


class NotUnimodular(ZornError):
    pass


class ModulusMismatch(ZornError):
    pass


class InvalidSL2(ZornError):
    pass


class PreconditionViolated(ZornError):
    pass


class NotInGamma(ZornError):
    pass


class DegenerateV(ZornError):
    pass


class TooLarge(ZornError):
    pass


class NotDivisor(ZornError):
    pass


class LagrangeFails(ZornError):
    pass
