"""
Engine exceptions

Everything a caller can trigger with bad input derives from ValueError,
so the routers and the CLI handle them in one place.
"""
from typing import Any, Sequence


class RingError(ValueError):
    """Malformed ring descriptor or element, or an unsupported ring."""


class ZeroQuotientError(RingError):
    """Quotient by a unit: the result would be the zero ring."""


class PreconditionError(ValueError):
    """An operation was called outside its precondition."""


class InvalidCertificateError(PreconditionError):
    """The quadruple (e,f,s,t) does not satisfy a(es)+b(et)+c(fs)+d(ft)=1."""


class NotUnimodularError(PreconditionError):
    """The entries of a matrix (or a tuple) do not generate the unit ideal."""

    def __init__(self, generators: Sequence[Any], message: str = ""):
        self.generators = list(generators)
        super().__init__(message or f"Not unimodular: generators {self.generators} do not generate the unit ideal")


class CapExceededError(ValueError):
    """A configured size or height cap was exceeded."""


class InvariantViolation(RuntimeError):
    """A postcondition check failed. Indicates an engine bug."""
