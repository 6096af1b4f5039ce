"""Exception hierarchy shared by all modules."""


class BerezError(Exception):
    """Base class for every error raised by this package."""


class ParityError(BerezError, ValueError):
    """An element has the wrong (or mixed) parity for the requested use."""


class NotInvertible(BerezError, ArithmeticError):
    """A scalar or matrix with singular body was inverted."""


class NonGeneric(BerezError, ArithmeticError):
    """A genericity precondition failed; ``precondition`` names which one."""

    def __init__(self, precondition, detail=None):
        self.precondition = precondition
        msg = precondition if detail is None else f"{precondition}: {detail}"
        super().__init__(msg)


class DomainError(BerezError, ValueError):
    """Input outside the domain where the computation is exact."""


class InputError(BerezError, ValueError):
    """Malformed serialized input."""
