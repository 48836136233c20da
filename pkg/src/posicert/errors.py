"""Exception hierarchy shared by every posicert module."""

from __future__ import annotations


class PosicertError(Exception):
    """Base class for all library errors."""


class ArityError(PosicertError, ValueError):
    """Operands live in polynomial rings with different numbers of variables."""


class ParseError(PosicertError, ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


class NotDivisibleError(PosicertError, ArithmeticError):
    def __init__(self, quotient, remainder):
        self.quotient = quotient
        self.remainder = remainder
        super().__init__(f"division is not exact: remainder {remainder}")


class PreconditionError(PosicertError, ValueError):
    pass


class CertificateError(PosicertError, ValueError):
    """A certificate is structurally malformed."""


class NegativeOnSetError(PosicertError):
    """The polynomial takes a negative value on the set; carries the point."""

    def __init__(self, witness, value, message: str | None = None):
        self.witness = witness
        self.value = value
        super().__init__(message or f"negative value {value} at {witness}")


class CapabilityError(PosicertError):
    """Input lies outside what the constructive algorithms support."""

    def __init__(self, message: str, factor=None):
        self.factor = factor
        super().__init__(message)


class ConstructionError(PosicertError, AssertionError):
    """An internal consistency check failed; indicates a bug, not bad input."""
