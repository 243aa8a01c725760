"""Exception types shared across the package.

Errors that represent *answers* (no root exists, verdict inconclusive)
are ordinary return values, not exceptions; only contract violations and
exhausted resources raise.
"""
from __future__ import annotations


class PpmError(Exception):
    """Base class for all package errors."""


class InputError(PpmError):
    """Malformed file, flag or group description."""


class NotPIntegral(PpmError):
    """Scalar has negative p-adic valuation where an integer was required."""


class NotNested(PpmError):
    """Lattice containment precondition failed."""


class Singular(PpmError):
    """Matrix is not invertible."""


class NotUnipotent(PpmError):
    """Matrix is not unipotent."""


class BadDomain(PpmError):
    """Element lies outside the congruence domain of the operation."""


class PDividesK(PpmError):
    """Exponent shares a factor with the residue characteristic."""


class PrecisionExhausted(PpmError):
    """Answer is undecidable at the working precision; retry higher."""


class UnknownCatalogEntry(PpmError):
    """Group catalog identifier not recognised."""


class NotASubgroup(PpmError):
    """No containment witness between the two catalog groups."""


class UnsupportedCharacteristic(PpmError):
    """Requested analysis over a field this build does not compute."""


class CapExceeded(PpmError):
    """Iteration bound reached before a certificate; carries the trace."""

    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = trace


class NotTypeR(PpmError):
    """A sampled element has an eigenvalue off the unit circle."""

    def __init__(self, witness):
        super().__init__(f"witness word {witness.word_str()} is not type R")
        self.witness = witness


class InternalInvariantViolation(PpmError):
    """A certified quantity failed its re-verification. Always a bug."""
