"""Exception hierarchy for gcirc.

Every failure is a ``ValueError`` so callers can catch it the same way they
catch pydantic validation errors.
"""


class GCircError(ValueError):
    """Base class for all gcirc errors."""


class DomainError(GCircError):
    """An input violates the hypotheses of the requested operation."""


class NotInvertible(DomainError):
    """An integer has no inverse modulo n."""


class NotPrime(DomainError):
    """A modulus or order that must be prime is not."""


class NotGenerator(DomainError):
    """A shift is not a cyclic generator of U(Z/pZ)."""


class OracleFailure(GCircError):
    """The dense eigenvalue solver failed or produced large residuals."""


class VerificationFailure(GCircError):
    """A replayed golden example or property check failed."""


class MalformedInput(GCircError):
    """Input values or files could not be parsed."""
