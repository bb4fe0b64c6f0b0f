"""gcirc - spectra, reconstruction and nonnegative realizations of g-circulants."""

__version__ = "0.1.0"
__author__ = "palace22"

from .errors import (
    DomainError,
    GCircError,
    MalformedInput,
    NotGenerator,
    NotInvertible,
    NotPrime,
    OracleFailure,
    VerificationFailure,
)
from .models import BlockGCirculant, BlockTargets, GCirculant, Spectrum, TargetList
from .niep import realize
from .blockcirc import realize_block

__all__ = [
    "GCirculant",
    "BlockGCirculant",
    "Spectrum",
    "TargetList",
    "BlockTargets",
    "realize",
    "realize_block",
    "GCircError",
    "DomainError",
    "NotInvertible",
    "NotPrime",
    "NotGenerator",
    "OracleFailure",
    "VerificationFailure",
    "MalformedInput",
]
