"""Recover a g-circulant from its diagonal.

Diagonal entry l of g-circ(row) is ``row[l*(1-g) mod n]``, so the diagonal
is Q_{n-g+1} applied to the first row. For n prime and g a generator that
map is a bijection and the row can be read back exactly.
"""

import logging
import math
from typing import List, Optional

import numpy as np

from .errors import DomainError
from .matcore import qg_permutation
from .models import DiagonalVector, GCirculant, PermSpec

logger = logging.getLogger(__name__)


def diagonal_of(a: GCirculant) -> np.ndarray:
    ell = np.arange(a.n)
    return a.row_array()[(ell * (1 - a.g)) % a.n]


def diagonal_permutation(n: int, g: int) -> PermSpec:
    """Permutation of Q_{n-g+1}, mapping the first row onto the diagonal."""
    shift = (n - g + 1) % n
    if math.gcd(shift, n) != 1:
        raise DomainError(
            f"The diagonal of a {g}-circulant of order {n} does not determine "
            f"its first row"
        )
    return qg_permutation(n, shift)


def first_row_from_diagonal(d: DiagonalVector) -> GCirculant:
    if d.unknown_index is not None:
        raise DomainError(
            f"Diagonal entry {d.unknown_index} is unknown; use complete_with_perron"
        )
    perm = diagonal_permutation(d.n, d.g)
    diagonal = [complex(v) for v in d.values if v is not None]
    row: List[complex] = [0j] * d.n
    for ell, position in enumerate(perm.image):
        row[position] = diagonal[ell]
    return GCirculant(n=d.n, g=d.g, row=row)


def complete_with_perron(d: DiagonalVector, beta1: float) -> GCirculant:
    """Fill the single unknown entry so the trace equals beta1, then rebuild."""
    missing: Optional[int] = d.unknown_index
    if missing is None:
        raise DomainError("Exactly one diagonal entry must be unknown, found none")
    known = sum(v for v in d.values if v is not None)
    values = list(d.values)
    values[missing] = complex(beta1) - known
    logger.debug("Completed diagonal entry %d with %s", missing, values[missing])
    return first_row_from_diagonal(DiagonalVector(n=d.n, g=d.g, values=values))
