"""Dense constructions and structural predicates for g-circulant matrices.

Indexing is 0-based throughout. Entry (i, j) of g-circ(row) is
``row[(j - i*g) mod n]``; row i of Q_g carries its single 1 in column
``i*g mod n``.
"""

import logging
import math
from typing import Sequence, Tuple

import numpy as np

from .errors import DomainError, NotInvertible, NotPrime
from .models import GCirculant, PermSpec
from .numtheory import is_prime, mod_inverse

logger = logging.getLogger(__name__)

# Condition numbers above this make inverse_g_circulant refuse the matrix.
SINGULAR_COND = 1e12


def require_square(matrix: np.ndarray) -> np.ndarray:
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DomainError(f"Expected a square matrix, got shape {matrix.shape}")
    return matrix


def build_g_circulant(row: Sequence[complex], g: int) -> np.ndarray:
    """Dense n x n g-circulant whose first row is ``row``."""
    values = np.asarray(row, dtype=complex).ravel()
    n = values.size
    if n == 0:
        raise DomainError("A g-circulant needs a nonempty first row")
    i = np.arange(n)[:, np.newaxis]
    j = np.arange(n)[np.newaxis, :]
    return values[(j - i * (g % n)) % n]


def circulant(row: Sequence[complex]) -> np.ndarray:
    return build_g_circulant(row, 1)


def to_dense(a: GCirculant) -> np.ndarray:
    return build_g_circulant(a.row, a.g)


def build_qg(n: int, g: int) -> np.ndarray:
    """The g-circulant with first row (1, 0, ..., 0)."""
    if n < 1:
        raise DomainError(f"Order must be positive, got {n}")
    e1 = np.zeros(n, dtype=complex)
    e1[0] = 1
    return build_g_circulant(e1, g)


def is_g_circulant(matrix: np.ndarray, g: int, tol: float = 0.0) -> bool:
    """Check the shift recurrence a[i+1, j+g] = a[i, j], subscripts mod n."""
    matrix = require_square(matrix)
    n = matrix.shape[0]
    shifted = np.roll(np.roll(matrix, -1, axis=0), -(g % n), axis=1)
    return bool(np.allclose(shifted, matrix, rtol=0.0, atol=tol))


def is_permutation_matrix(matrix: np.ndarray) -> bool:
    """Exactly one 1 per row and column, zeros elsewhere."""
    matrix = require_square(matrix)
    is_binary = np.all((matrix == 0) | (matrix == 1))
    return bool(
        is_binary
        and np.all(matrix.sum(axis=0) == 1)
        and np.all(matrix.sum(axis=1) == 1)
    )


def is_unitary(matrix: np.ndarray, tol: float = 1e-12) -> bool:
    matrix = require_square(matrix)
    identity = np.eye(matrix.shape[0])
    return bool(np.allclose(matrix @ matrix.conj().T, identity, rtol=0.0, atol=tol))


def dft_matrix(n: int) -> np.ndarray:
    """Unitary DFT matrix with entries exp(2*pi*i*k*l/n) / sqrt(n)."""
    if n < 1:
        raise DomainError(f"Order must be positive, got {n}")
    k = np.arange(n)
    # Reduce k*l mod n before scaling so large exponents keep full accuracy.
    exponents = np.outer(k, k) % n
    return np.exp((2j * np.pi / n) * exponents) / math.sqrt(n)


def factor_qc(a: GCirculant) -> Tuple[np.ndarray, GCirculant]:
    """Split A = Q_g C with C the circulant sharing A's first row."""
    c = GCirculant(n=a.n, g=1, row=a.row)
    qg = build_qg(a.n, a.g)
    logger.debug("Factored %d-circulant of order %d as Q_g C", a.g, a.n)
    return qg, c


def cycle_decomposition(image: Sequence[int]) -> PermSpec:
    """Cycles of a bijection of {0..n-1}, each listed from its minimum.

    Fixed points are kept as 1-cycles.
    """
    image = [int(v) for v in image]
    n = len(image)
    if sorted(image) != list(range(n)):
        raise DomainError(f"Not a bijection of {{0..{n - 1}}}: {image}")

    cycles = []
    visited = [False] * n
    for start in range(n):
        if visited[start]:
            continue
        cycle = []
        i = start
        while not visited[i]:
            visited[i] = True
            cycle.append(i)
            i = image[i]
        cycles.append(cycle)
    return PermSpec(n=n, image=image, cycles=cycles)


def qg_permutation(n: int, g: int) -> PermSpec:
    """The permutation i -> i*g mod n carried by Q_g."""
    if n < 1:
        raise DomainError(f"Order must be positive, got {n}")
    if n > 1:
        mod_inverse(g, n)
    return cycle_decomposition([(i * g) % n for i in range(n)])


def w_submatrix(n: int, g: int) -> PermSpec:
    """Permutation Q_g induces on the n-1 indices other than the fixed 0.

    Index k of the result stands for index k+1 of Q_g.
    """
    if math.gcd(g % n, n) != 1:
        raise NotInvertible(f"{g} is not invertible modulo {n}")
    return cycle_decomposition([((k + 1) * g) % n - 1 for k in range(n - 1)])


def is_primary(spec: PermSpec) -> bool:
    return len(spec.cycles) == 1 and spec.n > 0


def is_symmetric_gcirc(n: int, g: int) -> bool:
    """A g-circulant of prime order is symmetric for every row iff g = n-1."""
    if not is_prime(n):
        raise NotPrime(f"{n} is not prime")
    if not 1 < g < n:
        raise DomainError(f"Shift must satisfy 1 < g < {n}, got {g}")
    return g == n - 1


def inverse_g_circulant(a: GCirculant) -> GCirculant:
    """Inverse of a nonsingular g-circulant, which is a g^-1-circulant."""
    g_inv = 1 if a.n == 1 else mod_inverse(a.g, a.n)
    dense = to_dense(a)
    cond = np.linalg.cond(dense)
    if not np.isfinite(cond) or cond > SINGULAR_COND:
        raise DomainError(f"Matrix is singular (condition number {cond:.3g})")
    inverse = np.linalg.inv(dense)
    logger.debug("Inverted %d-circulant of order %d, cond=%.3g", a.g, a.n, cond)
    return GCirculant(n=a.n, g=g_inv, row=[complex(z) for z in inverse[0]])
