"""Forward spectral maps and the dense eigenvalue oracle.

Closed forms go through the unitary DFT matrix of :mod:`gcirc.matcore`.
The oracle is ``scipy.linalg.eig`` (Hessenberg reduction plus shifted QR)
and never touches a DFT path, so comparing the two is a real check.
"""

import logging
import math
from typing import List, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy import linalg
from scipy.optimize import linear_sum_assignment

from .errors import DomainError, NotPrime, OracleFailure
from .matcore import dft_matrix, qg_permutation, require_square
from .models import (
    ComplexValue,
    GCirculant,
    MatchedPair,
    MatchReport,
    PDMatrix,
    Spectrum,
)
from .numtheory import is_prime, mod_inverse, require_generator

logger = logging.getLogger(__name__)

ORACLE_MAX_ORDER = 128
ORACLE_RESIDUAL = 1e-8
DEFAULT_TOL = 1e-6

SpectrumLike = Union[Spectrum, Sequence[complex], np.ndarray]


def realness_defect(values: Sequence[complex]) -> float:
    """Largest violation of the pairing lambda[n-k] = conj(lambda[k]).

    Zero exactly when the values are the DFT of a real first row.
    """
    lam = np.asarray(values, dtype=complex).ravel()
    n = lam.size
    if n == 0:
        return 0.0
    defects = [abs(lam[0].imag)]
    for k in range(1, (n - 1) // 2 + 1):
        defects.append(abs(lam[n - k] - np.conj(lam[k])))
    if n % 2 == 0:
        defects.append(abs(lam[n // 2].imag))
    return float(max(defects))


def is_conjugate_symmetric(values: Sequence[complex], tol: float = 1e-12) -> bool:
    return realness_defect(values) <= tol


class ConjugateSymmetricList(BaseModel):
    """Ordered eigenvalue list of a real circulant."""

    model_config = ConfigDict(frozen=True)

    values: List[ComplexValue] = Field(min_length=1)
    tol: float = Field(default=1e-12, ge=0)

    @model_validator(mode="after")
    def _check_pairing(self) -> "ConjugateSymmetricList":
        defect = realness_defect(self.values)
        if defect > self.tol:
            raise DomainError(
                f"Values are not conjugate-symmetric (defect {defect:.3g} > {self.tol})"
            )
        return self


def circulant_eigenvalues(row: Sequence[complex]) -> np.ndarray:
    """lambda_k = sum_l row[l] * tau**(k*l), k = 0..n-1, in index order."""
    c = np.asarray(row, dtype=complex).ravel()
    if c.size == 0:
        raise DomainError("A circulant needs a nonempty first row")
    return math.sqrt(c.size) * (dft_matrix(c.size) @ c)


def circulant_from_eigenvalues(lambdas: Sequence[complex]) -> np.ndarray:
    """First row c_k = (1/n) sum_l lambda_l * tau**(-k*l)."""
    lam = np.asarray(lambdas, dtype=complex).ravel()
    if lam.size == 0:
        raise DomainError("Eigenvalue list must be nonempty")
    row = (dft_matrix(lam.size).conj() @ lam) / math.sqrt(lam.size)
    logger.debug(
        "Inverse DFT of %d eigenvalues, max imaginary part %.3g",
        lam.size,
        float(np.max(np.abs(row.imag))),
    )
    return row


def g_circulant_spectrum(
    c_eigs: Sequence[complex], n: int, g: int, tol: float = DEFAULT_TOL
) -> Spectrum:
    """Spectrum of Q_g C from the eigenvalues of C, n prime and g a generator.

    Returns lambda_1 followed by r * phi**j, j = 0..n-2, where r is the
    positive real (n-1)-th root of lambda_2 * ... * lambda_n and
    phi = exp(2*pi*i/(n-1)).
    """
    if not is_prime(n):
        raise NotPrime(f"{n} is not prime")
    require_generator(g, n)
    lam = np.asarray(c_eigs, dtype=complex).ravel()
    if lam.size != n:
        raise DomainError(f"Expected {n} circulant eigenvalues, got {lam.size}")
    if n == 2:
        return Spectrum(values=list(lam), tol=tol)

    product = complex(np.prod(lam[1:]))
    scale = max(1.0, abs(product))
    if abs(product.imag) > tol * scale or product.real < -tol * scale:
        raise DomainError(
            f"Product of the last {n - 1} eigenvalues is {product:.6g}, not a "
            f"nonnegative real; the circulant row is not real"
        )
    r = abs(product) ** (1.0 / (n - 1))
    phi = np.exp(2j * np.pi * np.arange(n - 1) / (n - 1))
    logger.debug("g-circulant spectrum for n=%d, g=%d: r=%.12g", n, g, r)
    return Spectrum(values=[lam[0], *(r * phi)], tol=tol)


def pd_spectrum(pd: PDMatrix, tol: float = DEFAULT_TOL) -> Spectrum:
    """Eigenvalues of P_nu D: the theta-th roots of each cycle's diagonal product."""
    diag = np.array(pd.diag, dtype=complex)
    values: List[complex] = []
    for cycle in pd.perm.cycles:
        theta = len(cycle)
        product = complex(np.prod(diag[cycle]))
        modulus = abs(product) ** (1.0 / theta)
        angle = np.angle(product)
        for m in range(theta):
            values.append(modulus * np.exp(1j * (angle + 2 * np.pi * m) / theta))
    return Spectrum(values=values, tol=tol)


def pd_form(a: GCirculant) -> PDMatrix:
    """PD-matrix Q_{g^-1} diag(lambda(C)) unitarily similar to A = Q_g C.

    Holds for any order with gcd(n, g) = 1: F* A F = Q_{g^-1} D.
    """
    g_inv = 1 if a.n == 1 else mod_inverse(a.g, a.n)
    perm = qg_permutation(a.n, g_inv)
    return PDMatrix(perm=perm, diag=list(circulant_eigenvalues(a.row)))


def dense_eigen_oracle(matrix: np.ndarray, tol: float = DEFAULT_TOL) -> Spectrum:
    """All eigenvalues of a dense matrix with a residual check on each pair."""
    matrix = np.asarray(require_square(matrix), dtype=complex)
    n = matrix.shape[0]
    if n > ORACLE_MAX_ORDER:
        raise DomainError(f"Oracle order is capped at {ORACLE_MAX_ORDER}, got {n}")
    if not np.all(np.isfinite(matrix)):
        raise DomainError("Matrix has non-finite entries")

    try:
        eigenvalues, eigenvectors = linalg.eig(matrix)
    except linalg.LinAlgError as e:
        raise OracleFailure(f"Eigenvalue iteration did not converge: {e}")

    norm = float(np.linalg.norm(matrix)) or 1.0
    residuals = (
        np.linalg.norm(matrix @ eigenvectors - eigenvectors * eigenvalues, axis=0)
        / norm
    )
    worst = float(residuals.max()) if residuals.size else 0.0
    if worst > ORACLE_RESIDUAL:
        raise OracleFailure(
            f"Eigenpair residual {worst:.3g} exceeds {ORACLE_RESIDUAL:.0e}"
        )
    logger.debug("Oracle on order %d: worst relative residual %.3g", n, worst)
    return Spectrum(values=list(eigenvalues), tol=tol)


def _as_array(values: SpectrumLike) -> np.ndarray:
    if isinstance(values, Spectrum):
        return values.as_array()
    return np.asarray(values, dtype=complex).ravel()


def spectra_match(
    a: SpectrumLike, b: SpectrumLike, tol: Optional[float] = None
) -> MatchReport:
    """Minimum-cost pairing of two multisets; matched iff every pair is within tol."""
    if tol is None:
        tol = a.tol if isinstance(a, Spectrum) else DEFAULT_TOL
    left, right = _as_array(a), _as_array(b)
    if left.size != right.size:
        raise DomainError(
            f"Spectra have different cardinalities: {left.size} vs {right.size}"
        )
    if left.size == 0:
        return MatchReport(matched=True, tol=tol, max_residual=0.0, pairs=[])

    cost = np.abs(left[:, np.newaxis] - right[np.newaxis, :])
    rows, cols = linear_sum_assignment(cost)
    pairs = [
        MatchedPair(left=int(i), right=int(j), distance=float(cost[i, j]))
        for i, j in zip(rows, cols)
    ]
    max_residual = max(pair.distance for pair in pairs)
    return MatchReport(
        matched=max_residual <= tol, tol=tol, max_residual=max_residual, pairs=pairs
    )
