"""Block g-circulant matrices whose blocks are circulant.

Symbols: ``p`` is the order of the block grid (prime, with generator g) and
``n`` the order of each circulant block, with omega = exp(2*pi*i/n) and
phi = exp(2*pi*i/(p-1)). Block (i, j) of the assembled matrix is
``circ(blocks[(j - i*g) mod p])``.

The order-p matrices S_k collect the k-th circulant eigenvalue of every
block; their inverse DFT across k gives L_k, whose entry (u, v) is the
k-th coefficient of block (u, v). Entrywise nonnegativity of all L_k
certifies a nonnegative block matrix.
"""

import logging
import math
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import DomainError
from .matcore import circulant, dft_matrix, to_dense
from .models import (
    BlockGCirculant,
    BlockRealizationReport,
    BlockTargets,
    BlockWitness,
    GCirculant,
    Spectrum,
)
from .niep import NONNEG_TOL, closed_form_row
from .spectra import (
    DEFAULT_TOL,
    ORACLE_MAX_ORDER,
    circulant_eigenvalues,
    dense_eigen_oracle,
    g_circulant_spectrum,
    spectra_match,
)

logger = logging.getLogger(__name__)

# Imaginary parts of L_k above this mean the S_k family is not conjugate-paired.
REALNESS_TOL = 1e-9
# Rows of S_k with imaginary parts below this use the real closed form.
REAL_ROW_TOL = 1e-12

MatrixLike = Union[GCirculant, np.ndarray]


def assemble(b: BlockGCirculant) -> np.ndarray:
    """Dense (p*n) x (p*n) matrix of a block g-circulant."""
    blocks = [circulant(row) for row in b.block_array()]
    grid = [[blocks[(j - i * b.g) % b.p] for j in range(b.p)] for i in range(b.p)]
    return np.block(grid)


def s_matrices(b: BlockGCirculant) -> List[GCirculant]:
    """S_k = g-circ(lambda_k(A_1), ..., lambda_k(A_p)) for k = 0..n-1."""
    eigs = np.array([circulant_eigenvalues(row) for row in b.block_array()])
    return [
        GCirculant(n=b.p, g=b.g, row=[complex(z) for z in eigs[:, k]])
        for k in range(b.n)
    ]


def block_spectrum(b: BlockGCirculant, tol: float = DEFAULT_TOL) -> Spectrum:
    """Union over k of the spectra of the S_k."""
    values: List[complex] = []
    for k, s_k in enumerate(s_matrices(b)):
        row = s_k.row_array()
        if np.max(np.abs(row.imag)) <= REAL_ROW_TOL * max(1.0, np.max(np.abs(row))):
            part = g_circulant_spectrum(
                circulant_eigenvalues(row.real), b.p, b.g, tol=tol
            )
        else:
            logger.debug("S_%d has a complex row, using the oracle", k)
            part = dense_eigen_oracle(to_dense(s_k), tol=tol)
        values.extend(part.values)
    return Spectrum(values=values, tol=tol)


def _as_dense(matrix: MatrixLike) -> np.ndarray:
    if isinstance(matrix, GCirculant):
        return to_dense(matrix)
    return np.asarray(matrix, dtype=complex)


def l_matrices(s: Sequence[MatrixLike]) -> List[np.ndarray]:
    """L_k = (1/n) sum_l S_l * omega**(-k*l), summed in index order for each k."""
    dense = [_as_dense(m) for m in s]
    if not dense:
        raise DomainError("Need at least one S matrix")
    shape = dense[0].shape
    if any(m.shape != shape for m in dense):
        raise DomainError(
            f"S matrices have mismatched orders: {[m.shape for m in dense]}"
        )

    n = len(dense)
    result = []
    for k in range(n):
        total = np.zeros(shape, dtype=complex)
        for ell, s_ell in enumerate(dense):
            total = total + s_ell * np.exp(-2j * np.pi * ((k * ell) % n) / n)
        result.append(total / n)
    return result


def max_imaginary(matrices: Sequence[np.ndarray]) -> float:
    """Largest imaginary part across a family of matrices."""
    return max(float(np.max(np.abs(np.imag(m)))) for m in matrices)


def block_target_spectrum(t: BlockTargets, tol: float = DEFAULT_TOL) -> Spectrum:
    """Union over k of (beta1_k, beta2_k * phi**j, j = 0..p-2)."""
    phi = np.exp(2j * np.pi * np.arange(t.p - 1) / (t.p - 1))
    values: List[complex] = []
    for beta1, beta2 in zip(t.beta1, t.beta2):
        values.append(complex(beta1))
        values.extend(beta2 * phi)
    return Spectrum(values=values, tol=tol)


def within_nonnegative(min_value: float, max_abs: float) -> bool:
    """Nonnegativity up to NONNEG_TOL relative to the largest magnitude (at least 1)."""
    return min_value >= -NONNEG_TOL * max(1.0, max_abs)


def m_matrix_condition(t: BlockTargets) -> Tuple[bool, np.ndarray]:
    """Verdict of G = (1/sqrt(n)) M F* >= 0 together with G.

    Row 1 of the p x n matrix M holds beta1_k + (p-1)*beta2_k, the other rows
    beta1_k - beta2_k. Column k of G is p times the first row of L_k.
    """
    beta1, beta2 = np.array(t.beta1), np.array(t.beta2)
    m = np.tile(beta1 - beta2, (t.p, 1))
    m[1] = beta1 + (t.p - 1) * beta2
    g_matrix = (m @ dft_matrix(t.n).conj()) / math.sqrt(t.n)
    first_rows = g_matrix.real / t.p
    verdict = within_nonnegative(
        float(np.min(first_rows)), float(np.max(np.abs(first_rows)))
    )
    return verdict, g_matrix.real


def _most_negative(l_real: List[np.ndarray]) -> BlockWitness:
    stacked = np.stack(l_real)
    k, u, v = np.unravel_index(int(np.argmin(stacked)), stacked.shape)
    return BlockWitness(k=int(k), u=int(u), v=int(v), value=float(stacked[k, u, v]))


def realize_block(
    t: BlockTargets, n: Optional[int] = None, tol: float = DEFAULT_TOL
) -> BlockRealizationReport:
    """Construct a block g-circulant with spectrum ``block_target_spectrum(t)``.

    Each S_k is the closed-form realization of (beta1_k, beta2_k). The block
    matrix is assembled only when every L_k is entrywise nonnegative.
    """
    if n is not None and n != t.n:
        raise DomainError(f"Block order {n} does not match {t.n} target pairs")

    s_rows = [closed_form_row(b1, b2, t.p) for b1, b2 in zip(t.beta1, t.beta2)]
    s = [GCirculant(n=t.p, g=t.g, row=list(row)) for row in s_rows]
    l_complex = l_matrices(s)
    defect = max_imaginary(l_complex)
    if defect > REALNESS_TOL:
        logger.warning("L_k matrices have imaginary parts up to %.3g", defect)
    l_real = [np.real(m) for m in l_complex]

    lowest = _most_negative(l_real)
    largest = max(float(np.max(np.abs(m))) for m in l_real)
    nonnegative = within_nonnegative(lowest.value, largest)
    g_condition, _ = m_matrix_condition(t)
    if g_condition != nonnegative:
        logger.warning(
            "G-matrix verdict %s disagrees with the L_k verdict %s",
            g_condition,
            nonnegative,
        )

    matrix = None
    residual = None
    if nonnegative:
        blocks = [[float(l_real[k][0, v]) for k in range(t.n)] for v in range(t.p)]
        matrix = BlockGCirculant(p=t.p, g=t.g, n=t.n, blocks=blocks)
        if t.p * t.n <= ORACLE_MAX_ORDER:
            oracle = dense_eigen_oracle(assemble(matrix), tol=tol)
            residual = spectra_match(
                oracle, block_target_spectrum(t, tol=tol), tol=tol
            ).max_residual
        else:
            logger.debug("Skipping oracle check for order %d", t.p * t.n)

    return BlockRealizationReport(
        targets=t,
        s_rows=[[float(c) for c in row] for row in s_rows],
        l_matrices=[m.tolist() for m in l_real],
        nonnegative=nonnegative,
        min_entry=lowest.value,
        witness=None if nonnegative else lowest,
        g_condition=g_condition,
        matrix=matrix,
        spectrum_residual=residual,
    )
