"""Real and nonnegative g-circulant realizations of structured target lists."""

import logging
from typing import Optional

import numpy as np

from .matcore import to_dense
from .models import EntryWitness, GCirculant, RealizationReport, Spectrum, TargetList
from .spectra import (
    DEFAULT_TOL,
    ORACLE_MAX_ORDER,
    circulant_from_eigenvalues,
    dense_eigen_oracle,
    spectra_match,
)

logger = logging.getLogger(__name__)

# Entries at or above -NONNEG_TOL count as nonnegative.
NONNEG_TOL = 1e-12
DRIFT_WARN = 1e-10


def target_spectrum(t: TargetList, tol: float = DEFAULT_TOL) -> Spectrum:
    """(beta1, beta2, beta2*phi, ..., beta2*phi^(p-2)) with phi = exp(2*pi*i/(p-1))."""
    phi = np.exp(2j * np.pi * np.arange(t.p - 1) / (t.p - 1))
    return Spectrum(values=[complex(t.beta1), *(t.beta2 * phi)], tol=tol)


def auxiliary_list(t: TargetList) -> np.ndarray:
    """(beta1, beta2*tau, ..., beta2*tau^(p-1)) with tau = exp(2*pi*i/p).

    Conjugate-symmetric, so its inverse DFT is a real circulant row.
    """
    tau = np.exp(2j * np.pi * np.arange(1, t.p) / t.p)
    return np.concatenate([[complex(t.beta1)], t.beta2 * tau])


def closed_form_row(beta1: float, beta2: float, p: int) -> np.ndarray:
    """Circulant row realizing (beta1, beta2).

    Index 1 holds (beta1 + (p-1)*beta2)/p, every other index (beta1 - beta2)/p.
    """
    row = np.full(p, (beta1 - beta2) / p, dtype=float)
    row[1 % p] = (beta1 + (p - 1) * beta2) / p
    return row


def check_realizability(beta1: float, beta2: float) -> bool:
    return beta1 >= beta2 >= 0


def _most_negative(dense: np.ndarray) -> EntryWitness:
    real = dense.real
    i, j = np.unravel_index(int(np.argmin(real)), real.shape)
    return EntryWitness(row=int(i), col=int(j), value=float(real[i, j]))


def realize(t: TargetList, tol: float = DEFAULT_TOL) -> RealizationReport:
    """Build A = Q_g circ(c) with spectrum ``target_spectrum(t)``.

    A real matrix is always produced; nonnegativity is reported, not enforced.
    """
    row = closed_form_row(t.beta1, t.beta2, t.p)
    via_dft = circulant_from_eigenvalues(auxiliary_list(t))
    drift = float(np.max(np.abs(via_dft - row)))
    if drift > DRIFT_WARN:
        logger.warning(
            "Closed-form and inverse-DFT rows differ by %.3g for p=%d", drift, t.p
        )

    matrix = GCirculant(n=t.p, g=t.g, row=list(row))
    dense = to_dense(matrix)
    lowest = _most_negative(dense)
    nonnegative = lowest.value >= -NONNEG_TOL

    residual: Optional[float] = None
    if t.p <= ORACLE_MAX_ORDER:
        oracle = dense_eigen_oracle(dense, tol=tol)
        residual = spectra_match(
            oracle, target_spectrum(t, tol=tol), tol=tol
        ).max_residual
    else:
        logger.debug("Skipping oracle check for order %d", t.p)
    logger.debug(
        "Realized (%g, %g) at p=%d, g=%d: min entry %.3g, residual %s",
        t.beta1,
        t.beta2,
        t.p,
        t.g,
        lowest.value,
        "n/a" if residual is None else f"{residual:.3g}",
    )
    return RealizationReport(
        target=t,
        circulant_row=[float(c) for c in row],
        matrix=matrix,
        nonnegative=nonnegative,
        min_entry=lowest.value,
        witness=None if nonnegative else lowest,
        spectrum_residual=residual,
        closed_form_drift=drift,
        tol=NONNEG_TOL,
    )
