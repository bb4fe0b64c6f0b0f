"""Golden-example replay and randomized property suites.

Each suite returns a VerificationReport; the CLI turns a failing report
into exit code 3.
"""

import json
import logging
from importlib import resources
from pathlib import Path
from typing import Any, Callable, Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, ValidationError

from .blockcirc import (
    assemble,
    block_spectrum,
    l_matrices,
    m_matrix_condition,
    realize_block,
    s_matrices,
)
from .errors import DomainError, GCircError, MalformedInput
from .matcore import (
    build_g_circulant,
    circulant,
    is_primary,
    qg_permutation,
    to_dense,
    w_submatrix,
)
from .models import (
    BlockGCirculant,
    BlockTargets,
    CheckResult,
    DiagonalVector,
    GCirculant,
    PDMatrix,
    TargetList,
    VerificationReport,
)
from .niep import realize
from .numtheory import (
    is_cyclic_generator,
    is_prime,
    list_generators,
    multiplicative_order,
    power_table,
)
from .reconstruct import (
    complete_with_perron,
    diagonal_of,
    first_row_from_diagonal,
)
from .spectra import (
    circulant_eigenvalues,
    circulant_from_eigenvalues,
    dense_eigen_oracle,
    g_circulant_spectrum,
    pd_form,
    pd_spectrum,
    spectra_match,
)
from .utils import load_json_file, matrix_from_json, parse_complex

logger = logging.getLogger(__name__)

ORACLE_TOL = 1e-6
EXACT_TOL = 1e-10
SCALAR_PRIMES = (5, 7, 11, 13)
BLOCK_GRIDS = (3, 5)
BLOCK_ORDERS = (2, 3)

Outcome = Tuple[bool, float, str]


class GoldenExample(BaseModel):
    name: str
    kind: Literal["gcirculant_spectrum", "generator", "diagonal", "realization"]
    tol: float = Field(gt=0)
    data: Dict[str, Any]


class GoldenFile(BaseModel):
    examples: List[GoldenExample] = Field(min_length=1)


def load_golden(path: Optional[Path] = None) -> GoldenFile:
    """Read a golden file; the packaged one when ``path`` is None."""
    if path is None:
        source = resources.files("gcirc").joinpath("data/golden.json")
        raw = json.loads(source.read_text(encoding="utf-8"))
    else:
        raw = load_json_file(path)
    try:
        return GoldenFile.model_validate(raw)
    except ValidationError as e:
        raise MalformedInput(f"Invalid golden file: {e}")


def _values(items: List[Any]) -> np.ndarray:
    return np.array([parse_complex(z) for z in items], dtype=complex)


def _golden_gcirculant_spectrum(data: Dict[str, Any], tol: float) -> Outcome:
    row = np.array(data["row"], dtype=float)
    g, n = int(data["g"]), len(data["row"])
    lam = circulant_eigenvalues(row)
    expected_c = _values(data["circulant_spectrum"])
    expected_a = _values(data["gcirculant_spectrum"])
    given_pd = PDMatrix(
        perm=qg_permutation(n, int(data["pd_shift"])),
        diag=list(_values(data["pd_diag"])),
    )
    derived_pd = pd_form(GCirculant(n=n, g=g, row=list(row)))
    a_oracle = dense_eigen_oracle(build_g_circulant(row, g))
    reports = {
        "circulant closed form": spectra_match(lam, expected_c, tol),
        "circulant oracle": spectra_match(
            dense_eigen_oracle(circulant(row)), expected_c, tol
        ),
        "g-circulant closed form": spectra_match(
            g_circulant_spectrum(lam, n, g), expected_a, tol
        ),
        "g-circulant oracle": spectra_match(a_oracle, expected_a, tol),
        "PD example": spectra_match(pd_spectrum(given_pd), a_oracle, tol),
        "PD form": spectra_match(pd_spectrum(derived_pd), a_oracle, tol),
    }
    failed = [name for name, report in reports.items() if not report.matched]
    worst = max(report.max_residual for report in reports.values())
    return not failed, worst, ", ".join(failed)


def _golden_generator(data: Dict[str, Any], tol: float) -> Outcome:
    n, g = int(data["n"]), int(data["g"])
    problems = []
    if power_table(g, n, n - 2) != list(data["power_table"]):
        problems.append("power table")
    w = w_submatrix(n, g)
    if w.image != list(data["w_image"]) or not is_primary(w):
        problems.append("W permutation")
    match = spectra_match(
        dense_eigen_oracle(w.to_matrix()), _values(data["w_spectrum"]), tol
    )
    if not match.matched:
        problems.append("W spectrum")
    h = int(data["non_generator"])
    if multiplicative_order(h, n) != int(data["non_generator_order"]):
        problems.append("order")
    if is_cyclic_generator(h, n).is_generator:
        problems.append("non-generator accepted")
    if not is_cyclic_generator(g, n).is_generator:
        problems.append("generator rejected")
    return not problems, match.max_residual, ", ".join(problems)


def _golden_diagonal(data: Dict[str, Any], tol: float) -> Outcome:
    row = [complex(v) for v in data["row"]]
    g, n = int(data["g"]), len(row)
    expected = [complex(v) for v in data["diagonal"]]
    problems = []
    if list(diagonal_of(GCirculant(n=n, g=g, row=row))) != expected:
        problems.append("diagonal")
    if first_row_from_diagonal(DiagonalVector(n=n, g=g, values=expected)).row != row:
        problems.append("inverse")
    partial: List[Optional[complex]] = list(expected)
    partial[int(data["hidden_index"])] = None
    completed = complete_with_perron(
        DiagonalVector(n=n, g=g, values=partial), float(data["beta1"])
    )
    error = float(np.max(np.abs(completed.row_array() - np.array(row))))
    if error > tol:
        problems.append("trace completion")
    return not problems, error, ", ".join(problems)


def _golden_realization(data: Dict[str, Any], tol: float) -> Outcome:
    target = TargetList(
        beta1=data["beta1"], beta2=data["beta2"], p=data["p"], g=data["g"]
    )
    report = realize(target)
    dense = to_dense(report.matrix).real
    expected = matrix_from_json(data["matrix"]).real
    problems = []
    if expected.shape != dense.shape:
        problems.append("shape")
    elif float(np.max(np.abs(dense - expected))) > float(data["entry_tol"]):
        problems.append("entries")
    if not report.nonnegative:
        problems.append("nonnegativity")
    match = spectra_match(dense_eigen_oracle(dense), _values(data["spectrum"]), tol)
    if not match.matched:
        problems.append("spectrum")
    return not problems, match.max_residual, ", ".join(problems)


GOLDEN_CHECKS: Dict[str, Callable[[Dict[str, Any], float], Outcome]] = {
    "gcirculant_spectrum": _golden_gcirculant_spectrum,
    "generator": _golden_generator,
    "diagonal": _golden_diagonal,
    "realization": _golden_realization,
}


def run_golden(path: Optional[Path] = None) -> VerificationReport:
    """Replay every example of a golden file."""
    golden = load_golden(path)
    checks = []
    for example in golden.examples:
        try:
            passed, residual, detail = GOLDEN_CHECKS[example.kind](
                example.data, example.tol
            )
        except (KeyError, TypeError) as e:
            raise MalformedInput(f"Golden example '{example.name}' is incomplete: {e}")
        except (GCircError, ValidationError) as e:
            passed, residual, detail = False, float("nan"), str(e)
        logger.debug("Golden example %r passed=%s", example.name, passed)
        checks.append(
            CheckResult(
                name=example.name,
                passed=passed,
                detail=detail,
                max_residual=None if np.isnan(residual) else residual,
            )
        )
    return VerificationReport(suite="golden", seed=0, checks=checks)


def _random_row(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.standard_normal(n)


def _check_gcirculant_oracle(rng: np.random.Generator, trials: int) -> Outcome:
    worst = 0.0
    for p in SCALAR_PRIMES:
        for g in list_generators(p):
            for _ in range(trials):
                row = _random_row(rng, p)
                closed = g_circulant_spectrum(circulant_eigenvalues(row), p, g)
                oracle = dense_eigen_oracle(build_g_circulant(row, g))
                report = spectra_match(closed, oracle, ORACLE_TOL)
                worst = max(worst, report.max_residual)
                if not report.matched:
                    return False, worst, f"p={p}, g={g}"
    return True, worst, ""


def _check_generator_insensitivity(rng: np.random.Generator, trials: int) -> Outcome:
    worst = 0.0
    for p in SCALAR_PRIMES:
        generators = list_generators(p)
        for _ in range(trials):
            row = _random_row(rng, p)
            base = dense_eigen_oracle(build_g_circulant(row, generators[0]))
            for g in generators[1:]:
                other = dense_eigen_oracle(build_g_circulant(row, g))
                report = spectra_match(base, other, ORACLE_TOL)
                worst = max(worst, report.max_residual)
                if not report.matched:
                    return False, worst, f"p={p}, g={generators[0]} vs {g}"
    return True, worst, ""


def _check_circulant_round_trip(rng: np.random.Generator, trials: int) -> Outcome:
    worst = 0.0
    for n in range(3, 17):
        for _ in range(trials):
            row = _random_row(rng, n)
            back = circulant_from_eigenvalues(circulant_eigenvalues(row))
            worst = max(worst, float(np.max(np.abs(back - row))))
    return worst <= EXACT_TOL, worst, ""


def _check_realization(rng: np.random.Generator, trials: int) -> Outcome:
    worst = 0.0
    for p in SCALAR_PRIMES:
        for g in list_generators(p):
            for _ in range(trials):
                beta2 = rng.uniform(0, 5)
                beta1 = beta2 + rng.uniform(0, 5)
                report = realize(TargetList(beta1=beta1, beta2=beta2, p=p, g=g))
                dense = to_dense(report.matrix)
                identity_error = max(
                    abs(np.trace(dense) - beta1),
                    float(np.max(np.abs(dense.sum(axis=1) - beta1))),
                    report.closed_form_drift,
                )
                residual = report.spectrum_residual or 0.0
                worst = max(worst, residual)
                if (
                    residual > ORACLE_TOL
                    or identity_error > EXACT_TOL
                    or not report.nonnegative
                ):
                    return False, worst, f"p={p}, g={g}, beta=({beta1}, {beta2})"
    return True, worst, ""


def _check_diagonal_round_trip(rng: np.random.Generator, trials: int) -> Outcome:
    for p in (q for q in range(3, 32) if is_prime(q)):
        for g in list_generators(p):
            row = list(_random_row(rng, p).astype(complex))
            a = GCirculant(n=p, g=g, row=row)
            diagonal = list(diagonal_of(a))
            if not np.array_equal(diagonal, np.diag(to_dense(a))):
                return False, 0.0, f"diagonal mismatch at p={p}, g={g}"
            back = first_row_from_diagonal(DiagonalVector(n=p, g=g, values=diagonal))
            if back.row != row:
                return False, 0.0, f"round trip failed at p={p}, g={g}"
    return True, 0.0, ""


def _random_blocks(rng: np.random.Generator, p: int, n: int) -> BlockGCirculant:
    g = int(rng.choice(list_generators(p)))
    return BlockGCirculant(p=p, g=g, n=n, blocks=rng.standard_normal((p, n)).tolist())


def _check_block_reduction(rng: np.random.Generator, trials: int) -> Outcome:
    worst = 0.0
    for p in BLOCK_GRIDS:
        for n in BLOCK_ORDERS:
            for _ in range(trials):
                b = _random_blocks(rng, p, n)
                full = dense_eigen_oracle(assemble(b))
                parts = [dense_eigen_oracle(to_dense(s)).values for s in s_matrices(b)]
                union = [z for part in parts for z in part]
                for report in (
                    spectra_match(full, union, ORACLE_TOL),
                    spectra_match(full, block_spectrum(b), ORACLE_TOL),
                ):
                    worst = max(worst, report.max_residual)
                    if not report.matched:
                        return False, worst, f"p={p}, n={n}, g={b.g}"
    return True, worst, ""


def _check_block_round_trip(rng: np.random.Generator, trials: int) -> Outcome:
    worst = 0.0
    for p in BLOCK_GRIDS:
        for n in BLOCK_ORDERS:
            for _ in range(trials):
                b = _random_blocks(rng, p, n)
                coefficients = b.block_array()
                for k, l_k in enumerate(l_matrices(s_matrices(b))):
                    expected = build_g_circulant(coefficients[:, k], b.g)
                    worst = max(worst, float(np.max(np.abs(l_k - expected))))
    return worst <= EXACT_TOL, worst, ""


def random_block_targets(rng: np.random.Generator, p: int, n: int) -> BlockTargets:
    """Random conjugate-symmetric targets with beta1_1 >= beta2_1 >= 0."""
    beta1 = rng.uniform(-1, 1, n)
    beta2 = rng.uniform(0, 1, n)
    beta1[1:] = (beta1[1:] + beta1[1:][::-1]) / 2
    beta2[1:] = (beta2[1:] + beta2[1:][::-1]) / 2
    beta1[0] = rng.uniform(1, 4)
    beta2[0] = rng.uniform(0, beta1[0])
    g = int(rng.choice(list_generators(p)))
    return BlockTargets(beta1=beta1.tolist(), beta2=beta2.tolist(), p=p, g=g)


def _check_block_realization(rng: np.random.Generator, trials: int) -> Outcome:
    worst = 0.0
    certified = 0
    for p in BLOCK_GRIDS:
        for n in BLOCK_ORDERS:
            for _ in range(trials):
                t = random_block_targets(rng, p, n)
                report = realize_block(t)
                verdict, _ = m_matrix_condition(t)
                if verdict != report.nonnegative:
                    return False, worst, f"G and L_k verdicts disagree at p={p}, n={n}"
                if report.nonnegative and report.matrix is not None:
                    certified += 1
                    residual = report.spectrum_residual or 0.0
                    worst = max(worst, residual)
                    lowest = float(assemble(report.matrix).real.min())
                    if residual > ORACLE_TOL or lowest < -1e-12:
                        return False, worst, f"certified matrix fails at p={p}, n={n}"
    return True, worst, f"{certified} certified"


def _check_negative_controls(rng: np.random.Generator, trials: int) -> Outcome:
    report = realize(TargetList(beta1=1, beta2=2, p=7, g=3))
    if report.nonnegative or report.witness is None or report.witness.value >= 0:
        return False, 0.0, "realize(1, 2, 7, 3) not flagged"
    for p in (3, 5, 7, 11, 13):
        for g in range(1, p):
            brute = multiplicative_order(g, p) == p - 1
            if is_cyclic_generator(g, p).is_generator != brute:
                return False, 0.0, f"generator verdict wrong for g={g}, p={p}"
    for n, g in ((9, 2), (11, 3)):
        try:
            g_circulant_spectrum(np.ones(n), n, g)
        except DomainError:
            continue
        return False, 0.0, f"g_circulant_spectrum accepted n={n}, g={g}"
    return True, 0.0, ""


PropertyCheck = Callable[[np.random.Generator, int], Outcome]

PROPERTY_CHECKS: List[Tuple[str, PropertyCheck, str]] = [
    ("g-circulant spectrum vs oracle", _check_gcirculant_oracle, "trials"),
    ("generator insensitivity", _check_generator_insensitivity, "trials"),
    ("circulant eigenvalue round trip", _check_circulant_round_trip, "trials"),
    ("realization fidelity", _check_realization, "trials"),
    ("diagonal round trip", _check_diagonal_round_trip, "trials"),
    ("block spectrum reduction", _check_block_reduction, "trials"),
    ("block DFT round trip", _check_block_round_trip, "trials"),
    ("block realization certificate", _check_block_realization, "block_trials"),
    ("negative controls", _check_negative_controls, "trials"),
]


def run_property(
    seed: int = 0, trials: int = 20, block_trials: int = 50
) -> VerificationReport:
    """Randomized invariant checks, deterministic for a given seed."""
    rng = np.random.default_rng(seed)
    counts = {"trials": trials, "block_trials": block_trials}
    checks = []
    for name, check, count in PROPERTY_CHECKS:
        try:
            passed, residual, detail = check(rng, counts[count])
        except GCircError as e:
            passed, residual, detail = False, 0.0, f"{type(e).__name__}: {e}"
        logger.debug("Property check %r passed=%s", name, passed)
        checks.append(
            CheckResult(name=name, passed=passed, detail=detail, max_residual=residual)
        )
    return VerificationReport(suite="property", seed=seed, checks=checks)
