from pathlib import Path
from typing import Annotated, Any, Dict, List, Literal, Optional

import numpy as np
from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    PlainSerializer,
    computed_field,
    field_validator,
    model_validator,
)

from .errors import DomainError, NotPrime
from .numtheory import is_prime, require_generator
from .utils import dump_complex, parse_complex

ComplexValue = Annotated[
    complex,
    BeforeValidator(parse_complex),
    PlainSerializer(dump_complex, return_type=List[float], when_used="json"),
]

# Symmetry of the per-k block targets is checked to this absolute slack.
SYMMETRY_TOL = 1e-12


def _check_prime_generator(p: int, g: int) -> None:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    require_generator(g, p)


class GCirculant(BaseModel):
    """Compressed g-circulant: order, shift reduced mod n, and first row."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    g: int
    row: List[ComplexValue]

    @model_validator(mode="before")
    @classmethod
    def _normalize(cls, data: Any) -> Any:
        if isinstance(data, dict) and "row" in data:
            data = dict(data)
            if data.get("n") is None and isinstance(data["row"], (list, tuple)):
                data["n"] = len(data["row"])
            n, g = data.get("n"), data.get("g", 1)
            if isinstance(n, int) and n >= 1 and isinstance(g, int):
                data["g"] = g % n
        return data

    @model_validator(mode="after")
    def _check_shape(self) -> "GCirculant":
        if len(self.row) != self.n:
            raise ValueError(f"Row has {len(self.row)} entries, expected {self.n}")
        return self

    @classmethod
    def from_row(cls, row: Any, g: int = 1) -> "GCirculant":
        values = [complex(z) for z in np.asarray(row, dtype=complex).ravel()]
        if not values:
            raise DomainError("A g-circulant needs a nonempty first row")
        return cls(n=len(values), g=g, row=values)

    def row_array(self) -> np.ndarray:
        return np.array(self.row, dtype=complex)


class PermSpec(BaseModel):
    """A permutation i -> image[i] of {0..n-1} with its cycles."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=0)
    image: List[int]
    cycles: List[List[int]]

    @model_validator(mode="after")
    def _check_consistency(self) -> "PermSpec":
        if len(self.image) != self.n or sorted(self.image) != list(range(self.n)):
            raise ValueError("image is not a bijection of {0..n-1}")
        covered = sorted(i for cycle in self.cycles for i in cycle)
        if covered != list(range(self.n)):
            raise ValueError("cycles do not partition {0..n-1}")
        for cycle in self.cycles:
            for pos, i in enumerate(cycle):
                if self.image[i] != cycle[(pos + 1) % len(cycle)]:
                    raise ValueError(f"cycle {cycle} disagrees with image")
        return self

    @property
    def cycle_lengths(self) -> List[int]:
        return [len(cycle) for cycle in self.cycles]

    def to_matrix(self) -> np.ndarray:
        """0/1 matrix with a 1 at (i, image[i])."""
        matrix = np.zeros((self.n, self.n), dtype=complex)
        matrix[np.arange(self.n), self.image] = 1
        return matrix

    def inverse(self) -> "PermSpec":
        """Inverse permutation; each cycle is traversed backwards."""
        image = [0] * self.n
        for i, j in enumerate(self.image):
            image[j] = i
        cycles = [[cycle[0]] + cycle[:0:-1] for cycle in self.cycles]
        return PermSpec(n=self.n, image=image, cycles=cycles)


class PDMatrix(BaseModel):
    """Monomial matrix P_nu D."""

    model_config = ConfigDict(frozen=True)

    perm: PermSpec
    diag: List[ComplexValue]

    @model_validator(mode="after")
    def _check_lengths(self) -> "PDMatrix":
        if len(self.diag) != self.perm.n:
            raise ValueError(
                f"diag has {len(self.diag)} entries, permutation order is "
                f"{self.perm.n}"
            )
        return self

    def to_matrix(self) -> np.ndarray:
        return self.perm.to_matrix() @ np.diag(np.array(self.diag, dtype=complex))


class Spectrum(BaseModel):
    """Eigenvalue multiset with the tolerance used to compare it."""

    model_config = ConfigDict(frozen=True)

    values: List[ComplexValue]
    tol: float = Field(default=1e-6, ge=0)

    def __len__(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=complex)


class MatchedPair(BaseModel):
    left: int
    right: int
    distance: float


class MatchReport(BaseModel):
    """Outcome of pairing two spectra."""

    matched: bool
    tol: float
    max_residual: float
    pairs: List[MatchedPair]


class TargetList(BaseModel):
    """Target list (beta1, beta2, beta2*phi, ..., beta2*phi^(p-2))."""

    model_config = ConfigDict(frozen=True)

    beta1: float
    beta2: float
    p: int
    g: int

    @model_validator(mode="after")
    def _check_hypotheses(self) -> "TargetList":
        if self.p < 3:
            raise DomainError(f"p must be an odd prime, got {self.p}")
        _check_prime_generator(self.p, self.g)
        if self.beta2 < 0:
            raise DomainError(f"beta2 must be nonnegative, got {self.beta2}")
        return self


class EntryWitness(BaseModel):
    """Location and value of the most negative entry of a matrix."""

    row: int
    col: int
    value: float


class RealizationReport(BaseModel):
    """Result of realizing a TargetList with A = Q_g C."""

    target: TargetList
    circulant_row: List[float]
    matrix: GCirculant
    nonnegative: bool
    min_entry: float
    witness: Optional[EntryWitness] = None
    spectrum_residual: Optional[float] = None
    closed_form_drift: float = 0.0
    tol: float = 1e-12

    @model_validator(mode="after")
    def _check_report(self) -> "RealizationReport":
        target = self.target
        if self.matrix.n != target.p or self.matrix.g != target.g % target.p:
            raise ValueError("matrix does not match the target order and shift")
        if self.nonnegative and self.min_entry < -self.tol:
            raise ValueError("nonnegative verdict contradicts the minimum entry")
        return self


class DiagonalVector(BaseModel):
    """Diagonal of a g-circulant with at most one unknown entry."""

    model_config = ConfigDict(frozen=True)

    n: int
    g: int
    values: List[Optional[ComplexValue]]

    @model_validator(mode="after")
    def _check_hypotheses(self) -> "DiagonalVector":
        _check_prime_generator(self.n, self.g)
        if len(self.values) != self.n:
            raise ValueError(
                f"Diagonal has {len(self.values)} entries, expected {self.n}"
            )
        if self.values.count(None) > 1:
            raise DomainError("At most one diagonal entry may be unknown")
        return self

    @property
    def unknown_index(self) -> Optional[int]:
        return self.values.index(None) if None in self.values else None


class BlockGCirculant(BaseModel):
    """Block g-circulant on a p x p grid of circulant blocks of order n."""

    model_config = ConfigDict(frozen=True)

    p: int
    g: int
    n: int = Field(ge=1)
    blocks: List[List[ComplexValue]]

    @model_validator(mode="after")
    def _check_shape(self) -> "BlockGCirculant":
        _check_prime_generator(self.p, self.g)
        if len(self.blocks) != self.p:
            raise ValueError(
                f"Expected {self.p} first-row blocks, got {len(self.blocks)}"
            )
        for k, block in enumerate(self.blocks):
            if len(block) != self.n:
                raise ValueError(
                    f"Block {k} has {len(block)} coefficients, expected {self.n}"
                )
        return self

    def block_array(self) -> np.ndarray:
        """p x n array whose row j is the circulant first row of block j."""
        return np.array(self.blocks, dtype=complex).reshape(self.p, self.n)


class BlockTargets(BaseModel):
    """Per-k targets (beta1_k, beta2_k) for a block realization."""

    model_config = ConfigDict(frozen=True)

    beta1: List[float] = Field(min_length=1)
    beta2: List[float] = Field(min_length=1)
    p: int
    g: int

    @field_validator("beta2")
    @classmethod
    def _check_nonnegative(cls, v: List[float]) -> List[float]:
        if any(b < 0 for b in v):
            raise DomainError("Every beta2 entry must be nonnegative")
        return v

    @model_validator(mode="after")
    def _check_hypotheses(self) -> "BlockTargets":
        if self.p < 3:
            raise DomainError(f"p must be an odd prime, got {self.p}")
        _check_prime_generator(self.p, self.g)
        if len(self.beta1) != len(self.beta2):
            raise ValueError("beta1 and beta2 must have the same length")
        if not self.beta1[0] >= self.beta2[0] >= 0:
            raise DomainError(
                f"First target pair must satisfy beta1 >= beta2 >= 0, got "
                f"({self.beta1[0]}, {self.beta2[0]})"
            )
        n = len(self.beta1)
        for k in range(1, n):
            mirror = n - k
            if (
                abs(self.beta1[k] - self.beta1[mirror]) > SYMMETRY_TOL
                or abs(self.beta2[k] - self.beta2[mirror]) > SYMMETRY_TOL
            ):
                raise DomainError(
                    f"Targets are not conjugate-symmetric: index {k} and "
                    f"{mirror} differ"
                )
        return self

    @property
    def n(self) -> int:
        return len(self.beta1)


class BlockWitness(BaseModel):
    """Negative coefficient c_k(u, v) of the block realization."""

    k: int
    u: int
    v: int
    value: float


class BlockRealizationReport(BaseModel):
    targets: BlockTargets
    s_rows: List[List[float]]
    l_matrices: List[List[List[float]]]
    nonnegative: bool
    min_entry: float
    witness: Optional[BlockWitness] = None
    g_condition: bool
    matrix: Optional[BlockGCirculant] = None
    spectrum_residual: Optional[float] = None


class CommandResult(BaseModel):
    """Envelope printed by every CLI command."""

    status: Literal["ok", "error"]
    payload: Dict[str, Any] = Field(default_factory=dict)
    diagnostics: List[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_diagnostics(self) -> "CommandResult":
        if self.status == "error" and not self.diagnostics:
            raise ValueError("An error result needs at least one diagnostic")
        return self


class CheckResult(BaseModel):
    name: str
    passed: bool
    detail: str = ""
    max_residual: Optional[float] = None


class VerificationReport(BaseModel):
    suite: Literal["golden", "property"]
    seed: int
    checks: List[CheckResult]

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def summary(self) -> str:
        passed = sum(check.passed for check in self.checks)
        return f"{passed}/{len(self.checks)} checks passed"


class AppConfig(BaseModel):
    """Model representing application configuration."""

    model_config = ConfigDict(validate_assignment=True)

    tol: float = Field(default=1e-6, gt=0)
    seed: int = Field(default=0, ge=0)
    significant_digits: int = Field(default=10, ge=1, le=17)
    golden_file: Optional[Path] = None
    output_format: Literal["json", "table"] = "json"


__all__ = [
    "AppConfig",
    "BlockGCirculant",
    "BlockRealizationReport",
    "BlockTargets",
    "BlockWitness",
    "CheckResult",
    "CommandResult",
    "ComplexValue",
    "DiagonalVector",
    "EntryWitness",
    "GCirculant",
    "MatchReport",
    "MatchedPair",
    "PDMatrix",
    "PermSpec",
    "RealizationReport",
    "Spectrum",
    "TargetList",
    "VerificationReport",
]
