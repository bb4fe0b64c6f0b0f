"""Exact integer arithmetic over residue classes.

Everything here works on Python integers only. The cyclic-generator test is
the gate in front of every spectral closed form in the package.
"""

import math
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import DomainError, NotGenerator, NotInvertible, NotPrime


def gcd(a: int, b: int) -> int:
    """Greatest common divisor of two nonnegative integers."""
    if a < 0 or b < 0:
        raise DomainError(f"gcd expects nonnegative integers, got ({a}, {b})")
    if a == 0 and b == 0:
        raise DomainError("gcd(0, 0) is undefined")
    return math.gcd(a, b)


def _check_modulus(n: int) -> None:
    if n < 2:
        raise DomainError(f"Modulus must be at least 2, got {n}")


def _require_unit(g: int, n: int) -> int:
    _check_modulus(n)
    g %= n
    if math.gcd(g, n) != 1:
        raise NotInvertible(f"{g} is not invertible modulo {n}")
    return g


def mod_inverse(g: int, n: int) -> int:
    """Return x in [1, n) with g*x = 1 (mod n)."""
    g = _require_unit(g, n)
    return pow(g, -1, n)


def multiplicative_order(g: int, n: int) -> int:
    """Smallest d >= 1 with g**d = 1 (mod n)."""
    g = _require_unit(g, n)
    value, order = g, 1
    while value != 1:
        value = (value * g) % n
        order += 1
    return order


def power_table(g: int, n: int, max_exp: int) -> List[int]:
    """Residues g**1, ..., g**max_exp modulo n."""
    g = _require_unit(g, n)
    if max_exp < 1:
        raise DomainError(f"max_exp must be at least 1, got {max_exp}")
    table = []
    value = 1
    for _ in range(max_exp):
        value = (value * g) % n
        table.append(value)
    return table


def divisors(m: int) -> List[int]:
    """All positive divisors of m in ascending order."""
    if m < 1:
        raise DomainError(f"divisors expects a positive integer, got {m}")
    small, large = [], []
    d = 1
    while d * d <= m:
        if m % d == 0:
            small.append(d)
            if d != m // d:
                large.append(m // d)
        d += 1
    return small + large[::-1]


def is_prime(n: int) -> bool:
    """Primality by trial division."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def euler_phi(n: int) -> int:
    """Order of U(Z/nZ)."""
    if n < 1:
        raise DomainError(f"euler_phi expects a positive integer, got {n}")
    result, m, d = n, n, 2
    while d * d <= m:
        if m % d == 0:
            while m % d == 0:
                m //= d
            result -= result // d
        d += 1
    if m > 1:
        result -= result // m
    return result


def has_distinct_powers(g: int, n: int) -> bool:
    """Check n does not divide g**l2 - g**l1 for 0 <= l1 < l2 <= n-2.

    This is the primary-submatrix criterion for Q_g and holds for any n,
    prime or not.
    """
    g = _require_unit(g, n)
    seen = set()
    value = 1
    for _ in range(n - 1):
        if value in seen:
            return False
        seen.add(value)
        value = (value * g) % n
    return True


class Residue(BaseModel):
    """An element of Z/nZ stored in canonical form."""

    model_config = ConfigDict(frozen=True)

    value: int
    modulus: int = Field(ge=2)

    @model_validator(mode="after")
    def _check_range(self) -> "Residue":
        if not 0 <= self.value < self.modulus:
            raise ValueError(
                f"Residue value {self.value} outside [0, {self.modulus})"
            )
        return self

    @classmethod
    def of(cls, value: int, modulus: int) -> "Residue":
        """Reduce an arbitrary integer (negative allowed) modulo ``modulus``."""
        _check_modulus(modulus)
        return cls(value=value % modulus, modulus=modulus)

    def inverse(self) -> "Residue":
        return Residue(
            value=mod_inverse(self.value, self.modulus), modulus=self.modulus
        )

    def order(self) -> int:
        return multiplicative_order(self.value, self.modulus)


class GeneratorCertificate(BaseModel):
    """Divisor table proving (or refuting) that g generates U(Z/pZ)."""

    model_config = ConfigDict(frozen=True)

    g: int
    p: int
    checked_divisors: List[Tuple[int, int]]
    is_generator: bool

    @model_validator(mode="after")
    def _check_table(self) -> "GeneratorCertificate":
        for d, residue in self.checked_divisors:
            if (self.p - 1) % d != 0 or d >= self.p - 1:
                raise ValueError(f"{d} is not a proper divisor of {self.p - 1}")
        hit_one = any(residue == 1 for _, residue in self.checked_divisors)
        if self.is_generator == hit_one:
            raise ValueError("is_generator disagrees with the divisor table")
        return self

    @property
    def witness(self) -> Optional[Tuple[int, int]]:
        """First proper divisor d with g**d = 1, if any."""
        for d, residue in self.checked_divisors:
            if residue == 1:
                return d, residue
        return None


def is_cyclic_generator(g: int, p: int) -> GeneratorCertificate:
    """Test g against every proper divisor d of p-1: g**d must not be 1."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    g = _require_unit(g, p)
    checked = [(d, pow(g, d, p)) for d in divisors(p - 1) if d < p - 1]
    return GeneratorCertificate(
        g=g,
        p=p,
        checked_divisors=checked,
        is_generator=all(residue != 1 for _, residue in checked),
    )


def list_generators(p: int) -> List[int]:
    """All cyclic generators of U(Z/pZ) in [2, p-1], ascending."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    return [g for g in range(2, p) if is_cyclic_generator(g, p).is_generator]


def require_generator(g: int, p: int) -> GeneratorCertificate:
    """Like is_cyclic_generator, but raise NotGenerator on a negative verdict."""
    certificate = is_cyclic_generator(g, p)
    if not certificate.is_generator:
        d, _ = certificate.witness or (p - 1, 1)
        raise NotGenerator(
            f"{g} is not a cyclic generator of U(Z/{p}Z): "
            f"{certificate.g}^{d} = 1 (mod {p})"
        )
    return certificate
