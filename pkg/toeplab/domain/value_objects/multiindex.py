"""Partitions, multi-indices and the graded-lex monomial basis.

Value objects shared by every other layer: the block structure k of n,
multi-indices alpha in N^n, the ordered index set J_n(m) and the squared
norms of the monomials z^alpha in the weighted Bergman space.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial
from typing import Iterator, NamedTuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator
from scipy.special import gammaln

from toeplab.core.exceptions import (
    ErrorCode,
    ValidationException,
    degree_overflow,
    dimension_mismatch,
)


class Partition(BaseModel):
    """Block structure k = (k_1, ..., k_l) of n = k_1 + ... + k_l.

    Attributes:
        parts: Block sizes, positive and nondecreasing
    """

    model_config = ConfigDict(frozen=True)

    parts: tuple[int, ...] = Field(min_length=1, description="Block sizes k_j")

    @field_validator("parts")
    @classmethod
    def validate_parts(cls, v: tuple[int, ...]) -> tuple[int, ...]:
        """Validate that the block sizes are positive and nondecreasing."""
        if any(part < 1 for part in v):
            raise ValueError("partition parts must be positive")
        if any(a > b for a, b in zip(v, v[1:])):
            raise ValueError("partition parts must be nondecreasing")
        return v

    @classmethod
    def of(cls, *parts: int) -> Partition:
        return cls(parts=tuple(parts))

    @classmethod
    def radial(cls, n: int) -> Partition:
        """The single-block partition (n)."""
        return cls(parts=(n,))

    @classmethod
    def separately_radial(cls, n: int) -> Partition:
        """The finest partition (1, ..., 1)."""
        return cls(parts=(1,) * n)

    @property
    def l(self) -> int:  # noqa: E743
        return len(self.parts)

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def offsets(self) -> tuple[int, ...]:
        """Start index of every block; the empty sum is 0."""
        starts = [0]
        for part in self.parts[:-1]:
            starts.append(starts[-1] + part)
        return tuple(starts)

    def block_slice(self, j: int) -> slice:
        """Coordinates of block j (0-based) as a slice."""
        start = self.offsets[j]
        return slice(start, start + self.parts[j])

    def blocks(self, values: tuple | list | np.ndarray) -> list:
        """Split a length-n sequence into its l blocks."""
        if len(values) != self.n:
            raise dimension_mismatch(self.n, len(values), "vector")
        return [values[self.block_slice(j)] for j in range(self.l)]

    def block_of(self, i: int) -> int:
        """Block index (0-based) containing coordinate i."""
        for j in range(self.l):
            if self.offsets[j] <= i < self.offsets[j] + self.parts[j]:
                return j
        raise dimension_mismatch(self.n, i + 1, "coordinate index")

    def __str__(self) -> str:
        return "(" + ",".join(str(part) for part in self.parts) + ")"


class MultiIndex(BaseModel):
    """Multi-index alpha in N^n with degree |alpha|."""

    model_config = ConfigDict(frozen=True)

    entries: tuple[int, ...]

    @field_validator("entries")
    @classmethod
    def validate_entries(cls, v: tuple[int, ...]) -> tuple[int, ...]:
        """Validate that every entry is a nonnegative integer."""
        if any(entry < 0 for entry in v):
            raise ValueError("multi-index entries must be nonnegative")
        return v

    @classmethod
    def of(cls, *entries: int) -> MultiIndex:
        return cls(entries=tuple(entries))

    @classmethod
    def zeros(cls, n: int) -> MultiIndex:
        return cls(entries=(0,) * n)

    @classmethod
    def unit(cls, n: int, i: int) -> MultiIndex:
        """The i-th unit multi-index (0-based)."""
        return cls(entries=tuple(1 if j == i else 0 for j in range(n)))

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def degree(self) -> int:
        return sum(self.entries)

    @property
    def factorial(self) -> int:
        """alpha! = alpha_1! ... alpha_n!"""
        result = 1
        for entry in self.entries:
            result *= factorial(entry)
        return result

    def __add__(self, other: MultiIndex) -> MultiIndex:
        if self.n != other.n:
            raise dimension_mismatch(self.n, other.n)
        return MultiIndex(entries=tuple(a + b for a, b in zip(self.entries, other.entries)))

    def shifted(self, plus: MultiIndex, minus: MultiIndex) -> MultiIndex | None:
        """alpha + plus - minus, or None when a component turns negative."""
        if not self.n == plus.n == minus.n:
            raise dimension_mismatch(self.n, plus.n if plus.n != self.n else minus.n)
        entries = tuple(a + p - q for a, p, q in zip(self.entries, plus.entries, minus.entries))
        if any(entry < 0 for entry in entries):
            return None
        return MultiIndex(entries=entries)

    def dot(self, other: MultiIndex) -> int:
        if self.n != other.n:
            raise dimension_mismatch(self.n, other.n)
        return sum(a * b for a, b in zip(self.entries, other.entries))

    def is_zero(self) -> bool:
        return self.degree == 0

    def __str__(self) -> str:
        return "(" + ",".join(str(entry) for entry in self.entries) + ")"


def grlex_key(alpha: MultiIndex) -> tuple[int, ...]:
    """Sort key of the graded-lex order: degree first, then x_1 > x_2 > ... > x_n."""
    return (alpha.degree,) + tuple(-entry for entry in alpha.entries)


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    # lexicographically decreasing compositions of `total` into `parts` entries
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


class BasisOrder(BaseModel):
    """Ordered index set J_n(m) = {alpha in N^n : |alpha| <= m} in graded-lex order."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    m: int = Field(ge=0)
    elements: tuple[MultiIndex, ...]

    _positions: dict[tuple[int, ...], int] = PrivateAttr(default_factory=dict)

    def model_post_init(self, __context: object) -> None:
        self._positions = {alpha.entries: i for i, alpha in enumerate(self.elements)}

    def index(self, alpha: MultiIndex) -> int:
        """Position of alpha in the basis."""
        if alpha.n != self.n:
            raise dimension_mismatch(self.n, alpha.n)
        if alpha.degree > self.m:
            raise degree_overflow(alpha.degree, self.m)
        return self._positions[alpha.entries]

    def contains(self, alpha: MultiIndex) -> bool:
        return alpha.n == self.n and alpha.degree <= self.m

    def __len__(self) -> int:
        return len(self.elements)

    def __getitem__(self, i: int) -> MultiIndex:
        return self.elements[i]


def enumerate_basis(n: int, m: int) -> BasisOrder:
    """Enumerate J_n(m) in graded-lex order.

    Examples:
        >>> [str(a) for a in enumerate_basis(2, 1).elements]
        ['(0,0)', '(1,0)', '(0,1)']
    """
    if n < 1 or m < 0:
        raise ValidationException(
            message=f"J_n(m) needs n >= 1 and m >= 0, got n={n}, m={m}",
            error_code=ErrorCode.INVALID_CONFIG,
            details={"n": n, "m": m},
        )
    elements = [
        MultiIndex(entries=entries)
        for degree in range(m + 1)
        for entries in _compositions(degree, n)
    ]
    basis = BasisOrder(n=n, m=m, elements=tuple(elements))
    assert len(basis) == comb(n + m, n)
    return basis


def block_degrees(alpha: MultiIndex, k: Partition) -> tuple[int, ...]:
    """(|alpha_(1)|, ..., |alpha_(l)|) for the block decomposition given by k."""
    if alpha.n != k.n:
        raise dimension_mismatch(k.n, alpha.n)
    return tuple(sum(block) for block in k.blocks(alpha.entries))


class NormSquared(NamedTuple):
    """Squared norm of z^alpha in both arithmetic paths."""

    exact: Fraction
    value: float


def monomial_norm_sq(alpha: MultiIndex, m: int) -> NormSquared:
    """||z^alpha||_m^2 = alpha! (m - |alpha|)! / m!.

    The exact value uses big-integer rationals; the floating value is
    computed independently from log-gamma so it survives large n + m.
    """
    if alpha.degree > m:
        raise degree_overflow(alpha.degree, m)
    exact = Fraction(alpha.factorial * factorial(m - alpha.degree), factorial(m))
    entries = np.asarray(alpha.entries, dtype=float)
    log_value = gammaln(entries + 1.0).sum() + gammaln(m - alpha.degree + 1.0) - gammaln(m + 1.0)
    return NormSquared(exact=exact, value=float(np.exp(log_value)))
