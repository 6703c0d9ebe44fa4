"""
Weighted Bergman space entity.

A^2_m(Pn(C)) is realized in the affine chart as the polynomials of degree
at most m on C^n, with inner product taken against the probability measure

    dnu_m(z) = (n+m)! / (pi^n m!) dV(z) / (1 + |z|^2)^(n+m+1).

The monomials z^alpha, alpha in J_n(m), are orthogonal with squared norms
alpha! (m - |alpha|)! / m!.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import numpy as np

from toeplab.core.exceptions import dimension_mismatch
from toeplab.domain.value_objects.multiindex import (
    BasisOrder,
    MultiIndex,
    enumerate_basis,
    monomial_norm_sq,
)


class BergmanSpace:
    """Finite-dimensional weighted Bergman space with ordered monomial basis.

    Attributes:
        n: Complex dimension of the chart
        m: Weight (maximal polynomial degree)
        basis: Graded-lex ordered J_n(m)
        norm_exact: Squared monomial norms as exact rationals
        norm_consts: Squared monomial norms in floating point
    """

    def __init__(self, n: int, m: int) -> None:
        self._basis = enumerate_basis(n, m)
        norms = [monomial_norm_sq(alpha, m) for alpha in self._basis.elements]
        self._norm_exact = tuple(norm.exact for norm in norms)
        self._norm_consts = np.array([norm.value for norm in norms])
        self._norm_consts.flags.writeable = False

    @classmethod
    def of(cls, n: int, m: int) -> BergmanSpace:
        """Shared instance for (n, m)."""
        return _space(n, m)

    @property
    def n(self) -> int:
        return self._basis.n

    @property
    def m(self) -> int:
        return self._basis.m

    @property
    def basis(self) -> BasisOrder:
        return self._basis

    @property
    def dim(self) -> int:
        return len(self._basis)

    @property
    def norm_exact(self) -> tuple[Fraction, ...]:
        return self._norm_exact

    @property
    def norm_consts(self) -> np.ndarray:
        return self._norm_consts

    def index(self, alpha: MultiIndex) -> int:
        return self._basis.index(alpha)

    def monomial_values(self, z: np.ndarray) -> np.ndarray:
        """z^alpha for every basis element, points of shape (..., n) -> (..., dim)."""
        z = np.asarray(z, dtype=complex)
        if z.shape[-1] != self.n:
            raise dimension_mismatch(self.n, z.shape[-1], "point")
        exponents = np.array([alpha.entries for alpha in self._basis.elements])
        return np.prod(z[..., None, :] ** exponents, axis=-1)

    def normalized_monomial_values(self, z: np.ndarray) -> np.ndarray:
        """Orthonormal basis functions z^alpha / ||z^alpha|| at the given points."""
        return self.monomial_values(z) / np.sqrt(self._norm_consts)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BergmanSpace):
            return False
        return (self.n, self.m) == (other.n, other.m)

    def __hash__(self) -> int:
        return hash((self.n, self.m))

    def __repr__(self) -> str:
        return f"BergmanSpace(n={self.n}, m={self.m}, dim={self.dim})"


@lru_cache(maxsize=64)
def _space(n: int, m: int) -> BergmanSpace:
    return BergmanSpace(n, m)


class SectionPoly:
    """Element of A^2_m given by coefficients in the orthonormal monomial basis."""

    def __init__(self, space: BergmanSpace, coefficients: np.ndarray) -> None:
        coefficients = np.asarray(coefficients, dtype=complex).reshape(-1)
        if coefficients.size != space.dim:
            raise dimension_mismatch(space.dim, coefficients.size, "coefficient vector")
        coefficients.flags.writeable = False
        self._space = space
        self._coefficients = coefficients

    @classmethod
    def basis_element(cls, space: BergmanSpace, alpha: MultiIndex) -> SectionPoly:
        """The orthonormal basis vector e_alpha."""
        coefficients = np.zeros(space.dim, dtype=complex)
        coefficients[space.index(alpha)] = 1.0
        return cls(space, coefficients)

    @property
    def space(self) -> BergmanSpace:
        return self._space

    @property
    def coefficients(self) -> np.ndarray:
        return self._coefficients

    def norm(self) -> float:
        return float(np.linalg.norm(self._coefficients))
