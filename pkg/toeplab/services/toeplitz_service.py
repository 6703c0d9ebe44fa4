"""
Toeplitz Service.

Spectral-path assembly of Toeplitz operators with quasi-radial and
quasi-homogeneous symbols, the coefficient formulas gamma and
gamma-tilde, commutators and the commutativity predictions.

Coefficients are defined on unnormalized monomials,

    T_a z^alpha = gamma(alpha) z^alpha
    T_(a xi^p conj(xi)^q) z^alpha = gamma~(alpha) z^(alpha + p - q),

and matrices are reported in the orthonormal basis e_alpha = z^alpha / ||z^alpha||.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from math import factorial, prod
from typing import Literal

import numpy as np

from toeplab.core.exceptions import (
    ErrorCode,
    ValidationException,
    degree_overflow,
    dimension_mismatch,
)
from toeplab.domain.entities.bergman_space import BergmanSpace
from toeplab.domain.entities.operator_matrix import OperatorMatrix
from toeplab.domain.value_objects.multiindex import MultiIndex, Partition, block_degrees
from toeplab.domain.value_objects.symbols import QuasiHomogeneousSymbol, QuasiRadialSymbol
from toeplab.services.quadrature_service import Exponents, QuadratureService
from toeplab.services.symbol_service import is_balanced, validate_orthogonal

logger = logging.getLogger(__name__)

Method = Literal["auto", "closed_form", "numeric"]


def _check_partition(k: Partition, n: int) -> None:
    if k.n != n:
        raise dimension_mismatch(k.n, n, "partition")


def _radial_blocks(radial: QuasiRadialSymbol, k: Partition) -> None:
    blocks = radial.block_count()
    if blocks is not None and blocks != k.l:
        raise ValidationException(
            message=f"radial symbol uses {blocks} blocks, partition {k} has {k.l}",
            error_code=ErrorCode.INVALID_SYMBOL,
            details={"blocks": blocks, "l": k.l},
        )


def predict_commutes(
    sym1: QuasiHomogeneousSymbol, sym2: QuasiHomogeneousSymbol, k: Partition
) -> bool:
    """Coordinatewise sufficient condition for T_sym1 and T_sym2 to commute.

    For every coordinate i one of p_i = q_i = 0, u_i = v_i = 0,
    p_i = u_i = 0 or q_i = v_i = 0 must hold. Both symbols must be balanced.
    """
    for sym in (sym1, sym2):
        if sym.n != k.n:
            raise dimension_mismatch(k.n, sym.n, "symbol")
        if not is_balanced(sym.p, sym.q, k):
            raise ValidationException(
                message=f"symbol {sym.label()} is not balanced on the blocks of {k}",
                error_code=ErrorCode.UNBALANCED_BLOCKS,
                details={"p": list(sym.p.entries), "q": list(sym.q.entries)},
            )
    for p, q, u, v in zip(sym1.p.entries, sym1.q.entries, sym2.p.entries, sym2.q.entries):
        if not (p == q == 0 or u == v == 0 or p == u == 0 or q == v == 0):
            return False
    return True


def split_by_blocks(
    p: MultiIndex, q: MultiIndex, k: Partition
) -> list[tuple[MultiIndex, MultiIndex]]:
    """Per-block pairs (p~_(j), q~_(j)): p_(j), q_(j) placed in block j, zeros elsewhere."""
    if not validate_orthogonal(p, q):
        raise ValidationException(
            message="p and q must be orthogonal",
            error_code=ErrorCode.NOT_ORTHOGONAL,
        )
    _check_partition(k, p.n)
    factors = []
    for j in range(k.l):
        window = k.block_slice(j)
        mask = [window.start <= i < window.stop for i in range(k.n)]
        factors.append(
            (
                MultiIndex(entries=tuple(a if keep else 0 for a, keep in zip(p.entries, mask))),
                MultiIndex(entries=tuple(b if keep else 0 for b, keep in zip(q.entries, mask))),
            )
        )
    return factors


def commutator_norm(a: OperatorMatrix, b: OperatorMatrix) -> float:
    """||AB - BA||_2."""
    return a.commutator(b).spectral_norm()


class ToeplitzService:
    """Spectral formulas and matrix assembly.

    Handles the gamma / gamma-tilde coefficients, diagonal and shift
    assembly, and product/commutator diagnostics.
    """

    def __init__(self, quadrature: QuadratureService | None = None, method: Method = "auto"):
        """Initialize service with a quadrature backend.

        Args:
            quadrature: Radial integral evaluator
            method: Radial integration path
        """
        self.quadrature = quadrature or QuadratureService()
        self.method: Method = method

    # ==================== Coefficients ====================

    @staticmethod
    def _radial_prefactor(k: Partition, m: int, s: tuple[int, ...]) -> Fraction:
        n = k.n
        denominator = factorial(m - sum(s))
        denominator *= prod(factorial(kj - 1 + sj) for kj, sj in zip(k.parts, s))
        return Fraction(2**k.l * factorial(n + m), denominator)

    @staticmethod
    def _shift_prefactor(
        k: Partition,
        m: int,
        alpha: MultiIndex,
        p: MultiIndex,
        beta: MultiIndex,
    ) -> Fraction:
        n = k.n
        lifted = alpha + p
        numerator = 2**k.l * lifted.factorial * factorial(n + m)
        denominator = (
            beta.factorial
            * factorial(m - beta.degree)
            * prod(factorial(kj - 1 + dj) for kj, dj in zip(k.parts, block_degrees(lifted, k)))
        )
        return Fraction(numerator, denominator)

    @staticmethod
    def _shift_exponents(k: Partition, alpha: MultiIndex, beta: MultiIndex) -> Exponents:
        return tuple(
            da + db + 2 * kj - 1
            for da, db, kj in zip(block_degrees(alpha, k), block_degrees(beta, k), k.parts)
        )

    def gamma_quasi_radial(
        self, a: QuasiRadialSymbol, k: Partition, m: int, s: tuple[int, ...]
    ) -> complex:
        """Eigenvalue of T_a on monomials with block degrees s."""
        s = tuple(s)
        if len(s) != k.l:
            raise dimension_mismatch(k.l, len(s), "block degree vector")
        if sum(s) > m:
            raise degree_overflow(sum(s), m)
        _radial_blocks(a, k)
        exponents = tuple(2 * sj + 2 * kj - 1 for sj, kj in zip(s, k.parts))
        result = self.quadrature.moments(a, [exponents], k.n + m + 1, self.method)[exponents]
        return result.scaled(self._radial_prefactor(k, m, s))

    def gamma_tilde(
        self,
        a: QuasiRadialSymbol,
        k: Partition,
        p: MultiIndex,
        q: MultiIndex,
        m: int,
        alpha: MultiIndex,
    ) -> complex:
        """Coefficient of z^(alpha + p - q) in T_(a xi^p conj(xi)^q) z^alpha."""
        _check_partition(k, alpha.n)
        if not validate_orthogonal(p, q):
            raise ValidationException(
                message="p and q must be orthogonal",
                error_code=ErrorCode.NOT_ORTHOGONAL,
            )
        if alpha.degree > m:
            raise degree_overflow(alpha.degree, m)
        beta = alpha.shifted(p, q)
        if beta is None or beta.degree > m:
            raise ValidationException(
                message=f"alpha + p - q leaves J_n(m) for alpha={alpha}",
                error_code=ErrorCode.DEGREE_OVERFLOW,
                details={"alpha": list(alpha.entries), "m": m},
            )
        _radial_blocks(a, k)
        exponents = self._shift_exponents(k, alpha, beta)
        result = self.quadrature.moments(a, [exponents], k.n + m + 1, self.method)[exponents]
        return result.scaled(self._shift_prefactor(k, m, alpha, p, beta))

    def gamma_tilde_balanced(
        self,
        a: QuasiRadialSymbol,
        k: Partition,
        p: MultiIndex,
        q: MultiIndex,
        m: int,
        alpha: MultiIndex,
    ) -> complex:
        """gamma~ through the balanced ratio identity.

        gamma~(alpha) = prod_j (alpha_(j)+p_(j))! (k_j-1+|alpha_(j)|)!
                        / ((alpha_(j)+p_(j)-q_(j))! (k_j-1+|alpha_(j)+p_(j)|)!) * gamma(alpha)
        """
        if not is_balanced(p, q, k):
            raise ValidationException(
                message="ratio identity needs |p_(j)| = |q_(j)| on every block",
                error_code=ErrorCode.UNBALANCED_BLOCKS,
            )
        beta = alpha.shifted(p, q)
        if beta is None:
            raise ValidationException(
                message=f"alpha + p - q has a negative entry for alpha={alpha}",
                error_code=ErrorCode.DEGREE_OVERFLOW,
            )
        lifted = alpha + p
        s = block_degrees(alpha, k)
        ratio = Fraction(
            lifted.factorial * prod(factorial(kj - 1 + sj) for kj, sj in zip(k.parts, s)),
            beta.factorial
            * prod(factorial(kj - 1 + dj) for kj, dj in zip(k.parts, block_degrees(lifted, k))),
        )
        return complex(float(ratio) * self.gamma_quasi_radial(a, k, m, s))

    # ==================== Assembly ====================

    def coefficients(
        self, sym: QuasiHomogeneousSymbol, k: Partition, space: BergmanSpace
    ) -> list[tuple[MultiIndex, MultiIndex, complex]]:
        """(alpha, beta, gamma~(alpha)) for every column whose shift stays in J_n(m).

        beta = alpha + p - q; quasi-radial symbols give beta = alpha and
        gamma~ = gamma. Radial integrals are batched, so monomials with equal
        block degrees share one quadrature.
        """
        _check_partition(k, space.n)
        if sym.n != space.n:
            raise dimension_mismatch(space.n, sym.n, "symbol")
        _radial_blocks(sym.radial, k)

        columns: list[tuple[MultiIndex, MultiIndex, Exponents]] = []
        for alpha in space.basis.elements:
            beta = alpha.shifted(sym.p, sym.q)
            if beta is None or beta.degree > space.m:
                continue
            columns.append((alpha, beta, self._shift_exponents(k, alpha, beta)))
        if not columns:
            return []
        power = k.n + space.m + 1
        results = self.quadrature.moments(sym.radial, [c[2] for c in columns], power, self.method)
        return [
            (
                alpha,
                beta,
                results[exponents].scaled(self._shift_prefactor(k, space.m, alpha, sym.p, beta)),
            )
            for alpha, beta, exponents in columns
        ]

    def assemble_quasi_radial(
        self,
        a: QuasiRadialSymbol,
        k: Partition,
        space: BergmanSpace,
    ) -> OperatorMatrix:
        """Diagonal matrix of T_a."""
        sym = QuasiHomogeneousSymbol.quasi_radial(a, k.n)
        eigenvalues = [value for _, _, value in self.coefficients(sym, k, space)]
        logger.debug("Assembled T_a on %r: %d eigenvalues", space, len(eigenvalues))
        return OperatorMatrix(space, np.diag(eigenvalues), label=sym.label())

    def assemble_quasi_homogeneous(
        self, sym: QuasiHomogeneousSymbol, k: Partition, space: BergmanSpace
    ) -> OperatorMatrix:
        """Shift matrix M[beta, alpha] = gamma~(alpha) sqrt(N_beta / N_alpha), beta = alpha + p - q.

        Columns whose shifted index leaves J_n(m) are zero.
        """
        coefficients = self.coefficients(sym, k, space)
        entries = np.zeros((space.dim, space.dim), dtype=complex)
        norms = space.norm_consts
        for alpha, beta, value in coefficients:
            row, col = space.index(beta), space.index(alpha)
            entries[row, col] = value if row == col else value * np.sqrt(norms[row] / norms[col])
        logger.debug(
            "Assembled %s on %r: %d nonzero columns", sym.label(), space, len(coefficients)
        )
        return OperatorMatrix(space, entries, label=sym.label())

    def assemble(
        self, sym: QuasiHomogeneousSymbol, k: Partition, space: BergmanSpace
    ) -> OperatorMatrix:
        return self.assemble_quasi_homogeneous(sym, k, space)

    def assemble_product(
        self, sym: QuasiHomogeneousSymbol, k: Partition, space: BergmanSpace
    ) -> tuple[list[OperatorMatrix], OperatorMatrix]:
        """Block factors T_(xi^p~_(j) conj(xi)^q~_(j)) and their ordered product.

        The radial factor of `sym` is ignored; factors with p~ = q~ = 0 are skipped.
        """
        factors = [
            self.assemble_quasi_homogeneous(QuasiHomogeneousSymbol(p=p_j, q=q_j), k, space)
            for p_j, q_j in split_by_blocks(sym.p, sym.q, k)
            if not (p_j.is_zero() and q_j.is_zero())
        ]
        product = OperatorMatrix.identity(space)
        for factor in factors:
            product = product @ factor
        return factors, product

    # ==================== Diagnostics ====================

    def product_defects(
        self,
        sym: QuasiHomogeneousSymbol,
        k: Partition,
        space: BergmanSpace,
    ) -> dict[str, float]:
        """Spectral norms of T_a T_phi - T_(a phi), T_phi T_a - T_(a phi) and of the factorization.

        phi = xi^p conj(xi)^q carries no radial factor; `sym` is a phi.
        """
        t_a = self.assemble_quasi_radial(sym.radial, k, space)
        t_phi = self.assemble_quasi_homogeneous(QuasiHomogeneousSymbol(p=sym.p, q=sym.q), k, space)
        t_sym = self.assemble_quasi_homogeneous(sym, k, space)
        factors, product = self.assemble_product(sym, k, space)
        factor_commutators = [
            commutator_norm(factors[i], factors[j])
            for i in range(len(factors))
            for j in range(i + 1, len(factors))
        ]
        return {
            "left_product": (t_a @ t_phi - t_sym).spectral_norm(),
            "right_product": (t_phi @ t_a - t_sym).spectral_norm(),
            "factorization": (product - t_phi).spectral_norm(),
            "factor_commutator": max(factor_commutators, default=0.0),
        }

