"""
Bergman Service.

Reproducing kernel, monomial inner products and section evaluation on
A^2_m in the affine chart.
"""

from __future__ import annotations

import logging
from fractions import Fraction

import numpy as np

from toeplab.core.exceptions import degree_overflow, dimension_mismatch
from toeplab.domain.entities.bergman_space import BergmanSpace, SectionPoly
from toeplab.domain.value_objects.multiindex import MultiIndex, monomial_norm_sq

logger = logging.getLogger(__name__)


def kernel(z: np.ndarray, w: np.ndarray, m: int) -> complex | np.ndarray:
    """K(z, w) = (1 + <z, w>)^m with <z, w> = sum z_i conj(w_i); broadcasts over leading axes."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if z.shape[-1] != w.shape[-1]:
        raise dimension_mismatch(z.shape[-1], w.shape[-1], "point")
    value = (1.0 + np.sum(z * np.conj(w), axis=-1)) ** m
    return complex(value) if np.ndim(value) == 0 else value


def gram_matrix(points: np.ndarray, m: int) -> np.ndarray:
    """[K(z_i, z_j)] for points of shape (count, n)."""
    points = np.asarray(points, dtype=complex)
    return (1.0 + points @ points.conj().T) ** m


def inner_product_monomials(
    alpha: MultiIndex,
    beta: MultiIndex,
    m: int,
    exact: bool = False,
) -> complex | Fraction:
    """<z^alpha, z^beta>_m = delta_(alpha, beta) alpha! (m - |alpha|)! / m!."""
    if alpha.n != beta.n:
        raise dimension_mismatch(alpha.n, beta.n)
    for index in (alpha, beta):
        if index.degree > m:
            raise degree_overflow(index.degree, m)
    if alpha != beta:
        return Fraction(0) if exact else 0j
    norm = monomial_norm_sq(alpha, m)
    return norm.exact if exact else complex(norm.value)


def evaluate_section(s: SectionPoly, z: np.ndarray) -> complex | np.ndarray:
    """sum_alpha c_alpha z^alpha / ||z^alpha|| at z; broadcasts over leading axes."""
    values = s.space.normalized_monomial_values(z) @ s.coefficients
    return complex(values) if np.ndim(values) == 0 else values


def kernel_section(space: BergmanSpace, w: np.ndarray) -> SectionPoly:
    """K(., w) as a section: coefficients conj(e_alpha(w)) in the orthonormal basis."""
    w = np.asarray(w, dtype=complex).reshape(-1)
    return SectionPoly(space, np.conj(space.normalized_monomial_values(w)))
