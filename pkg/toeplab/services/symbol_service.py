"""
Symbol Service.

Evaluation and classification of quasi-homogeneous symbols: orthogonality,
membership in R_k(h), pointwise values in the block coordinates
xi_(j) = z_(j) / r_j, and the torus-invariance characterization.
"""

from __future__ import annotations

import itertools
import logging
from typing import Iterator

import numpy as np

from toeplab.core.exceptions import (
    ErrorCode,
    ValidationException,
    dimension_mismatch,
    undefined_block,
)
from toeplab.core.rng import DeterministicRNG
from toeplab.domain.value_objects.multiindex import MultiIndex, Partition, block_degrees
from toeplab.domain.value_objects.symbols import (
    BoundedRationalSymbol,
    ConstantSymbol,
    InversePowerSymbol,
    QuasiHomogeneousSymbol,
    QuasiRadialSymbol,
    SymbolClassRkh,
    TorusElement,
)

logger = logging.getLogger(__name__)

TORUS_TOL = 1e-12


def validate_orthogonal(p: MultiIndex, q: MultiIndex) -> bool:
    """True iff p . q = 0."""
    if p.n != q.n:
        raise dimension_mismatch(p.n, q.n)
    return p.dot(q) == 0


def is_balanced(p: MultiIndex, q: MultiIndex, k: Partition) -> bool:
    """True iff |p_(j)| = |q_(j)| on every block."""
    return block_degrees(p, k) == block_degrees(q, k)


def in_class_Rkh(sym: QuasiHomogeneousSymbol, cls: SymbolClassRkh) -> bool:  # noqa: N802
    """Membership of (p, q) in R_k(h).

    On block j, p may only use the first h_j coordinates and q the
    remaining ones, with equal block sums; blocks of size 1 carry nothing.
    """
    k = cls.k
    if sym.n != k.n:
        raise dimension_mismatch(k.n, sym.n, "symbol")
    p_blocks = k.blocks(sym.p.entries)
    q_blocks = k.blocks(sym.q.entries)
    for h_j, p_j, q_j in zip(cls.h, p_blocks, q_blocks):
        if h_j is None:
            if any(p_j) or any(q_j):
                return False
            continue
        if any(p_j[h_j:]) or any(q_j[:h_j]):
            return False
        if sum(p_j) != sum(q_j):
            return False
    return True


def _block_radii(z: np.ndarray, k: Partition) -> np.ndarray:
    # (..., n) -> (..., l)
    return np.stack(
        [np.linalg.norm(z[..., k.block_slice(j)], axis=-1) for j in range(k.l)], axis=-1
    )


def _touched_blocks(sym: QuasiHomogeneousSymbol, k: Partition) -> list[int]:
    degrees = zip(block_degrees(sym.p, k), block_degrees(sym.q, k))
    return [j for j, (dp, dq) in enumerate(degrees) if dp or dq]


def evaluate_many(sym: QuasiHomogeneousSymbol, z: np.ndarray, k: Partition) -> np.ndarray:
    """a(r) xi^p conj(xi)^q at points of shape (..., n).

    Raises UndefinedCoordinatesException when a block used by (p, q)
    vanishes at any of the points.
    """
    z = np.asarray(z, dtype=complex)
    if z.shape[-1] != k.n:
        raise dimension_mismatch(k.n, z.shape[-1], "point")
    if sym.n != k.n:
        raise dimension_mismatch(k.n, sym.n, "symbol")
    radii = _block_radii(z, k)
    values = np.asarray(sym.radial.value(radii), dtype=complex)
    if sym.is_quasi_radial:
        return values

    for j in _touched_blocks(sym, k):
        if np.any(radii[..., j] == 0):
            raise undefined_block(j)
    expanded = np.concatenate(
        [np.repeat(radii[..., j : j + 1], part, axis=-1) for j, part in enumerate(k.parts)],
        axis=-1,
    )
    with np.errstate(invalid="ignore", divide="ignore"):
        xi = np.where(expanded > 0, z / np.where(expanded > 0, expanded, 1.0), 0.0)
    p = np.asarray(sym.p.entries)
    q = np.asarray(sym.q.entries)
    return values * np.prod(xi**p * np.conj(xi) ** q, axis=-1)


def evaluate(sym: QuasiHomogeneousSymbol, z: np.ndarray | list[complex], k: Partition) -> complex:
    """Value of the symbol at a single point z of C^n."""
    return complex(evaluate_many(sym, np.asarray(z, dtype=complex).reshape(1, -1), k)[0])


def is_in_Tk(t: TorusElement, k: Partition, tol: float = TORUS_TOL) -> bool:  # noqa: N802
    """True iff t is constant on every block, i.e. t lies in T_k."""
    if t.n != k.n:
        raise dimension_mismatch(k.n, t.n, "torus element")
    if np.max(np.abs(np.abs(t.values) - 1.0)) > tol:
        raise ValidationException(
            message="torus element coordinates must have unit modulus",
            error_code=ErrorCode.INVALID_GROUP_ELEMENT,
        )
    return all(np.max(np.abs(block - block[0])) <= tol for block in k.blocks(t.values))


def invariance_deviation(
    sym: QuasiHomogeneousSymbol,
    t: TorusElement,
    k: Partition,
    sample_points: np.ndarray | int = 100,
    seed: int | None = None,
) -> float:
    """max over samples of |sym(t.z) - sym(z)|.

    Args:
        sample_points: Points of V_k, or how many to draw
        seed: Seed of the drawn points (ignored when points are given)
    """
    if isinstance(sample_points, int):
        rng = DeterministicRNG(seed).stream()
        points = SymbolService.sample_vk(k, sample_points, rng)
    else:
        points = np.asarray(sample_points, dtype=complex)
    moved = evaluate_many(sym, t.act(points), k)
    return float(np.max(np.abs(moved - evaluate_many(sym, points, k))))


def witness_symbol(cls: SymbolClassRkh, block: int, r: int, s: int) -> QuasiHomogeneousSymbol:
    """xi_(j),r conj(xi)_(j),s on block j: detects t with t_(j),r != t_(j),s.

    Indices are 0-based within the block, with r < h_j <= s.
    """
    k = cls.k
    h_j = cls.h[block]
    if h_j is None or not (0 <= r < h_j <= s < k.parts[block]):
        raise ValidationException(
            message=f"witness needs r < h_j <= s inside block {block + 1}",
            error_code=ErrorCode.INVALID_SYMBOL,
            details={"block": block + 1, "r": r, "s": s, "h": h_j},
        )
    offset = k.offsets[block]
    return QuasiHomogeneousSymbol(
        p=MultiIndex.unit(k.n, offset + r),
        q=MultiIndex.unit(k.n, offset + s),
    )


def _balanced_block_patterns(
    h_j: int,
    k_j: int,
    degree: int,
) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    # p on the first h_j slots, q on the rest, both with block sum `degree`
    p_slots = [c for c in itertools.product(range(degree + 1), repeat=h_j) if sum(c) == degree]
    q_slots = [
        c for c in itertools.product(range(degree + 1), repeat=k_j - h_j) if sum(c) == degree
    ]
    for p_part in sorted(p_slots, reverse=True):
        for q_part in sorted(q_slots, reverse=True):
            yield p_part + (0,) * (k_j - h_j), (0,) * h_j + q_part


def balanced_monomials(k: Partition, max_entry: int = 1) -> list[QuasiHomogeneousSymbol]:
    """Every nonzero xi^p conj(xi)^q with entries <= max_entry, p . q = 0 and |p_(j)| = |q_(j)|."""
    per_block: list[list[tuple[tuple[int, ...], tuple[int, ...]]]] = []
    for k_j in k.parts:
        entries = list(itertools.product(range(max_entry + 1), repeat=k_j))
        per_block.append(
            [
                (p_j, q_j)
                for p_j in entries
                for q_j in entries
                if sum(p_j) == sum(q_j) and not any(a and b for a, b in zip(p_j, q_j))
            ]
        )
    symbols = []
    for combo in itertools.product(*per_block):
        p = tuple(entry for p_j, _ in combo for entry in p_j)
        q = tuple(entry for _, q_j in combo for entry in q_j)
        if any(p) or any(q):
            symbols.append(QuasiHomogeneousSymbol.monomial(p, q))
    return symbols


def _radial_battery(l: int) -> list[QuasiRadialSymbol]:  # noqa: E741
    return [
        ConstantSymbol(),
        InversePowerSymbol(t=1),
        BoundedRationalSymbol(c=(1,) + (0,) * (l - 1), t=1),
        InversePowerSymbol(t=2, coefficient=2.0),
        BoundedRationalSymbol(c=(0,) * (l - 1) + (1,), t=2),
    ]


def rkh_generators(
    cls: SymbolClassRkh, count: int, max_degree: int = 1
) -> list[QuasiHomogeneousSymbol]:
    """Deterministic family of symbols of R_k(h).

    Per-block balanced patterns of degree <= max_degree are combined across
    blocks and paired cyclically with closed-form radial factors. The
    first generator is always the quasi-radial constant 1.
    """
    k = cls.k
    per_block: list[list[tuple[tuple[int, ...], tuple[int, ...]]]] = []
    for h_j, k_j in zip(cls.h, k.parts):
        options = [((0,) * k_j, (0,) * k_j)]
        if h_j is not None:
            for degree in range(1, max_degree + 1):
                options.extend(_balanced_block_patterns(h_j, k_j, degree))
        per_block.append(options)

    radial = _radial_battery(k.l)
    generators: list[QuasiHomogeneousSymbol] = []
    for index, combo in enumerate(itertools.product(*per_block)):
        p = tuple(entry for p_j, _ in combo for entry in p_j)
        q = tuple(entry for _, q_j in combo for entry in q_j)
        sym = QuasiHomogeneousSymbol.monomial(p, q, radial=radial[index % len(radial)])
        generators.append(sym)
        if len(generators) == count:
            break
    # cycle radial factors again when the patterns run out
    base = list(generators)
    for offset in range(1, len(radial)):
        for index, sym in enumerate(base):
            if len(generators) == count:
                break
            radial_factor = radial[(index + offset) % len(radial)]
            generators.append(QuasiHomogeneousSymbol(radial=radial_factor, p=sym.p, q=sym.q))
    logger.debug("Generated %d symbols of R_k(h) for k=%s, h=%s", len(generators), k, cls.h)
    return generators


class SymbolService:
    """Torus-invariance experiments over symbol families.

    Wraps the pure operations above with sampling of points in V_k and
    of torus elements.
    """

    def __init__(self, tol: float = TORUS_TOL):
        """Initialize service.

        Args:
            tol: Tolerance for torus membership
        """
        self.tol = tol

    # ==================== Sampling ====================

    @staticmethod
    def sample_vk(k: Partition, count: int, rng: np.random.Generator) -> np.ndarray:
        """Complex Gaussian points of C^n; every block is nonzero almost surely."""
        return rng.standard_normal((count, k.n)) + 1j * rng.standard_normal((count, k.n))

    @staticmethod
    def random_tk(k: Partition, rng: np.random.Generator) -> TorusElement:
        """Uniform element of T_k (one angle per block)."""
        angles = rng.uniform(0.0, 2.0 * np.pi, size=k.l)
        return TorusElement.from_angles(np.repeat(angles, k.parts))

    @staticmethod
    def random_outside_tk(
        k: Partition, rng: np.random.Generator, min_gap: float = 0.1
    ) -> TorusElement:
        """Torus element with two coordinates of some block of size >= 2 differing."""
        blocks = [j for j, part in enumerate(k.parts) if part >= 2]
        if not blocks:
            raise ValidationException(
                message="T_k is the whole torus when every block has size 1",
                error_code=ErrorCode.INVALID_PARTITION,
            )
        angles = rng.uniform(0.0, 2.0 * np.pi, size=k.n)
        j = blocks[int(rng.integers(len(blocks)))]
        start = k.offsets[j]
        gap = rng.uniform(min_gap, 2.0 * np.pi - min_gap)
        angles[start + 1] = angles[start] + gap
        return TorusElement.from_angles(angles)

    # ==================== Characterization ====================

    def witness_for(
        self, t: TorusElement, cls: SymbolClassRkh
    ) -> tuple[QuasiHomogeneousSymbol, float]:
        """Witness symbol for t and the ratio gap |1 - t_r conj(t_s)| it must detect.

        Picks the block and coordinate pair (r < h_j <= s) with the largest gap.
        """
        k = cls.k
        best: tuple[int, int, int] | None = None
        best_gap = -1.0
        for j, (h_j, block) in enumerate(zip(cls.h, k.blocks(t.values))):
            if h_j is None:
                continue
            for r in range(h_j):
                for s in range(h_j, k.parts[j]):
                    gap = float(abs(1.0 - block[r] * np.conj(block[s])))
                    if gap > best_gap:
                        best, best_gap = (j, r, s), gap
        if best is None:
            raise ValidationException(
                message="R_k(h) has no block carrying (p, q) support",
                error_code=ErrorCode.INVALID_PARTITION,
            )
        return witness_symbol(cls, *best), best_gap

    def max_deviation(
        self,
        symbols: list[QuasiHomogeneousSymbol],
        t: TorusElement,
        k: Partition,
        points: np.ndarray,
    ) -> float:
        """Largest invariance deviation over a symbol family."""
        return max(invariance_deviation(sym, t, k, points) for sym in symbols)
