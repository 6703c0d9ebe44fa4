"""
Oracle Service.

Direct computation of Toeplitz matrix entries and Bergman inner products
from their definitions, independent of the gamma formulas:

- separated: block-polar coordinates turn <sym z^alpha, z^beta>_m into a
  product of sphere integrals times one radial integral;
- montecarlo: points of the Fubini-Study probability measure are drawn
  as z = w_(1:) / w_0 with w uniform on the unit sphere of C^(n+1), and
  the density of dnu_m against it is binom(n+m, m) (1 + |z|^2)^(-m).
"""

from __future__ import annotations

import logging
from math import comb, factorial, prod
from typing import Literal, NamedTuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.special import gammaln

from toeplab.core.config import settings
from toeplab.core.exceptions import SamplingException, degree_overflow, dimension_mismatch
from toeplab.core.rng import UINT64_MAX, DeterministicRNG, pairwise_sum
from toeplab.domain.entities.bergman_space import BergmanSpace
from toeplab.domain.entities.operator_matrix import OperatorMatrix
from toeplab.domain.value_objects.multiindex import MultiIndex, Partition, block_degrees
from toeplab.domain.value_objects.symbols import ConstantSymbol, QuasiHomogeneousSymbol
from toeplab.services.quadrature_service import QuadratureService, RadialIntegrand
from toeplab.services.symbol_service import evaluate_many

logger = logging.getLogger(__name__)

MAX_RESAMPLE = 8


class McConfig(BaseModel):
    """Oracle configuration.

    Attributes:
        sample_count: Monte-Carlo samples
        seed: Unsigned 64-bit seed
        method: separated (exact reduction) or montecarlo
        batch_size: Samples per seeded batch
        algorithm: numpy bit generator
    """

    model_config = ConfigDict(frozen=True)

    sample_count: int = Field(default_factory=lambda: settings.MC_SAMPLES, ge=10_000)
    seed: int = Field(default_factory=lambda: settings.DEFAULT_SEED, ge=0, le=UINT64_MAX)
    method: Literal["separated", "montecarlo"] = "separated"
    batch_size: int = Field(default_factory=lambda: settings.MC_BATCH_SIZE, ge=1)
    algorithm: str = Field(default_factory=lambda: settings.RNG_ALGORITHM)

    @property
    def batches(self) -> list[int]:
        """Sizes of the seeded batches."""
        full, rest = divmod(self.sample_count, self.batch_size)
        return [self.batch_size] * full + ([rest] if rest else [])


class OracleValue(NamedTuple):
    """Direct value with its standard error (0 on the separated path)."""

    value: complex
    stderr: float
    method: str
    samples: int = 0


class OracleDeviation(NamedTuple):
    deviation: float
    stderr: float


def sphere_moment(gamma: tuple[int, ...]) -> float:
    """int_(S^(2k-1)) |zeta^gamma|^2 dsigma / pi^k = 2 gamma! / (k - 1 + |gamma|)!."""
    g = np.asarray(gamma, dtype=float)
    k = len(gamma)
    return float(2.0 * np.exp(gammaln(g + 1.0).sum() - gammaln(k + g.sum())))


def _standard_error(total: complex, total_sq: float, count: int) -> float:
    mean = total / count
    variance = max(total_sq - count * abs(mean) ** 2, 0.0) / (count * (count - 1))
    return float(np.sqrt(variance))


class OracleService:
    """Brute-force inner products and Toeplitz matrices.

    Handles the separated reduction, the Fubini-Study Monte-Carlo sampler
    and comparison against the spectral path.
    """

    def __init__(self, quadrature: QuadratureService | None = None):
        """Initialize service.

        Args:
            quadrature: Radial integral evaluator for the separated path
        """
        self.quadrature = quadrature or QuadratureService()

    # ==================== Sampling ====================

    @staticmethod
    def sample_fubini_study(
        n: int,
        count: int,
        generator: np.random.Generator,
    ) -> tuple[np.ndarray, np.ndarray]:
        """Points z of C^n under the Fubini-Study probability measure.

        Returns z and the ratios |w_0|^2 / |w|^2 = 1 / (1 + |z|^2).
        """
        def complex_normal(rows: int) -> np.ndarray:
            shape = (rows, n + 1)
            return generator.standard_normal(shape) + 1j * generator.standard_normal(shape)

        w = complex_normal(count)
        for _ in range(MAX_RESAMPLE):
            bad = w[:, 0] == 0
            if not np.any(bad):
                break
            logger.warning("Resampling %d points with w_0 = 0", int(bad.sum()))
            w[bad] = complex_normal(int(bad.sum()))
        else:
            raise SamplingException(details={"n": n, "count": count})
        squared = np.sum(np.abs(w) ** 2, axis=1)
        return w[:, 1:] / w[:, :1], np.abs(w[:, 0]) ** 2 / squared

    def _mc_sums(
        self,
        sym: QuasiHomogeneousSymbol,
        k: Partition,
        space: BergmanSpace,
        cfg: McConfig,
    ) -> tuple[np.ndarray, np.ndarray, int]:
        """Pairwise-reduced sums of x[beta, alpha] and |x|^2 over all batches.

        x = sym(z) e_alpha(z) conj(e_beta(z)) binom(n+m, m) (1 + |z|^2)^(-m).
        """
        rng = DeterministicRNG(cfg.seed, cfg.algorithm)
        density = comb(space.n + space.m, space.m)
        sums: list[np.ndarray] = []
        squares: list[np.ndarray] = []
        for index, size in enumerate(cfg.batches):
            z, ratio = self.sample_fubini_study(space.n, size, rng.stream(index))
            weight = evaluate_many(sym, z, k) * density * ratio**space.m
            basis = space.normalized_monomial_values(z)
            sums.append(np.einsum("sb,s,sa->ba", basis.conj(), weight, basis))
            power = np.abs(basis) ** 2
            squares.append(np.einsum("sb,s,sa->ba", power, np.abs(weight) ** 2, power))
        return pairwise_sum(sums), pairwise_sum(squares).real, cfg.sample_count

    # ==================== Inner products ====================

    def _separated(
        self, sym: QuasiHomogeneousSymbol, k: Partition, alpha: MultiIndex, beta: MultiIndex, m: int
    ) -> complex:
        lifted = alpha + sym.p
        if lifted != beta + sym.q:
            return 0j
        n = k.n
        spheres = prod(sphere_moment(block) for block in k.blocks(lifted.entries))
        exponents = tuple(
            da + db + 2 * kj - 1
            for da, db, kj in zip(block_degrees(alpha, k), block_degrees(beta, k), k.parts)
        )
        radial = self.quadrature.radial_integral(
            RadialIntegrand(exponents=exponents, power=n + m + 1, radial=sym.radial)
        )
        return complex(factorial(n + m) / factorial(m) * spheres * radial.value)

    def inner_product_direct(
        self,
        sym: QuasiHomogeneousSymbol,
        alpha: MultiIndex,
        beta: MultiIndex,
        space: BergmanSpace,
        k: Partition,
        cfg: McConfig | None = None,
    ) -> OracleValue:
        """<sym z^alpha, z^beta>_m on unnormalized monomials."""
        cfg = cfg or McConfig()
        for index in (alpha, beta):
            if index.n != space.n:
                raise dimension_mismatch(space.n, index.n)
            if index.degree > space.m:
                raise degree_overflow(index.degree, space.m)
        if cfg.method == "separated":
            return OracleValue(self._separated(sym, k, alpha, beta, space.m), 0.0, "separated")

        sums, squares, count = self._mc_sums(sym, k, space, cfg)
        row, col = space.index(beta), space.index(alpha)
        scale = float(np.sqrt(space.norm_consts[row] * space.norm_consts[col]))
        mean = sums[row, col] / count
        stderr = _standard_error(sums[row, col], squares[row, col], count)
        return OracleValue(complex(mean * scale), stderr * scale, "montecarlo", count)

    def assemble_direct_with_errors(
        self,
        sym: QuasiHomogeneousSymbol,
        k: Partition,
        space: BergmanSpace,
        cfg: McConfig | None = None,
    ) -> tuple[OperatorMatrix, np.ndarray]:
        """Direct Toeplitz matrix <sym e_alpha, e_beta>_m and entrywise standard errors."""
        cfg = cfg or McConfig()
        if sym.n != space.n:
            raise dimension_mismatch(space.n, sym.n, "symbol")
        logger.debug("Direct assembly of %s on %r (%s)", sym.label(), space, cfg.method)
        if cfg.method == "separated":
            entries = np.zeros((space.dim, space.dim), dtype=complex)
            norms = space.norm_consts
            for col, alpha in enumerate(space.basis.elements):
                for row, beta in enumerate(space.basis.elements):
                    value = self._separated(sym, k, alpha, beta, space.m)
                    if value != 0:
                        entries[row, col] = value / np.sqrt(norms[row] * norms[col])
            matrix = OperatorMatrix(space, entries, label=sym.label())
            return matrix, np.zeros((space.dim, space.dim))

        sums, squares, count = self._mc_sums(sym, k, space, cfg)
        mean = sums / count
        variance = np.maximum(squares - count * np.abs(mean) ** 2, 0.0) / (count * (count - 1))
        return OperatorMatrix(space, mean, label=sym.label()), np.sqrt(variance)

    def assemble_direct(
        self,
        sym: QuasiHomogeneousSymbol,
        k: Partition,
        space: BergmanSpace,
        cfg: McConfig | None = None,
    ) -> OperatorMatrix:
        """Toeplitz matrix from the definition, in the orthonormal basis."""
        return self.assemble_direct_with_errors(sym, k, space, cfg)[0]

    def reproducing_check(
        self, alpha: MultiIndex, space: BergmanSpace, cfg: McConfig | None = None
    ) -> OracleDeviation:
        """Deviation of <z^alpha, e_beta>_m from sqrt(N_alpha) delta_(alpha, beta).

        These are the coefficients of the Bergman projection of z^alpha,
        computed without the kernel.
        """
        cfg = cfg or McConfig()
        k = Partition.radial(space.n)
        one = QuasiHomogeneousSymbol.quasi_radial(ConstantSymbol(), space.n)
        col = space.index(alpha)
        root = float(np.sqrt(space.norm_consts[col]))
        expected = np.zeros(space.dim)
        expected[col] = root
        matrix, errors = self.assemble_direct_with_errors(one, k, space, cfg)
        # <z^alpha, e_beta> = sqrt(N_alpha) <e_alpha, e_beta>
        coefficients = matrix.entries[:, col] * root
        deviation = float(np.max(np.abs(coefficients - expected)))
        return OracleDeviation(deviation, float(np.max(errors[:, col]) * root))

    def normalization_mc(self, n: int, m: int, cfg: McConfig | None = None) -> OracleValue:
        """Monte-Carlo estimate of int dnu_m over C^n (expected 1)."""
        cfg = cfg or McConfig(method="montecarlo")
        rng = DeterministicRNG(cfg.seed, cfg.algorithm)
        density = comb(n + m, m)
        sums: list[np.ndarray] = []
        squares: list[np.ndarray] = []
        for index, size in enumerate(cfg.batches):
            _, ratio = self.sample_fubini_study(n, size, rng.stream(index))
            x = density * ratio**m
            sums.append(np.array(x.sum()))
            squares.append(np.array((x * x).sum()))
        total = complex(pairwise_sum(sums))
        stderr = _standard_error(total, float(pairwise_sum(squares)), cfg.sample_count)
        return OracleValue(total / cfg.sample_count, stderr, "montecarlo", cfg.sample_count)

    # ==================== Comparison ====================

    def compare(
        self,
        spectral: OperatorMatrix,
        sym: QuasiHomogeneousSymbol,
        k: Partition,
        cfg: McConfig | None = None,
    ) -> dict[str, float | int | str]:
        """Entrywise comparison of a spectral matrix with the direct one."""
        cfg = cfg or McConfig()
        direct, errors = self.assemble_direct_with_errors(sym, k, spectral.space, cfg)
        diff = np.abs(spectral.entries - direct.entries)
        report: dict[str, float | int | str] = {
            "method": cfg.method,
            "max_abs_diff": float(diff.max()),
            "mean_abs_diff": float(diff.mean()),
            "stderr": float(errors.max()),
            "seed": cfg.seed,
            "samples": cfg.sample_count if cfg.method == "montecarlo" else 0,
        }
        if cfg.method == "montecarlo":
            # worst entry measured in standard errors; exact zeros have zero spread
            with np.errstate(divide="ignore", invalid="ignore"):
                sigmas = np.where(errors > 0, diff / errors, np.where(diff > 0, np.inf, 0.0))
            report["max_sigma"] = float(sigmas.max())
        return report
