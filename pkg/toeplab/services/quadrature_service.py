"""
Radial Quadrature Service.

Evaluates the radial integrals

    I(a; e, D) = int_{R_+^l} a(r) (1 + |r|^2)^(-D) prod_j r_j^(e_j) dr

behind every Toeplitz coefficient. Closed-form symbols go through the
Dirichlet-type Beta identity (exact rationals when all parameters are
integers); everything else uses a tensor-product Gauss rule. The default
`dirichlet` mapping substitutes s_j = r_j^2 and stick-breaking coordinates
on the simplex, which turns the algebraic decay into Gauss-Jacobi weights;
the `rational` mapping is Gauss-Legendre on r = u / (1 - u) per axis.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from functools import lru_cache
from itertools import accumulate
from math import factorial
from typing import Callable, Literal, NamedTuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy.special import gammaln, roots_jacobi, roots_legendre

from toeplab.core.config import settings
from toeplab.core.exceptions import (
    ErrorCode,
    QuadratureConvergenceException,
    ValidationException,
    divergent_integral,
)
from toeplab.domain.value_objects.symbols import (
    BetaTerm,
    ConstantSymbol,
    QuasiRadialSymbol,
)

logger = logging.getLogger(__name__)

Exponents = tuple[int, ...]


class QuadratureSpec(BaseModel):
    """Numeric quadrature parameters.

    Attributes:
        nodes_per_axis: Gauss nodes on (0, 1) per radial axis
        mapping: `dirichlet` (stick-breaking, Gauss-Jacobi) or
            `rational` (r = u / (1 - u), Gauss-Legendre)
        tolerance: Largest relative change allowed when halving the nodes
        max_points: Grid points evaluated per streamed chunk
    """

    model_config = ConfigDict(frozen=True)

    nodes_per_axis: int = Field(default_factory=lambda: settings.QUADRATURE_NODES, ge=8)
    mapping: Literal["dirichlet", "rational"] = "dirichlet"
    tolerance: float = Field(default_factory=lambda: settings.TOL_NUMERIC, gt=0)
    max_points: int = Field(default_factory=lambda: settings.QUADRATURE_MAX_POINTS, ge=1)


class RadialIntegrand(BaseModel):
    """One radial integral: exponents e_j, power D and the radial symbol."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    exponents: Exponents = Field(min_length=1)
    power: int = Field(ge=1)
    radial: QuasiRadialSymbol = Field(default_factory=ConstantSymbol)

    @field_validator("exponents")
    @classmethod
    def validate_exponents(cls, v: Exponents) -> Exponents:
        if any(e < 0 for e in v):
            raise ValueError("radial exponents must be nonnegative")
        return v

    @model_validator(mode="after")
    def validate_blocks(self) -> RadialIntegrand:
        """Validate that the symbol's block count matches the exponents."""
        blocks = self.radial.block_count()
        if blocks is not None and blocks != self.l:
            raise ValueError(f"symbol has {blocks} radial blocks, integrand has {self.l}")
        return self

    @property
    def l(self) -> int:  # noqa: E743
        return len(self.exponents)


class QuadratureResult(NamedTuple):
    """Value of a radial integral.

    `terms` pairs every Beta term's scale with its exact rational value
    (None when some Beta parameter is not an integer). It is empty on
    the numeric path.
    """

    value: complex
    error: float
    method: str
    terms: tuple[tuple[complex, Fraction | None], ...] = ()

    @property
    def is_exact(self) -> bool:
        return bool(self.terms) and all(exact is not None for _, exact in self.terms)

    def scaled(self, prefactor: Fraction) -> complex:
        """prefactor * value, computed in exact rationals where possible."""
        if self.is_exact:
            return sum(
                (
                    scale * float(prefactor * exact)  # type: ignore[operator]
                    for scale, exact in self.terms
                ),
                start=0j,
            )
        return complex(float(prefactor) * self.value)


# ==================== Beta moments ====================


def beta_moment(d: list[float] | tuple[float, ...], power: float) -> float:
    """int_{R_+^l} prod s_j^(d_j - 1) (1 + sum s)^(-D) ds.

    Equals prod Gamma(d_j) Gamma(D - sum d) / Gamma(D).

    Examples:
        >>> beta_moment([1], 2)
        1.0
    """
    d_arr = np.asarray(d, dtype=float)
    if d_arr.size == 0 or np.any(d_arr <= 0):
        raise ValidationException(
            message="Beta parameters must be positive",
            error_code=ErrorCode.INVALID_CONFIG,
            details={"d": list(map(float, d_arr))},
        )
    if d_arr.sum() >= power:
        raise divergent_integral(list(map(float, d_arr)), float(power))
    log_value = gammaln(d_arr).sum() + gammaln(power - d_arr.sum()) - gammaln(power)
    return float(np.exp(log_value))


def beta_moment_exact(d: tuple[int, ...], power: int) -> Fraction:
    """Integer-parameter Beta moment as an exact rational."""
    if any(dj < 1 for dj in d):
        raise ValidationException(
            message="Beta parameters must be positive",
            error_code=ErrorCode.INVALID_CONFIG,
            details={"d": list(d)},
        )
    if sum(d) >= power:
        raise divergent_integral([float(dj) for dj in d], float(power))
    numerator = factorial(power - sum(d) - 1)
    for dj in d:
        numerator *= factorial(dj - 1)
    return Fraction(numerator, factorial(power - 1))


def _term_parameters(term: BetaTerm, exponents: Exponents) -> tuple[list[Fraction], int]:
    # s_j = r_j^2 turns r^(e + 2c) dr into s^((e + 1)/2 + c - 1) ds / 2
    c = term.powers(len(exponents))
    d = [Fraction(e + 1, 2) + cj for e, cj in zip(exponents, c)]
    return d, term.t


# ==================== Tensor-product rules ====================


@lru_cache(maxsize=32)
def mapped_rule(nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes r and weights of the Gauss-Legendre rule mapped to (0, inf) by r = u / (1 - u)."""
    x, w = roots_legendre(nodes)
    u = 0.5 * (x + 1.0)
    r = u / (1.0 - u)
    weights = 0.5 * w / (1.0 - u) ** 2
    r.flags.writeable = False
    weights.flags.writeable = False
    return r, weights


@lru_cache(maxsize=128)
def jacobi_rule(nodes: int, alpha: float, beta: float) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Jacobi nodes t and weights on (0, 1) for the weight t^alpha (1 - t)^beta."""
    x, w = roots_jacobi(nodes, beta, alpha)
    t = 0.5 * (x + 1.0)
    weights = w * 2.0 ** (-(alpha + beta + 1.0))
    t.flags.writeable = False
    weights.flags.writeable = False
    return t, weights


class _TensorRule(NamedTuple):
    """Per-axis nodes and weight columns; `index` maps exponents to one column per axis."""

    nodes: list[np.ndarray]
    columns: list[np.ndarray]
    index: dict[Exponents, tuple[int, ...]]
    scale: float


def _rational_rule(exponent_sets: list[Exponents], nodes: int) -> _TensorRule:
    l = len(exponent_sets[0])  # noqa: E741
    r, weights = mapped_rule(nodes)
    distinct = [sorted({e[j] for e in exponent_sets}) for j in range(l)]
    positions = [{value: i for i, value in enumerate(values)} for values in distinct]
    return _TensorRule(
        nodes=[r] * l,
        columns=[
            weights[:, None] * r[:, None] ** np.asarray(values)[None, :] for values in distinct
        ],
        index={e: tuple(positions[j][e[j]] for j in range(l)) for e in exponent_sets},
        scale=1.0,
    )


def _dirichlet_rule(exponent_sets: list[Exponents], power: float, nodes: int) -> _TensorRule:
    """Stick-breaking rule for exponent tuples whose entries share parity per axis.

    With s_j = r_j^2, x_0 = 1 / (1 + |s|), x_j = s_j x_0 and the stick-breaking
    coordinates t, the weight prod s_j^(d_j - 1) (1 + |s|)^(-D) ds factors into
    prod_j t_j^(d_j - 1) (1 - t_j)^(b_j - 1) dt with b_j = D - (d_1 + ... + d_j).
    Each axis carries the smallest exponents of the batch as its Jacobi weight;
    the integer excess stays in the columns.
    """
    l = len(exponent_sets[0])  # noqa: E741
    d = {e: [Fraction(ej + 1, 2) for ej in e] for e in exponent_sets}
    prefix = {e: list(accumulate(d[e])) for e in exponent_sets}

    axis_nodes, columns, lookups = [], [], []
    low = [min(d[e][j] for e in exponent_sets) for j in range(l)]
    high = [max(prefix[e][j] for e in exponent_sets) for j in range(l)]
    keys = {
        e: tuple((int(d[e][j] - low[j]), int(high[j] - prefix[e][j])) for j in range(l))
        for e in exponent_sets
    }
    for j in range(l):
        t, w = jacobi_rule(nodes, float(low[j]) - 1.0, power - float(high[j]) - 1.0)
        pairs = sorted({keys[e][j] for e in exponent_sets})
        axis_nodes.append(t)
        columns.append(np.stack([w * t**p * (1.0 - t) ** q for p, q in pairs], axis=1))
        lookups.append({pair: i for i, pair in enumerate(pairs)})
    return _TensorRule(
        nodes=axis_nodes,
        columns=columns,
        index={e: tuple(lookups[j][keys[e][j]] for j in range(l)) for e in exponent_sets},
        scale=2.0**-l,
    )


def _stick_breaking_radii(t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Block radii r and x_0 = 1 / (1 + |r|^2) at stick-breaking points t of shape (..., l)."""
    tails = np.flip(np.cumprod(np.flip(1.0 - t, axis=-1), axis=-1), axis=-1)
    return np.sqrt(t / tails), tails[..., 0]


def _contract(
    rule: _TensorRule,
    integrand: Callable[[np.ndarray], np.ndarray],
    max_points: int,
) -> np.ndarray:
    """Contract the integrand grid axis by axis against the rule columns.

    The first axis is streamed in chunks of at most `max_points` grid points.
    """
    first = len(rule.nodes[0])
    rest = int(np.prod([len(x) for x in rule.nodes[1:]], dtype=np.int64))
    chunk = max(1, max_points // max(rest, 1))
    total = np.zeros(tuple(c.shape[1] for c in rule.columns), dtype=complex)
    for start in range(0, first, chunk):
        stop = min(first, start + chunk)
        axes = [rule.nodes[0][start:stop], *rule.nodes[1:]]
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
        contracted = integrand(grid)
        for j, column in enumerate(rule.columns):
            rows = column[start:stop] if j == 0 else column
            contracted = np.tensordot(contracted, rows, axes=(0, 0))
        total += contracted
    return total * rule.scale


def _numeric_moments(
    radial: QuasiRadialSymbol,
    exponent_sets: list[Exponents],
    power: int,
    nodes: int,
    spec: QuadratureSpec,
) -> dict[Exponents, complex]:
    """Tensor-product integrals for many exponent tuples sharing one symbol."""
    if spec.mapping == "rational":
        rule = _rational_rule(exponent_sets, nodes)
        total = _contract(
            rule,
            lambda r: radial.value(r) * (1.0 + np.sum(r * r, axis=-1)) ** (-power),
            spec.max_points,
        )
        return {e: complex(total[rule.index[e]]) for e in exponent_sets}

    # a(r) (1 + |r|^2)^(-D) = [a(r) x_0^g] x_0^(D - g), with a x_0^g bounded
    growth = radial.growth()

    def integrand(t: np.ndarray) -> np.ndarray:
        r, x0 = _stick_breaking_radii(t)
        return radial.value(r) * x0**growth

    results: dict[Exponents, complex] = {}
    by_parity: dict[Exponents, list[Exponents]] = {}
    for e in exponent_sets:
        by_parity.setdefault(tuple(ej % 2 for ej in e), []).append(e)
    for group in by_parity.values():
        rule = _dirichlet_rule(group, power - growth, nodes)
        total = _contract(rule, integrand, spec.max_points)
        results.update({e: complex(total[rule.index[e]]) for e in group})
    return results


# ==================== Service ====================


class QuadratureService:
    """Radial integrals with a closed-form Beta path and a numeric path.

    Handles convergence checks, exact rational evaluation and the
    node-halving error estimate of the numeric rule.
    """

    def __init__(self, spec: QuadratureSpec | None = None):
        """Initialize service with a quadrature spec.

        Args:
            spec: Numeric quadrature parameters (defaults from settings)
        """
        self.spec = spec or QuadratureSpec()

    def check_convergence(self, ig: RadialIntegrand) -> None:
        """Raise DivergentIntegralException when the integrand is not integrable."""
        half_sum = sum(Fraction(e + 1, 2) for e in ig.exponents)
        if ig.radial.is_closed_form:
            for term in ig.radial.beta_terms():
                d, t = _term_parameters(term, ig.exponents)
                if sum(d) >= ig.power + t:
                    raise divergent_integral([float(dj) for dj in d], float(ig.power + t))
        elif half_sum + Fraction(ig.radial.growth()) >= ig.power:
            d = [(e + 1) / 2 for e in ig.exponents]
            raise divergent_integral(d, ig.power - ig.radial.growth())

    def closed_form(self, ig: RadialIntegrand) -> QuadratureResult:
        """Sum of 2^(-l) * Beta moments over the symbol's Beta terms."""
        self.check_convergence(ig)
        scale_l = Fraction(1, 2**ig.l)
        value = 0j
        terms: list[tuple[complex, Fraction | None]] = []
        for term in ig.radial.beta_terms():
            d, t = _term_parameters(term, ig.exponents)
            if all(dj.denominator == 1 for dj in d):
                exact = scale_l * beta_moment_exact(tuple(int(dj) for dj in d), ig.power + t)
                value += term.scale * float(exact)
                terms.append((term.scale, exact))
            else:
                moment = beta_moment([float(dj) for dj in d], ig.power + t)
                value += term.scale * moment * float(scale_l)
                terms.append((term.scale, None))
        return QuadratureResult(value=value, error=0.0, method="closed_form", terms=tuple(terms))

    def numeric(self, ig: RadialIntegrand) -> QuadratureResult:
        """Tensor-product Gauss value with a node-halving error estimate."""
        return self.numeric_many(ig.radial, [ig.exponents], ig.power)[ig.exponents]

    def numeric_many(
        self,
        radial: QuasiRadialSymbol,
        exponent_sets: list[Exponents],
        power: int,
    ) -> dict[Exponents, QuadratureResult]:
        """Numeric path for a batch of exponent tuples sharing one symbol and power."""
        for exponents in exponent_sets:
            self.check_convergence(RadialIntegrand(exponents=exponents, power=power, radial=radial))
        nodes = self.spec.nodes_per_axis
        logger.debug(
            "Numeric quadrature: %d integrals, l=%d, D=%d, nodes=%d, mapping=%s",
            len(exponent_sets),
            len(exponent_sets[0]),
            power,
            nodes,
            self.spec.mapping,
        )
        fine = _numeric_moments(radial, exponent_sets, power, nodes, self.spec)
        coarse = _numeric_moments(radial, exponent_sets, power, nodes // 2, self.spec)

        results: dict[Exponents, QuadratureResult] = {}
        for exponents in exponent_sets:
            value = fine[exponents]
            error = abs(value - coarse[exponents])
            if error > self.spec.tolerance * max(abs(value), np.finfo(float).tiny):
                raise QuadratureConvergenceException(
                    message=(
                        f"relative change {error / max(abs(value), 1e-300):.3e} under node halving"
                    ),
                    details={
                        "exponents": list(exponents),
                        "power": power,
                        "nodes": nodes,
                        "tolerance": self.spec.tolerance,
                    },
                )
            results[exponents] = QuadratureResult(value=value, error=error, method="numeric")
        return results

    def radial_integral(
        self,
        ig: RadialIntegrand,
        method: Literal["auto", "closed_form", "numeric"] = "auto",
    ) -> QuadratureResult:
        """Evaluate one radial integral.

        Args:
            ig: Integrand
            method: `auto` takes the closed form whenever the symbol has one

        Returns:
            Value, error estimate and the path taken
        """
        if method == "numeric" or (method == "auto" and not ig.radial.is_closed_form):
            if ig.radial.is_closed_form:
                logger.debug("Numeric path requested for a closed-form symbol")
            return self.numeric(ig)
        if not ig.radial.is_closed_form:
            raise ValidationException(
                message="closed-form path requested for a tabulated symbol",
                error_code=ErrorCode.INVALID_SYMBOL,
            )
        return self.closed_form(ig)

    def moments(
        self,
        radial: QuasiRadialSymbol,
        exponent_sets: list[Exponents],
        power: int,
        method: Literal["auto", "closed_form", "numeric"] = "auto",
    ) -> dict[Exponents, QuadratureResult]:
        """Batch of radial integrals sharing a symbol and power."""
        unique = list(dict.fromkeys(exponent_sets))
        if not unique:
            return {}
        if method == "numeric" or (method == "auto" and not radial.is_closed_form):
            if method == "auto":
                logger.warning("No closed form for %s; using numeric quadrature", radial.family)
            return self.numeric_many(radial, unique, power)
        return {
            e: self.radial_integral(
                RadialIntegrand(exponents=e, power=power, radial=radial), method
            )
            for e in unique
        }

    def fs_normalization(
        self,
        n: int,
        m: int,
        method: Literal["closed_form", "numeric"] = "numeric",
    ) -> float:
        """Total mass of dnu_m over C^n in polar form.

        int dnu_m = (n+m)! / (pi^n m!) * |S^(2n-1)| * int_0^inf r^(2n-1) (1 + r^2)^(-(n+m+1)) dr
        with |S^(2n-1)| = 2 pi^n / (n-1)!.
        """
        if n < 1 or m < 0:
            raise ValidationException(
                message=f"normalization needs n >= 1 and m >= 0, got n={n}, m={m}",
                error_code=ErrorCode.INVALID_CONFIG,
            )
        ig = RadialIntegrand(exponents=(2 * n - 1,), power=n + m + 1)
        result = self.radial_integral(ig, method=method)
        prefactor = Fraction(2 * factorial(n + m), factorial(m) * factorial(n - 1))
        return float(result.scaled(prefactor).real)
