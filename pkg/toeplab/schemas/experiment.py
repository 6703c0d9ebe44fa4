"""
Experiment Schemas for config-driven runs.

Defines the versioned Pydantic models of an experiment config: symbol
literals, tolerances, per-check options and the top-level
ExperimentConfig. A config is validated against every precondition of
the checks it selects before any computation starts.
"""

from __future__ import annotations

from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, field_validator, model_validator

from toeplab.core.config import settings
from toeplab.core.rng import UINT64_MAX
from toeplab.domain.value_objects.geometry import Ambient
from toeplab.domain.value_objects.multiindex import MultiIndex, Partition
from toeplab.domain.value_objects.symbols import (
    QuasiHomogeneousSymbol,
    QuasiRadialSymbol,
    RadialFamily,
    SymbolClassRkh,
    tabulated,
)
from toeplab.services.oracle_service import McConfig
from toeplab.services.quadrature_service import QuadratureSpec

SCHEMA_VERSION = "1.0"

CheckName = Literal[
    "spectrum",
    "assemble",
    "commute",
    "oracle",
    "geometry",
    "rkh-algebra",
    "normalization",
]

# fixed execution and report order
CHECK_ORDER: tuple[str, ...] = (
    "normalization",
    "spectrum",
    "assemble",
    "commute",
    "oracle",
    "rkh-algebra",
    "geometry",
)

_RADIAL = TypeAdapter(QuasiRadialSymbol)


def _radial_from_literal(family: str, params: dict[str, Any]) -> QuasiRadialSymbol:
    if family == RadialFamily.TABULATED.value:
        if "name" not in params:
            raise ValueError("tabulated symbols need a 'name' parameter")
        return tabulated(params["name"])
    if family == RadialFamily.COMBINATION.value:
        terms = params.get("terms")
        if not terms:
            raise ValueError("combination symbols need a non-empty 'terms' list")
        flat = [{"family": term["family"], **term.get("params", {})} for term in terms]
        return _RADIAL.validate_python({"family": family, "terms": flat})
    return _RADIAL.validate_python({"family": family, **params})


# ==================== Symbol Literals ====================


class SymbolLiteral(BaseModel):
    """JSON form of a quasi-homogeneous symbol a(r) xi^p conj(xi)^q.

    Examples:
        {
            "family": "bounded_rational",
            "params": {"c": [1, 0], "t": 1},
            "p": [1, 0, 0, 0],
            "q": [0, 1, 0, 0]
        }
    """

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={
            "example": {
                "family": "inverse_power",
                "params": {"t": 1},
                "p": [1, 0],
                "q": [0, 1],
            }
        },
    )

    family: RadialFamily = Field(description="Radial factor family")
    params: dict[str, Any] = Field(
        default_factory=dict,
        description="Family parameters (c, t, coefficient, name or terms)",
    )
    p: list[int] | None = Field(
        default=None, description="Holomorphic exponents (omit for quasi-radial)"
    )
    q: list[int] | None = Field(
        default=None,
        description="Anti-holomorphic exponents (omit for quasi-radial)",
    )

    @model_validator(mode="after")
    def validate_literal(self) -> SymbolLiteral:
        """Validate the radial parameters and the (p, q) pair."""
        self.radial()
        if (self.p is None) != (self.q is None):
            raise ValueError("p and q must be given together")
        if self.p is not None and self.q is not None:
            if len(self.p) != len(self.q):
                raise ValueError("p and q must have the same length")
            if any(pi and qi for pi, qi in zip(self.p, self.q)):
                raise ValueError("p and q must be orthogonal (p . q = 0)")
        return self

    def radial(self) -> QuasiRadialSymbol:
        """Build the radial factor."""
        return _radial_from_literal(self.family.value, self.params)

    def to_symbol(self, n: int) -> QuasiHomogeneousSymbol:
        """Build the symbol on C^n."""
        if self.p is None or self.q is None:
            return QuasiHomogeneousSymbol.quasi_radial(self.radial(), n)
        return QuasiHomogeneousSymbol(
            radial=self.radial(),
            p=MultiIndex(entries=tuple(self.p)),
            q=MultiIndex(entries=tuple(self.q)),
        )


class ExpectedValue(BaseModel):
    """Analytic target for one spectral coefficient.

    Examples:
        {"symbol": 0, "m": 1, "alpha": [0, 1], "value": 0.3333333333333333}
    """

    symbol: int = Field(ge=0, description="Index into the symbol list")
    m: int = Field(ge=0, description="Bergman weight")
    alpha: list[int] = Field(min_length=1, description="Column multi-index")
    value: complex = Field(description="Expected gamma or gamma-tilde")


class EntryPair(BaseModel):
    """Single matrix entry <sym e_alpha, e_beta>."""

    alpha: list[int] = Field(min_length=1)
    beta: list[int] = Field(min_length=1)


# ==================== Options ====================


class Tolerances(BaseModel):
    """Pass thresholds of every check."""

    closed_form: float = Field(default_factory=lambda: settings.TOL_CLOSED_FORM, gt=0)
    numeric: float = Field(default_factory=lambda: settings.TOL_NUMERIC, gt=0)
    target: float = Field(default=1e-10, gt=0, description="Analytic targets and ratio identities")
    commute: float = Field(default_factory=lambda: settings.TOL_COMMUTE, gt=0)
    separation_floor: float = Field(default_factory=lambda: settings.SEPARATION_FLOOR, gt=0)
    oracle: float = Field(default_factory=lambda: settings.TOL_ORACLE, gt=0)
    mc_sigma: float = Field(
        default=3.0, gt=0, description="Monte-Carlo threshold in standard errors"
    )
    geometry: float = Field(default_factory=lambda: settings.TOL_GEOMETRY, gt=0)
    bracket: float = Field(default_factory=lambda: settings.TOL_BRACKET, gt=0)
    recomposition: float = Field(default=1e-13, gt=0)

    @model_validator(mode="after")
    def validate_separation(self) -> Tolerances:
        """The separation floor must lie above the commutation tolerance."""
        if self.separation_floor <= self.commute:
            raise ValueError("separation_floor must exceed the commute tolerance")
        return self

    def scaled(self, factor: float) -> Tolerances:
        """Multiply every upper threshold by `factor`.

        The separation floor only moves when it must stay above the commute tolerance.
        """
        values = {name: value * factor for name, value in self.model_dump().items()}
        values["separation_floor"] = max(self.separation_floor, values["commute"] * 10)
        return Tolerances(**values)


class SpectrumOptions(BaseModel):
    """Options of the spectrum table."""

    both_paths: bool = Field(
        default=True, description="Also evaluate closed-form symbols numerically"
    )
    expected: list[ExpectedValue] = Field(default_factory=list)


class CommuteOptions(BaseModel):
    """Options of the commutator check."""

    sweep: bool = Field(default=False, description="Exhaustive sweep over small (p, q, u, v)")
    sweep_max_entry: int = Field(default=1, ge=1, le=2)
    min_unbalanced_separated: int = Field(
        default=0,
        ge=0,
        description="Unbalanced pairs that must measure above the separation floor",
    )


class OracleOptions(BaseModel):
    """Options of the oracle comparison."""

    methods: list[Literal["separated", "montecarlo"]] = Field(
        default_factory=lambda: ["separated"],
        min_length=1,
    )
    entries: list[EntryPair] = Field(
        default_factory=list,
        description="Compare only these entries (all entries when empty)",
    )
    reproducing: list[list[int]] = Field(
        default_factory=list,
        description="Multi-indices for reproducing_check",
    )


class RkhOptions(BaseModel):
    """Options of the R_k(h) algebra check."""

    generators: int = Field(default=10, ge=2)
    max_degree: int = Field(default=1, ge=1, le=3)
    torus_samples: int = Field(default=50, ge=0)
    torus_points: int = Field(default=100, ge=1)


class GeometryOptions(BaseModel):
    """Options of the geometry suite."""

    points: int = Field(default=1000, ge=1)
    ambients: list[Ambient] = Field(
        default_factory=lambda: [Ambient.PROJECTIVE, Ambient.BALL], min_length=1
    )
    eps: float = Field(default=1e-4, ge=1e-6, le=1e-2)


class NormalizationOptions(BaseModel):
    """Options of the probability normalization check."""

    n_values: list[int] = Field(default_factory=lambda: [1, 2, 3], min_length=1)
    m_values: list[int] = Field(default_factory=lambda: [0, 1, 2, 5], min_length=1)
    montecarlo: bool = True

    @field_validator("n_values")
    @classmethod
    def validate_dimensions(cls, v: list[int]) -> list[int]:
        if any(value < 1 for value in v):
            raise ValueError("dimensions must be positive")
        return v

    @field_validator("m_values")
    @classmethod
    def validate_weights(cls, v: list[int]) -> list[int]:
        if any(value < 0 for value in v):
            raise ValueError("weights must be nonnegative")
        return v


# ==================== Experiment ====================


class ExperimentConfig(BaseModel):
    """Versioned experiment config.

    Examples:
        {
            "schema_version": "1.0",
            "name": "pinpoint",
            "n": 2,
            "m": [1],
            "partition": [2],
            "symbols": [{"family": "constant", "p": [1, 0], "q": [0, 1]}],
            "checks": ["spectrum", "oracle"]
        }
    """

    model_config = ConfigDict(
        extra="forbid",
        json_schema_extra={
            "example": {
                "schema_version": SCHEMA_VERSION,
                "name": "pinpoint",
                "n": 2,
                "m": [1],
                "partition": [2],
                "symbols": [{"family": "constant", "p": [1, 0], "q": [0, 1]}],
                "checks": ["spectrum", "oracle"],
            }
        },
    )

    schema_version: Literal["1.0"] = SCHEMA_VERSION
    name: str = Field(default="experiment", min_length=1, max_length=100)
    n: int = Field(ge=1, le=8, description="Complex dimension")
    m: list[int] = Field(min_length=1, description="Bergman weights (an int or a list)")
    partition: list[int] | None = Field(default=None, description="Block sizes k; defaults to (n)")
    h: list[int | None] | None = Field(
        default=None, description="Bounds of R_k(h); null on blocks of size 1"
    )
    symbols: list[SymbolLiteral] = Field(default_factory=list)
    checks: list[CheckName] = Field(min_length=1)
    tolerances: Tolerances = Field(default_factory=Tolerances)
    quadrature: QuadratureSpec = Field(default_factory=QuadratureSpec)
    method: Literal["auto", "closed_form", "numeric"] = "auto"
    mc: McConfig = Field(default_factory=McConfig)
    seed: int | None = Field(default=None, ge=0, le=UINT64_MAX, description="Overrides mc.seed")
    output_dir: str = Field(default_factory=lambda: settings.OUTPUT_DIR, exclude=True)
    spectrum: SpectrumOptions = Field(default_factory=SpectrumOptions)
    commute: CommuteOptions = Field(default_factory=CommuteOptions)
    oracle: OracleOptions = Field(default_factory=OracleOptions)
    rkh: RkhOptions = Field(default_factory=RkhOptions)
    geometry: GeometryOptions = Field(default_factory=GeometryOptions)
    normalization: NormalizationOptions = Field(default_factory=NormalizationOptions)

    @field_validator("m", mode="before")
    @classmethod
    def validate_m(cls, v: Any) -> Any:
        """Accept a single weight."""
        return [v] if isinstance(v, int) else v

    @field_validator("m")
    @classmethod
    def validate_weights(cls, v: list[int]) -> list[int]:
        if any(m < 0 for m in v):
            raise ValueError("weights must be nonnegative")
        return sorted(set(v))

    @field_validator("checks")
    @classmethod
    def validate_checks(cls, v: list[str]) -> list[str]:
        """Deduplicate and put checks in execution order."""
        return [name for name in CHECK_ORDER if name in v]

    @model_validator(mode="after")
    def validate_preconditions(self) -> ExperimentConfig:
        """Validate the partition, R_k(h) bounds and every symbol against the selected checks."""
        k = self.k
        if self.seed is not None:
            self.mc = self.mc.model_copy(update={"seed": self.seed})

        if "rkh-algebra" in self.checks:
            if self.h is None:
                raise ValueError("rkh-algebra needs the bounds h")
            self.rkh_class()

        symbol_checks = {"spectrum", "assemble", "commute", "oracle"} & set(self.checks)
        sweep_only = self.commute.sweep and "commute" in self.checks
        if symbol_checks and not self.symbols and not sweep_only:
            raise ValueError(f"checks {sorted(symbol_checks)} need at least one symbol")
        for index, literal in enumerate(self.symbols):
            _validate_symbol(literal, index, self.n, k)
            if self.method == "closed_form" and not literal.radial().is_closed_form:
                raise ValueError(
                    f"symbols[{index}]: closed_form method needs a closed-form radial factor"
                )

        for expected in self.spectrum.expected:
            if expected.symbol >= len(self.symbols):
                raise ValueError(f"expected value refers to missing symbol {expected.symbol}")
            if len(expected.alpha) != self.n or sum(expected.alpha) > expected.m:
                raise ValueError(
                    f"expected alpha {expected.alpha} is not in J_{self.n}({expected.m})"
                )
            if expected.m not in self.m:
                raise ValueError(f"expected value uses m={expected.m}, which is not in m={self.m}")

        top = max(self.m)
        for pair in self.oracle.entries:
            for index in (pair.alpha, pair.beta):
                if len(index) != self.n or any(a < 0 for a in index) or sum(index) > top:
                    raise ValueError(f"oracle entry {index} is not in J_{self.n}({top})")
        for alpha in self.oracle.reproducing:
            if len(alpha) != self.n or any(a < 0 for a in alpha) or sum(alpha) > top:
                raise ValueError(f"reproducing index {alpha} is not in J_{self.n}({top})")

        return self

    @property
    def k(self) -> Partition:
        """Resolved partition."""
        parts = self.partition or [self.n]
        if sum(parts) != self.n:
            raise ValueError(f"partition {parts} does not sum to n={self.n}")
        return Partition(parts=tuple(parts))

    def rkh_class(self) -> SymbolClassRkh:
        if self.h is None:
            raise ValueError("bounds h are not configured")
        return SymbolClassRkh(k=self.k, h=tuple(self.h))

    def resolved_symbols(self) -> list[QuasiHomogeneousSymbol]:
        return [literal.to_symbol(self.n) for literal in self.symbols]


def _validate_symbol(literal: SymbolLiteral, index: int, n: int, k: Partition) -> None:
    """Length, block count and convergence window of one symbol on every weight."""
    where = f"symbols[{index}]"
    if literal.p is not None and len(literal.p) != n:
        raise ValueError(f"{where}: p and q must have length n={n}")
    if literal.p is not None and literal.q is not None:
        if any(value < 0 for value in literal.p + literal.q):
            raise ValueError(f"{where}: exponents must be nonnegative")
    radial = literal.radial()
    blocks = radial.block_count()
    if blocks is not None and blocks != k.l:
        raise ValueError(f"{where}: radial factor uses {blocks} blocks, partition has {k.l}")
    # integrable on the top-degree monomials of every A^2_m iff growth < 1
    if radial.growth() >= 1:
        raise ValueError(
            f"{where}: radial factor grows like (1 + r^2)^{radial.growth():g}; "
            "the radial integrals diverge on the top-degree monomials"
        )
