"""
Symbol value objects.

Quasi-radial symbols a(r_1, ..., r_l) depend only on the block radii
r_j = |z_(j)|. Quasi-homogeneous symbols multiply them by xi^p conj(xi)^q
with xi_(j) = z_(j) / r_j and p . q = 0.

Closed-form families reduce to sums of "Beta terms"
scale * prod_j r_j^(2 c_j) * (1 + r^2)^(-t), which the quadrature layer
integrates exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Annotated, Callable, Literal, NamedTuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from toeplab.domain.value_objects.multiindex import MultiIndex, Partition


class RadialFamily(str, Enum):
    """Families of quasi-radial symbols."""

    CONSTANT = "constant"
    RADIAL_MONOMIAL = "radial_monomial"
    INVERSE_POWER = "inverse_power"
    BOUNDED_RATIONAL = "bounded_rational"
    COMBINATION = "combination"
    TABULATED = "tabulated"


class BetaTerm(NamedTuple):
    """scale * prod_j r_j^(2 c_j) * (1 + r^2)^(-t); an empty c means all zeros."""

    scale: complex
    c: tuple[int, ...]
    t: int

    def powers(self, l: int) -> tuple[int, ...]:  # noqa: E741
        return self.c if self.c else (0,) * l


def _radius_squared(r: np.ndarray) -> np.ndarray:
    return np.sum(r * r, axis=-1)


class _ClosedForm(BaseModel):
    """Shared behaviour of the closed-form families."""

    model_config = ConfigDict(frozen=True)

    def beta_terms(self) -> list[BetaTerm]:
        raise NotImplementedError

    @property
    def is_closed_form(self) -> bool:
        return True

    def block_count(self) -> int | None:
        """Number of blocks fixed by the symbol, if any."""
        lengths = {len(term.c) for term in self.beta_terms() if term.c}
        if len(lengths) > 1:
            raise ValueError("radial monomial exponents disagree in length")
        return lengths.pop() if lengths else None

    def growth(self) -> float:
        """Largest power of r^2 by which the symbol can grow at infinity."""
        return float(max(sum(term.c) - term.t for term in self.beta_terms()))

    def value(self, r: np.ndarray) -> np.ndarray:
        """Evaluate on block radii of shape (..., l)."""
        r = np.asarray(r, dtype=float)
        l = r.shape[-1]  # noqa: E741
        total = np.zeros(r.shape[:-1], dtype=complex)
        one_plus = 1.0 + _radius_squared(r)
        for term in self.beta_terms():
            powers = np.asarray(term.powers(l))
            total = total + term.scale * np.prod(r ** (2 * powers), axis=-1) * one_plus ** (-term.t)
        return total


class ConstantSymbol(_ClosedForm):
    """a(r) = c."""

    family: Literal["constant"] = "constant"
    c: complex = 1.0

    def beta_terms(self) -> list[BetaTerm]:
        return [BetaTerm(complex(self.c), (), 0)]


class RadialMonomialSymbol(_ClosedForm):
    """a(r) = coefficient * prod_j r_j^(2 c_j)."""

    family: Literal["radial_monomial"] = "radial_monomial"
    c: tuple[int, ...] = Field(min_length=1)
    coefficient: complex = 1.0

    @field_validator("c")
    @classmethod
    def validate_c(cls, v: tuple[int, ...]) -> tuple[int, ...]:
        if any(power < 0 for power in v):
            raise ValueError("radial monomial powers must be nonnegative")
        return v

    def beta_terms(self) -> list[BetaTerm]:
        return [BetaTerm(complex(self.coefficient), self.c, 0)]


class InversePowerSymbol(_ClosedForm):
    """a(r) = coefficient * (1 + r^2)^(-t)."""

    family: Literal["inverse_power"] = "inverse_power"
    t: int = Field(ge=0)
    coefficient: complex = 1.0

    def beta_terms(self) -> list[BetaTerm]:
        return [BetaTerm(complex(self.coefficient), (), self.t)]


class BoundedRationalSymbol(_ClosedForm):
    """a(r) = coefficient * prod_j r_j^(2 c_j) * (1 + r^2)^(-t)."""

    family: Literal["bounded_rational"] = "bounded_rational"
    c: tuple[int, ...] = Field(min_length=1)
    t: int = Field(ge=0)
    coefficient: complex = 1.0

    @field_validator("c")
    @classmethod
    def validate_c(cls, v: tuple[int, ...]) -> tuple[int, ...]:
        if any(power < 0 for power in v):
            raise ValueError("radial monomial powers must be nonnegative")
        return v

    def beta_terms(self) -> list[BetaTerm]:
        return [BetaTerm(complex(self.coefficient), self.c, self.t)]


ClosedFormSymbol = Annotated[
    Union[ConstantSymbol, RadialMonomialSymbol, InversePowerSymbol, BoundedRationalSymbol],
    Field(discriminator="family"),
]


class CombinationSymbol(_ClosedForm):
    """Linear combination of closed-form symbols, e.g. r^2 / (1 + r^2) = sum_j r_j^2 / (1 + r^2)."""

    family: Literal["combination"] = "combination"
    terms: tuple[ClosedFormSymbol, ...] = Field(min_length=1)

    def beta_terms(self) -> list[BetaTerm]:
        return [term for symbol in self.terms for term in symbol.beta_terms()]


class TabulatedSymbol(BaseModel):
    """Arbitrary radial function given by a vectorized callable over (..., l) radii.

    `growth` bounds |a(r)| <= C (1 + r^2)^growth and decides convergence.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    family: Literal["tabulated"] = "tabulated"
    name: str
    growth_bound: float = 0.0
    handle: Callable[[np.ndarray], np.ndarray] = Field(exclude=True, repr=False)

    @property
    def is_closed_form(self) -> bool:
        return False

    def block_count(self) -> int | None:
        return None

    def growth(self) -> float:
        return self.growth_bound

    def value(self, r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return np.asarray(self.handle(r), dtype=complex)

    def beta_terms(self) -> list[BetaTerm]:
        raise TypeError(f"tabulated symbol {self.name!r} has no closed form")


QuasiRadialSymbol = Annotated[
    Union[
        ConstantSymbol,
        RadialMonomialSymbol,
        InversePowerSymbol,
        BoundedRationalSymbol,
        CombinationSymbol,
        TabulatedSymbol,
    ],
    Field(discriminator="family"),
]


def _gaussian(r: np.ndarray) -> np.ndarray:
    return np.exp(-_radius_squared(r))


def _logistic(r: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(_radius_squared(r) - 1.0))


def _cosine(r: np.ndarray) -> np.ndarray:
    return np.cos(_radius_squared(r)) / (1.0 + _radius_squared(r))


TABULATED_FUNCTIONS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "gaussian": _gaussian,
    "logistic": _logistic,
    "cosine": _cosine,
}


def tabulated(name: str) -> TabulatedSymbol:
    """Look up a named smooth radial function."""
    if name not in TABULATED_FUNCTIONS:
        raise ValueError(
            f"unknown tabulated function {name!r}; "
            f"must be one of: {', '.join(sorted(TABULATED_FUNCTIONS))}"
        )
    return TabulatedSymbol(name=name, growth_bound=0.0, handle=TABULATED_FUNCTIONS[name])


class QuasiHomogeneousSymbol(BaseModel):
    """a(r) xi^p conj(xi)^q with p . q = 0."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    radial: QuasiRadialSymbol = Field(default_factory=ConstantSymbol)
    p: MultiIndex
    q: MultiIndex

    @model_validator(mode="after")
    def validate_pair(self) -> QuasiHomogeneousSymbol:
        """Validate equal lengths and orthogonality of p and q."""
        if self.p.n != self.q.n:
            raise ValueError("p and q must have the same length")
        if self.p.dot(self.q) != 0:
            raise ValueError("p and q must be orthogonal (p . q = 0)")
        return self

    @classmethod
    def quasi_radial(cls, radial: QuasiRadialSymbol, n: int) -> QuasiHomogeneousSymbol:
        """Wrap a quasi-radial symbol with p = q = 0."""
        zero = MultiIndex.zeros(n)
        return cls(radial=radial, p=zero, q=zero)

    @classmethod
    def monomial(
        cls,
        p: tuple[int, ...],
        q: tuple[int, ...],
        radial: QuasiRadialSymbol | None = None,
    ) -> QuasiHomogeneousSymbol:
        return cls(
            radial=radial if radial is not None else ConstantSymbol(),
            p=MultiIndex(entries=p),
            q=MultiIndex(entries=q),
        )

    @property
    def n(self) -> int:
        return self.p.n

    @property
    def is_quasi_radial(self) -> bool:
        return self.p.is_zero() and self.q.is_zero()

    def label(self) -> str:
        """Short human-readable name used in reports."""
        radial = self.radial
        if isinstance(radial, TabulatedSymbol):
            head = f"tabulated:{radial.name}"
        elif isinstance(radial, ConstantSymbol):
            head = f"const:{radial.c}"
        else:
            head = radial.family
        if self.is_quasi_radial:
            return head
        return f"{head}*xi^{self.p}*conj(xi)^{self.q}"


class SymbolClassRkh(BaseModel):
    """The class R_k(h): p supported on the first h_j coordinates of each block,
    q on the remaining ones, with |p_(j)| = |q_(j)|.

    Blocks with k_j = 1 carry h_j = None and no (p, q) support.
    """

    model_config = ConfigDict(frozen=True)

    k: Partition
    h: tuple[int | None, ...]

    @model_validator(mode="after")
    def validate_bounds(self) -> SymbolClassRkh:
        """Validate 1 <= h_j <= k_j - 1 on blocks of size >= 2."""
        if len(self.h) != self.k.l:
            raise ValueError(f"h must have {self.k.l} entries, got {len(self.h)}")
        for j, (k_j, h_j) in enumerate(zip(self.k.parts, self.h)):
            if k_j == 1:
                if h_j is not None:
                    raise ValueError(f"block {j + 1} has size 1; h_{j + 1} must be absent")
            elif h_j is None or not 1 <= h_j <= k_j - 1:
                raise ValueError(f"h_{j + 1} must satisfy 1 <= h <= {k_j - 1}")
        return self


@dataclass(frozen=True, eq=False)
class TorusElement:
    """Element t of the torus T^n acting by t.z = (t_1 z_1, ..., t_n z_n)."""

    values: np.ndarray
    tol: float = field(default=1e-12)

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=complex).reshape(-1)
        if values.size == 0:
            raise ValueError("torus element needs at least one coordinate")
        if np.max(np.abs(np.abs(values) - 1.0)) > self.tol:
            raise ValueError("torus element coordinates must have unit modulus")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_angles(cls, angles: np.ndarray | list[float]) -> TorusElement:
        return cls(values=np.exp(1j * np.asarray(angles, dtype=float)))

    @classmethod
    def identity(cls, n: int) -> TorusElement:
        return cls(values=np.ones(n, dtype=complex))

    @property
    def n(self) -> int:
        return int(self.values.size)

    def act(self, z: np.ndarray) -> np.ndarray:
        """t.z on points of shape (..., n)."""
        return np.asarray(z) * self.values
