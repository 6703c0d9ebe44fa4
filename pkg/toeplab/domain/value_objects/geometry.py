"""Geometry value objects: chart points, tangent vectors, projective tuples
and elements of the groups acting on V_k."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from toeplab.domain.value_objects.multiindex import Partition

GROUP_TOL = 1e-12


class Ambient(str, Enum):
    """Kähler manifold carrying the chart coordinates.

    Attributes:
        PROJECTIVE: C^n canonically embedded in Pn(C), Fubini-Study metric
        BALL: unit ball B^n, complex hyperbolic metric
    """

    PROJECTIVE = "projective"
    BALL = "ball"


@dataclass(frozen=True, eq=False)
class ChartPoint:
    """Point z of C^n (projective chart) or of the unit ball."""

    z: np.ndarray
    ambient: Ambient = Ambient.PROJECTIVE

    def __post_init__(self) -> None:
        z = np.asarray(self.z, dtype=complex).reshape(-1)
        if not np.all(np.isfinite(z)):
            raise ValueError("chart point coordinates must be finite")
        if self.ambient == Ambient.BALL and float(np.vdot(z, z).real) >= 1.0:
            raise ValueError("ball points must satisfy |z| < 1")
        object.__setattr__(self, "z", z)

    @property
    def n(self) -> int:
        return int(self.z.size)

    def in_vk(self, k: Partition) -> bool:
        """True when every block z_(j) is nonzero."""
        return all(np.any(block != 0) for block in k.blocks(self.z))

    def moved(self, z: np.ndarray) -> ChartPoint:
        return ChartPoint(z=z, ambient=self.ambient)


@dataclass(frozen=True, eq=False)
class Tangent:
    """Tangent vector at a chart point, as n complex components (real tangent space of C^n)."""

    v: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.v, dtype=complex).reshape(-1)
        if not np.all(np.isfinite(v)):
            raise ValueError("tangent components must be finite")
        object.__setattr__(self, "v", v)

    def rotated(self) -> Tangent:
        """J v, the complex structure acting as multiplication by i."""
        return Tangent(v=1j * self.v)

    def norm(self) -> float:
        return float(np.linalg.norm(self.v))


def canonical_representative(vector: np.ndarray, tol: float = 1e-300) -> np.ndarray:
    """Unit representative of [vector] whose first nonzero coordinate is real positive."""
    vector = np.asarray(vector, dtype=complex)
    norm = np.linalg.norm(vector)
    if norm <= tol:
        raise ValueError("projective point of the zero vector is undefined")
    unit = vector / norm
    nonzero = np.flatnonzero(np.abs(unit) > 1e-8)
    lead = unit[nonzero[0]]
    return unit * (abs(lead) / lead)


@dataclass(frozen=True, eq=False)
class ProjTuple:
    """Point ([w_1], ..., [w_l]) of the product of projective spaces P^(k_j - 1)(C)."""

    vectors: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "vectors", tuple(canonical_representative(w) for w in self.vectors)
        )

    @property
    def l(self) -> int:  # noqa: E743
        return len(self.vectors)

    def distance(self, other: ProjTuple) -> float:
        """Largest distance between canonical representatives, block by block."""
        if self.l != other.l:
            raise ValueError("projective tuples have different block counts")
        return max(float(np.linalg.norm(a - b)) for a, b in zip(self.vectors, other.vectors))


class GroupKind(str, Enum):
    """Subgroups of C*^n acting diagonally on C^n."""

    TORUS = "torus"
    A_K = "A_k"
    B_K = "B_k"
    GENERAL = "general"


@dataclass(frozen=True, eq=False)
class GroupElement:
    """Diagonal element of C*^n with kind constraints.

    torus: unit modulus entries; A_k: constant on every block;
    B_k: the product over every block equals 1.
    """

    kind: GroupKind
    data: np.ndarray
    k: Partition | None = None

    def __post_init__(self) -> None:
        data = np.asarray(self.data, dtype=complex).reshape(-1)
        object.__setattr__(self, "data", data)
        if np.any(data == 0):
            raise ValueError("group elements must have nonzero entries")
        if self.kind == GroupKind.TORUS:
            if np.max(np.abs(np.abs(data) - 1.0)) > GROUP_TOL:
                raise ValueError("torus elements must have unit modulus entries")
            return
        if self.kind == GroupKind.GENERAL:
            return
        if self.k is None or self.k.n != data.size:
            raise ValueError(f"{self.kind.value} elements need a partition of n={data.size}")
        for block in self.k.blocks(data):
            spread = np.max(np.abs(block - block[0]))
            if self.kind == GroupKind.A_K and spread > GROUP_TOL * abs(block[0]):
                raise ValueError("A_k elements must be constant on every block")
            if self.kind == GroupKind.B_K and abs(np.prod(block) - 1.0) > GROUP_TOL:
                raise ValueError("B_k elements must have block products equal to 1")

    @classmethod
    def identity(
        cls, n: int, kind: GroupKind = GroupKind.TORUS, k: Partition | None = None
    ) -> GroupElement:
        return cls(kind=kind, data=np.ones(n, dtype=complex), k=k)

    @classmethod
    def from_blocks(cls, values: list[complex] | np.ndarray, k: Partition) -> GroupElement:
        """A_k element with value values[j] on block j."""
        data = np.concatenate(
            [np.full(part, value, dtype=complex) for part, value in zip(k.parts, values)]
        )
        return cls(kind=GroupKind.A_K, data=data, k=k)

    @property
    def n(self) -> int:
        return int(self.data.size)

    def act(self, z: np.ndarray) -> np.ndarray:
        return np.asarray(z) * self.data

    def act_on_tuple(self, point: ProjTuple, k: Partition) -> ProjTuple:
        """Blockwise action on the product of projective spaces."""
        return ProjTuple(vectors=tuple(b * w for b, w in zip(k.blocks(self.data), point.vectors)))

    def is_identity(self, tol: float = GROUP_TOL) -> bool:
        return bool(np.max(np.abs(self.data - 1.0)) <= tol)
