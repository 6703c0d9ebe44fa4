"""
Geometry Service.

Pointwise checks of the torus-action geometry on V_k: the Kähler form
and metric of the projective chart (Fubini-Study) and of the unit ball
(complex hyperbolic), the vector fields X_j and JX_j, the rational map
pi_k with structure group A_k, and the B_k action on the base.

Conventions: J is multiplication by i, H(v, w) = sum h_kl v_k conj(w_l),
omega(v, w) = -2 Im H(v, w) and g(v, w) = omega(v, Jw) = 2 Re H(v, w).
"""

from __future__ import annotations

import logging
from typing import Callable, Literal

import numpy as np

from toeplab.core.exceptions import (
    ErrorCode,
    UndefinedCoordinatesException,
    ValidationException,
    dimension_mismatch,
)
from toeplab.domain.value_objects.geometry import (
    Ambient,
    ChartPoint,
    GroupElement,
    GroupKind,
    ProjTuple,
    Tangent,
)
from toeplab.domain.value_objects.multiindex import Partition

logger = logging.getLogger(__name__)

Flow = Literal["psi", "beta"]


# ==================== Kähler structure ====================


def hermitian_matrix(at: ChartPoint) -> np.ndarray:
    """Matrix h_kl of the Kähler metric at a chart point."""
    z = at.z
    outer = np.outer(np.conj(z), z)
    squared = float(np.vdot(z, z).real)
    identity = np.eye(at.n)
    if at.ambient == Ambient.BALL:
        return ((1.0 - squared) * identity + outer) / (1.0 - squared) ** 2
    return ((1.0 + squared) * identity - outer) / (1.0 + squared) ** 2


def _pairing(at: ChartPoint, v: Tangent, w: Tangent) -> complex:
    if v.v.size != at.n or w.v.size != at.n:
        raise dimension_mismatch(at.n, v.v.size if v.v.size != at.n else w.v.size, "tangent")
    return complex(v.v @ hermitian_matrix(at) @ np.conj(w.v))


def kahler_form(at: ChartPoint, v: Tangent, w: Tangent) -> float:
    """omega(v, w); antisymmetrized so that omega(v, v) = 0 exactly."""
    return -(_pairing(at, v, w).imag - _pairing(at, w, v).imag)


def metric_g(at: ChartPoint, v: Tangent, w: Tangent) -> float:
    """g(v, w) = omega(v, Jw), symmetrized."""
    return _pairing(at, v, w).real + _pairing(at, w, v).real


# ==================== Vector fields and flows ====================


def field_X(j: int, at: ChartPoint, k: Partition) -> Tangent:  # noqa: N802
    """X_j: i z_(j) on block j (0-based), zero elsewhere."""
    if not 0 <= j < k.l:
        raise dimension_mismatch(k.l, j + 1, "block index")
    v = np.zeros(at.n, dtype=complex)
    window = k.block_slice(j)
    v[window] = 1j * at.z[window]
    return Tangent(v=v)


def field_JX(j: int, at: ChartPoint, k: Partition) -> Tangent:  # noqa: N802
    """JX_j: X_j with the factor i removed, z_(j) on block j; the velocity of beta_j."""
    return Tangent(v=-1j * field_X(j, at, k).v)


def flow(kind: Flow, j: int, parameter: float, z: np.ndarray, k: Partition) -> np.ndarray:
    """psi_j multiplies block j by e^(i t); beta_j multiplies it by e^t."""
    factor = np.exp(1j * parameter) if kind == "psi" else np.exp(parameter)
    moved = np.array(z, dtype=complex)
    moved[k.block_slice(j)] *= factor
    return moved


def beta_velocity(j: int, at: ChartPoint, k: Partition, eps: float = 1e-4) -> Tangent:
    """Central-difference velocity of r -> beta_j(r, z) at r = 1; equals field_JX(j)."""
    plus = np.array(at.z)
    minus = np.array(at.z)
    plus[k.block_slice(j)] *= 1.0 + eps
    minus[k.block_slice(j)] *= 1.0 - eps
    return Tangent(v=(plus - minus) / (2.0 * eps))


def bracket_fd(
    i: int,
    j: int,
    at: ChartPoint,
    k: Partition,
    eps: float = 1e-4,
    kinds: tuple[Flow, Flow] = ("psi", "psi"),
) -> float:
    """||phi_i(eps) phi_j(eps) z - phi_j(eps) phi_i(eps) z|| / eps^2."""
    if not 1e-6 <= eps <= 1e-2:
        raise ValidationException(
            message="finite-difference step must lie in [1e-6, 1e-2]",
            error_code=ErrorCode.INVALID_CONFIG,
            details={"eps": eps},
        )
    first, second = kinds
    one = flow(first, i, eps, flow(second, j, eps, at.z, k), k)
    other = flow(second, j, eps, flow(first, i, eps, at.z, k), k)
    return float(np.linalg.norm(one - other)) / eps**2


# ==================== Lagrangian frame ====================


def lagrangian_deviation(at: ChartPoint, k: Partition) -> float:
    """max_(i <= j) |omega(X_i, X_j)|: the torus orbits are Lagrangian."""
    fields = [field_X(j, at, k) for j in range(k.l)]
    return max(
        abs(kahler_form(at, fields[a], fields[b])) for a in range(k.l) for b in range(a, k.l)
    )


def frame_orthogonality(at: ChartPoint, k: Partition) -> float:
    """max_(i, j) |g(JX_i, X_j)|."""
    return max(
        abs(metric_g(at, field_JX(a, at, k), field_X(b, at, k)))
        for a in range(k.l)
        for b in range(k.l)
    )


# ==================== pi_k and the group actions ====================


def pi_k(at: ChartPoint | np.ndarray, k: Partition) -> ProjTuple:
    """([z_(1)], ..., [z_(l)]) in canonical normalization."""
    z = at.z if isinstance(at, ChartPoint) else np.asarray(at, dtype=complex)
    blocks = k.blocks(z)
    for j, block in enumerate(blocks):
        if not np.any(block != 0):
            raise UndefinedCoordinatesException(
                message=f"block {j + 1} vanishes; pi_k is undefined outside V_k",
                error_code=ErrorCode.INDETERMINACY,
                details={"block": j + 1},
            )
    return ProjTuple(vectors=tuple(np.asarray(block) for block in blocks))


def bk_equivariance(b: GroupElement, at: ChartPoint, k: Partition) -> float:
    """Distance between pi_k(b z) and b pi_k(z); for b in A_k, between pi_k(b z) and pi_k(z)."""
    moved = pi_k(b.act(at.z), k)
    base = pi_k(at, k)
    target = base if b.kind == GroupKind.A_K else b.act_on_tuple(base, k)
    return moved.distance(target)


def ak_decompose(c: np.ndarray, k: Partition) -> tuple[GroupElement, GroupElement]:
    """c = a b with a in A_k (principal k_j-th root of the block product) and b in B_k."""
    c = np.asarray(c, dtype=complex).reshape(-1)
    if c.size != k.n:
        raise dimension_mismatch(k.n, c.size, "group element")
    if np.any(c == 0):
        raise ValidationException(
            message="A_k x B_k decomposition needs nonzero entries",
            error_code=ErrorCode.INVALID_GROUP_ELEMENT,
        )
    roots = [np.prod(block) ** (1.0 / part) for block, part in zip(k.blocks(c), k.parts)]
    a = GroupElement.from_blocks(roots, k)
    b = GroupElement(kind=GroupKind.B_K, data=c / a.data, k=k)
    return a, b


def recomposition_deviation(c: np.ndarray, k: Partition) -> float:
    """max_i |a_i b_i - c_i| / |c_i| for the A_k x B_k decomposition of c."""
    a, b = ak_decompose(c, k)
    c = np.asarray(c, dtype=complex)
    return float(np.max(np.abs(a.data * b.data - c) / np.abs(c)))


def isometry_deviation(t: GroupElement, at: ChartPoint, v: Tangent, w: Tangent) -> float:
    """|g_(t z)(t v, t w) - g_z(v, w)| relative to the bound sqrt(g_z(v, v) g_z(w, w)).

    On the ball the bound grows like (1 - |z|^2)^(-2) near the boundary.
    """
    moved = at.moved(t.act(at.z))
    change = metric_g(moved, Tangent(v=t.act(v.v)), Tangent(v=t.act(w.v))) - metric_g(at, v, w)
    scale = np.sqrt(metric_g(at, v, v) * metric_g(at, w, w))
    return abs(change) / max(scale, np.finfo(float).tiny)


def freeness_gap(a: GroupElement, at: ChartPoint) -> float:
    """||a z - z||; positive on V_k for a != 1 in A_k."""
    return float(np.linalg.norm(a.act(at.z) - at.z))


def fiber_tangency(at: ChartPoint, k: Partition, eps: float = 1e-4) -> float:
    """Largest central-difference derivative of pi_k along the flows of X_j and J X_j.

    Both flows stay inside an A_k orbit, so the derivative is rounding noise.
    """
    worst = 0.0
    for j in range(k.l):
        for kind in ("psi", "beta"):
            plus = pi_k(flow(kind, j, eps, at.z, k), k)  # type: ignore[arg-type]
            minus = pi_k(flow(kind, j, -eps, at.z, k), k)  # type: ignore[arg-type]
            worst = max(worst, plus.distance(minus) / (2.0 * eps))
    return worst


def frame_transport_deviation(t: GroupElement, at: ChartPoint, k: Partition) -> float:
    """For t in the torus: |t_* X_j(z) - X_j(t z)| and the relative change of omega on the frame."""
    moved = at.moved(t.act(at.z))
    worst = 0.0
    for i in range(k.l):
        pushed = Tangent(v=t.act(field_X(i, at, k).v))
        worst = max(worst, float(np.linalg.norm(pushed.v - field_X(i, moved, k).v)))
        for j in range(k.l):
            before = kahler_form(at, field_X(i, at, k), field_X(j, at, k).rotated())
            after = kahler_form(moved, pushed, Tangent(v=t.act(field_X(j, at, k).v)).rotated())
            worst = max(worst, abs(after - before) / max(1.0, abs(before)))
    return worst


# ==================== Sampling ====================


def random_point(k: Partition, ambient: Ambient, rng: np.random.Generator) -> ChartPoint:
    """Random point of V_k (inside the ball for the ball ambient)."""
    z = rng.standard_normal(k.n) + 1j * rng.standard_normal(k.n)
    if ambient == Ambient.BALL:
        z = z / np.linalg.norm(z) * rng.uniform(0.05, 0.95)
    return ChartPoint(z=z, ambient=ambient)


def random_tangent(n: int, rng: np.random.Generator) -> Tangent:
    return Tangent(v=rng.standard_normal(n) + 1j * rng.standard_normal(n))


def random_group_element(kind: GroupKind, k: Partition, rng: np.random.Generator) -> GroupElement:
    """Random element of the torus, A_k, B_k or C*^n."""
    if kind == GroupKind.TORUS:
        return GroupElement(kind=kind, data=np.exp(1j * rng.uniform(0, 2 * np.pi, k.n)))
    if kind == GroupKind.A_K:
        values = np.exp(rng.uniform(-0.7, 0.7, k.l) + 1j * rng.uniform(0, 2 * np.pi, k.l))
        return GroupElement.from_blocks(values, k)
    c = np.exp(rng.uniform(-0.7, 0.7, k.n) + 1j * rng.uniform(0, 2 * np.pi, k.n))
    if kind == GroupKind.B_K:
        return ak_decompose(c, k)[1]
    return GroupElement(kind=GroupKind.GENERAL, data=c)


def torus_in_bk(k: Partition, rng: np.random.Generator) -> GroupElement:
    """Random element of the torus intersected with B_k."""
    angles = rng.uniform(0, 2 * np.pi, k.n)
    for j in range(k.l):
        window = k.block_slice(j)
        angles[window.stop - 1] -= angles[window].sum()
    return GroupElement(kind=GroupKind.TORUS, data=np.exp(1j * angles))


class GeometryService:
    """Sampled geometry suite over V_k in one ambient.

    Each check reports its maximum over the sampled points.
    """

    def __init__(self, eps: float = 1e-4):
        """Initialize service.

        Args:
            eps: Finite-difference step for brackets and tangency
        """
        self.eps = eps

    def _pairs(self, k: Partition) -> list[tuple[int, int]]:
        return [(i, j) for i in range(k.l) for j in range(k.l) if i != j]

    def brackets(self, at: ChartPoint, k: Partition) -> float:
        """Largest bracket over distinct block pairs and every flow combination."""
        kinds: list[tuple[Flow, Flow]] = [("psi", "psi"), ("beta", "beta"), ("psi", "beta")]
        return max(
            (bracket_fd(i, j, at, k, self.eps, pair) for i, j in self._pairs(k) for pair in kinds),
            default=0.0,
        )

    def run_suite(
        self,
        k: Partition,
        ambient: Ambient,
        points: int,
        rng: np.random.Generator,
    ) -> dict[str, float | int | str]:
        """Maxima of every geometry check over `points` random points of V_k."""
        checks: dict[str, Callable[[ChartPoint], float]] = {
            "lagrangian_deviation": lambda at: lagrangian_deviation(at, k),
            "frame_orthogonality": lambda at: frame_orthogonality(at, k),
            "bracket_fd": lambda at: self.brackets(at, k),
            "ak_invariance": lambda at: bk_equivariance(
                random_group_element(GroupKind.A_K, k, rng), at, k
            ),
            "bk_equivariance": lambda at: bk_equivariance(
                random_group_element(GroupKind.B_K, k, rng), at, k
            ),
            "isometry_deviation": lambda at: isometry_deviation(
                random_group_element(GroupKind.TORUS, k, rng),
                at,
                random_tangent(k.n, rng),
                random_tangent(k.n, rng),
            ),
            "ak_recomposition": lambda at: recomposition_deviation(
                random_group_element(GroupKind.GENERAL, k, rng).data, k
            ),
            "fiber_tangency": lambda at: fiber_tangency(at, k, self.eps),
            "frame_transport": lambda at: frame_transport_deviation(torus_in_bk(k, rng), at, k),
        }
        maxima = dict.fromkeys(checks, 0.0)
        min_freeness = np.inf
        for _ in range(points):
            at = random_point(k, ambient, rng)
            for name, check in checks.items():
                maxima[name] = max(maxima[name], check(at))
            a = random_group_element(GroupKind.A_K, k, rng)
            if not a.is_identity():
                min_freeness = min(min_freeness, freeness_gap(a, at))
        logger.info("Geometry suite on k=%s (%s): %d points", k, ambient.value, points)
        report: dict[str, float | int | str] = {"ambient": ambient.value, "points": points}
        report.update(maxima)
        report["min_freeness_gap"] = float(min_freeness)
        return report
