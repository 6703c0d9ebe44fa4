"""Operator matrix entity: dense complex matrix in the orthonormal monomial basis."""

from __future__ import annotations

from typing import Any

import numpy as np
from scipy.linalg import svdvals

from toeplab.core.exceptions import dimension_mismatch
from toeplab.domain.entities.bergman_space import BergmanSpace


class OperatorMatrix:
    """Linear operator on a Bergman space.

    Column alpha holds the coordinates of T e_alpha, i.e.
    entries[beta, alpha] = <T e_alpha, e_beta>_m.
    """

    def __init__(self, space: BergmanSpace, entries: np.ndarray, label: str = "") -> None:
        entries = np.array(entries, dtype=complex)
        if entries.shape != (space.dim, space.dim):
            raise dimension_mismatch(space.dim, entries.shape[0], "operator matrix")
        if not np.all(np.isfinite(entries)):
            raise ValueError("operator matrix entries must be finite")
        entries.flags.writeable = False
        self._space = space
        self._entries = entries
        self._label = label

    @classmethod
    def identity(cls, space: BergmanSpace) -> OperatorMatrix:
        return cls(space, np.eye(space.dim), label="identity")

    @property
    def space(self) -> BergmanSpace:
        return self._space

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def label(self) -> str:
        return self._label

    def _check_same_space(self, other: OperatorMatrix) -> None:
        if self._space != other._space:
            raise dimension_mismatch(self._space.dim, other._space.dim, "operator space")

    def __matmul__(self, other: OperatorMatrix) -> OperatorMatrix:
        self._check_same_space(other)
        return OperatorMatrix(
            self._space, self._entries @ other._entries, label=f"({self._label})({other._label})"
        )

    def __sub__(self, other: OperatorMatrix) -> OperatorMatrix:
        self._check_same_space(other)
        return OperatorMatrix(
            self._space, self._entries - other._entries, label=f"{self._label}-{other._label}"
        )

    def commutator(self, other: OperatorMatrix) -> OperatorMatrix:
        """AB - BA."""
        self._check_same_space(other)
        product = self._entries @ other._entries - other._entries @ self._entries
        return OperatorMatrix(self._space, product, label=f"[{self._label},{other._label}]")

    def spectral_norm(self) -> float:
        """Largest singular value."""
        if self._space.dim == 0:
            return 0.0
        return float(svdvals(self._entries)[0])

    def frobenius_norm(self) -> float:
        return float(np.linalg.norm(self._entries))

    def max_abs_diff(self, other: OperatorMatrix) -> float:
        self._check_same_space(other)
        return float(np.max(np.abs(self._entries - other._entries)))

    def is_diagonal(self, tol: float = 0.0) -> bool:
        off_diagonal = self._entries - np.diag(np.diag(self._entries))
        return bool(np.max(np.abs(off_diagonal), initial=0.0) <= tol)

    def nonzero_entries(self, tol: float = 0.0) -> list[tuple[int, int, complex]]:
        """(row, col, value) for entries above tol in row-major order."""
        rows, cols = np.nonzero(np.abs(self._entries) > tol)
        return [(int(r), int(c), complex(self._entries[r, c])) for r, c in zip(rows, cols)]

    def to_csv_rows(self, tol: float = 0.0) -> list[list[Any]]:
        """Rows (row, col, re, im) of the nonzero entries, with header."""
        rows: list[list[Any]] = [["row", "col", "re", "im"]]
        for r, c, value in self.nonzero_entries(tol):
            rows.append([r, c, repr(value.real), repr(value.imag)])
        return rows

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready representation with basis labels."""
        return {
            "label": self._label,
            "n": self._space.n,
            "m": self._space.m,
            "dim": self._space.dim,
            "basis": [list(alpha.entries) for alpha in self._space.basis.elements],
            "re": self._entries.real.tolist(),
            "im": self._entries.imag.tolist(),
        }

    def __repr__(self) -> str:
        return f"OperatorMatrix(label={self._label!r}, dim={self._space.dim})"
