"""
Report Schemas.

Pydantic models of the JSON reports and CSV tables written by a run.
Reports carry no timestamps so that identical configs give identical bytes.
"""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel, ConfigDict, Field

# ==================== Records ====================


class SpectrumRow(BaseModel):
    """One spectral coefficient: gamma (quasi-radial) or gamma-tilde (shift)."""

    m: int
    symbol: str
    alpha: str
    s: list[int] = Field(description="Block degrees of alpha")
    value_re: float
    value_im: float
    method: str

    def csv_row(self) -> list[Any]:
        values = [repr(self.value_re), repr(self.value_im)]
        return [self.m, self.symbol, self.alpha, *self.s, *values, self.method]


class CommuteRecord(BaseModel):
    """Commutator norm of one symbol pair with its prediction.

    `predicted` is None when a symbol falls outside the balanced hypotheses;
    such pairs are reported but do not decide the outcome.
    """

    model_config = ConfigDict(populate_by_name=True)

    sym1: str
    sym2: str
    predicted: bool | None
    measured_norm: float
    norms_by_m: dict[str, float]
    passed: bool | None = Field(alias="pass")


class VerifyRecord(BaseModel):
    """Oracle-versus-spectral comparison on one space."""

    space: str
    symbol: str
    method: str
    max_abs_diff: float
    mean_abs_diff: float
    stderr: float
    seed: int
    samples: int
    max_sigma: float | None = None
    passed: bool


# ==================== Reports ====================


class Table(BaseModel):
    """CSV table: header row plus data rows."""

    header: list[str]
    rows: list[list[Any]] = Field(default_factory=list)


class CheckReport(BaseModel):
    """Outcome of one selected check."""

    check: str
    passed: bool
    summary: dict[str, Any] = Field(default_factory=dict)
    records: list[dict[str, Any]] = Field(default_factory=list)
    tables: dict[str, Table] = Field(default_factory=dict, exclude=True)


class RunReport(BaseModel):
    """Top-level report of one run; embeds the resolved config and the tool version."""

    tool: str
    version: str
    schema_version: str
    config: dict[str, Any]
    rng: dict[str, Any]
    checks: list[CheckReport]
    passed: bool

    @property
    def failed_checks(self) -> list[str]:
        return [report.check for report in self.checks if not report.passed]
