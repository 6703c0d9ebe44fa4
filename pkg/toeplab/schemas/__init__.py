"""Experiment config and report schemas."""

from toeplab.schemas.experiment import (
    CHECK_ORDER,
    SCHEMA_VERSION,
    ExperimentConfig,
    SymbolLiteral,
    Tolerances,
)
from toeplab.schemas.reports import (
    CheckReport,
    CommuteRecord,
    RunReport,
    SpectrumRow,
    Table,
    VerifyRecord,
)

__all__ = [
    "CHECK_ORDER",
    "SCHEMA_VERSION",
    "CheckReport",
    "CommuteRecord",
    "ExperimentConfig",
    "RunReport",
    "SpectrumRow",
    "SymbolLiteral",
    "Table",
    "Tolerances",
    "VerifyRecord",
]
