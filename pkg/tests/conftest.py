"""Test configuration and fixtures."""
import json
from pathlib import Path
from typing import Any, Callable

import numpy as np
import pytest

from toeplab.domain.entities.bergman_space import BergmanSpace
from toeplab.domain.value_objects.multiindex import MultiIndex, Partition
from toeplab.domain.value_objects.symbols import (
    BoundedRationalSymbol,
    ConstantSymbol,
    InversePowerSymbol,
    QuasiHomogeneousSymbol,
)
from toeplab.services.oracle_service import McConfig, OracleService
from toeplab.services.quadrature_service import QuadratureService
from toeplab.services.toeplitz_service import ToeplitzService

# Small Monte-Carlo budget for unit tests; acceptance configs use 2e6
TEST_SAMPLES = 200_000
TEST_SEED = 20240917


@pytest.fixture
def quadrature() -> QuadratureService:
    """Quadrature service with default settings."""
    return QuadratureService()


@pytest.fixture
def toeplitz(quadrature: QuadratureService) -> ToeplitzService:
    """Toeplitz service on the automatic path."""
    return ToeplitzService(quadrature)


@pytest.fixture
def oracle(quadrature: QuadratureService) -> OracleService:
    """Direct oracle sharing the quadrature service."""
    return OracleService(quadrature)


@pytest.fixture
def mc_config() -> McConfig:
    """Seeded Monte-Carlo configuration."""
    return McConfig(
        method="montecarlo", sample_count=TEST_SAMPLES, batch_size=50_000, seed=TEST_SEED
    )


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator for sampled checks."""
    return np.random.default_rng(TEST_SEED)


@pytest.fixture
def pinpoint_space() -> BergmanSpace:
    """A^2_1 on C^2, the gamma-tilde pinpoint space."""
    return BergmanSpace.of(2, 1)


@pytest.fixture
def pinpoint_symbol() -> QuasiHomogeneousSymbol:
    """xi_1 conj(xi_2) on k = (2)."""
    return QuasiHomogeneousSymbol.monomial((1, 0), (0, 1))


@pytest.fixture
def k22() -> Partition:
    return Partition.of(2, 2)


@pytest.fixture
def inverse_power() -> InversePowerSymbol:
    """(1 + r^2)^(-1)."""
    return InversePowerSymbol(t=1)


@pytest.fixture
def complement() -> BoundedRationalSymbol:
    """r^2 / (1 + r^2) on a single block."""
    return BoundedRationalSymbol(c=(1,), t=1)


@pytest.fixture
def constant() -> ConstantSymbol:
    return ConstantSymbol()


@pytest.fixture
def write_config(tmp_path: Path) -> Callable[..., Path]:
    """Write an experiment config to a temporary file."""

    def _write(payload: dict[str, Any], name: str = "config.json") -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        return path

    return _write


@pytest.fixture
def pinpoint_config() -> dict[str, Any]:
    """Minimal config exercising spectrum, assemble and oracle on the pinpoint space."""
    return {
        "schema_version": "1.0",
        "name": "pinpoint",
        "n": 2,
        "m": 1,
        "partition": [2],
        "symbols": [{"family": "constant", "p": [1, 0], "q": [0, 1]}],
        "checks": ["spectrum", "assemble", "oracle"],
        "spectrum": {"expected": [{"symbol": 0, "m": 1, "alpha": [0, 1], "value": 1 / 3}]},
        "seed": 7,
    }
