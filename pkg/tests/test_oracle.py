"""Tests for the direct oracle: separated reduction and Monte-Carlo."""
import numpy as np
import pytest
from pydantic import ValidationError

from toeplab.core.exceptions import ValidationException
from toeplab.core.rng import DeterministicRNG
from toeplab.domain.entities.bergman_space import BergmanSpace
from toeplab.domain.value_objects.multiindex import MultiIndex, Partition
from toeplab.domain.value_objects.symbols import (
    BoundedRationalSymbol,
    ConstantSymbol,
    InversePowerSymbol,
    QuasiHomogeneousSymbol,
)
from toeplab.services.oracle_service import McConfig, OracleService, sphere_moment


class TestMcConfig:
    """Tests for oracle configuration."""

    def test_batches(self):
        cfg = McConfig(sample_count=25_000, batch_size=10_000)

        assert cfg.batches == [10_000, 10_000, 5_000]
        assert sum(cfg.batches) == cfg.sample_count

    def test_minimum_samples(self):
        with pytest.raises(ValidationError):
            McConfig(sample_count=9_999)

    def test_seed_range(self):
        with pytest.raises(ValidationError):
            McConfig(seed=-1)


class TestSeparated:
    """Tests for the block-polar reduction."""

    def test_sphere_moment(self):
        assert sphere_moment((0,)) == pytest.approx(2.0, rel=1e-15)
        assert sphere_moment((0, 0)) == pytest.approx(2.0, rel=1e-15)
        assert sphere_moment((1, 1)) == pytest.approx(1 / 3, rel=1e-14)

    def test_constant_examples(self, oracle):
        one = QuasiHomogeneousSymbol.quasi_radial(ConstantSymbol(), 1)
        space, k = BergmanSpace.of(1, 2), Partition.of(1)

        zero = oracle.inner_product_direct(one, MultiIndex.of(0), MultiIndex.of(0), space, k)
        first = oracle.inner_product_direct(one, MultiIndex.of(1), MultiIndex.of(1), space, k)

        assert zero.value == pytest.approx(1.0, abs=1e-12)
        assert first.value == pytest.approx(0.5, abs=1e-12)
        assert first.stderr == 0.0
        assert first.method == "separated"

    def test_pinpoint(self, oracle, pinpoint_space, pinpoint_symbol):
        result = oracle.inner_product_direct(
            pinpoint_symbol,
            MultiIndex.of(0, 1),
            MultiIndex.of(1, 0),
            pinpoint_space,
            Partition.of(2),
        )

        assert result.value == pytest.approx(1 / 3, abs=1e-12)

    def test_selection_rule(self, oracle, pinpoint_space, pinpoint_symbol):
        """Test entries off the shift alpha + p - q vanish exactly."""
        result = oracle.inner_product_direct(
            pinpoint_symbol,
            MultiIndex.of(0, 1),
            MultiIndex.of(0, 1),
            pinpoint_space,
            Partition.of(2),
        )

        assert result.value == 0

    def test_degree_overflow(self, oracle, pinpoint_space, pinpoint_symbol):
        with pytest.raises(ValidationException):
            oracle.inner_product_direct(
                pinpoint_symbol,
                MultiIndex.of(1, 1),
                MultiIndex.of(1, 0),
                pinpoint_space,
                Partition.of(2),
            )

    @pytest.mark.parametrize(
        "parts,p,q,m,radial",
        [
            ((2,), (1, 0), (0, 1), 1, ConstantSymbol()),
            ((1, 2), (0, 0, 0), (0, 0, 0), 2, InversePowerSymbol(t=1)),
            ((1, 2), (0, 1, 0), (0, 0, 1), 2, BoundedRationalSymbol(c=(1, 0), t=1)),
            ((1, 1), (2, 0), (0, 1), 3, InversePowerSymbol(t=2)),
        ],
    )
    def test_matches_spectral(self, oracle, toeplitz, parts, p, q, m, radial):
        k = Partition(parts=parts)
        space = BergmanSpace.of(k.n, m)
        sym = QuasiHomogeneousSymbol.monomial(p, q, radial=radial)

        spectral = toeplitz.assemble(sym, k, space)
        direct = oracle.assemble_direct(sym, k, space)

        assert spectral.max_abs_diff(direct) <= 1e-6

    def test_compare_report(self, oracle, toeplitz, pinpoint_space, pinpoint_symbol):
        spectral = toeplitz.assemble(pinpoint_symbol, Partition.of(2), pinpoint_space)

        report = oracle.compare(spectral, pinpoint_symbol, Partition.of(2))

        assert report["method"] == "separated"
        assert report["max_abs_diff"] <= 1e-6
        assert "max_sigma" not in report

    @pytest.mark.parametrize("alpha", [(0, 0), (1, 0), (1, 1), (0, 2)])
    def test_reproducing(self, oracle, alpha):
        deviation = oracle.reproducing_check(MultiIndex.of(*alpha), BergmanSpace.of(2, 2))

        assert deviation.deviation <= 1e-12
        assert deviation.stderr == 0.0


@pytest.mark.slow
class TestMonteCarlo:
    """Tests for the Fubini-Study sampler."""

    def test_sampler(self):
        z, ratio = OracleService.sample_fubini_study(3, 1_000, DeterministicRNG(5).stream(0))

        assert z.shape == (1_000, 3)
        assert np.all((ratio > 0) & (ratio <= 1))
        assert np.allclose(ratio, 1.0 / (1.0 + np.sum(np.abs(z) ** 2, axis=1)))

    @pytest.mark.parametrize("n,m", [(1, 0), (2, 3), (3, 1)])
    def test_normalization(self, oracle, mc_config, n, m):
        result = oracle.normalization_mc(n, m, mc_config)

        assert abs(result.value - 1.0) <= 4 * result.stderr
        assert result.samples == mc_config.sample_count

    def test_pinpoint(self, oracle, mc_config, pinpoint_space, pinpoint_symbol):
        result = oracle.inner_product_direct(
            pinpoint_symbol,
            MultiIndex.of(0, 1),
            MultiIndex.of(1, 0),
            pinpoint_space,
            Partition.of(2),
            mc_config,
        )

        assert result.method == "montecarlo"
        assert result.stderr > 0
        assert abs(result.value - 1 / 3) <= 4 * result.stderr

    def test_same_seed_same_value(self, oracle, mc_config):
        first = oracle.normalization_mc(2, 2, mc_config)
        second = oracle.normalization_mc(2, 2, mc_config)

        assert first == second

    def test_seed_changes_value(self, oracle, mc_config):
        other = mc_config.model_copy(update={"seed": mc_config.seed + 1})

        first = oracle.normalization_mc(2, 2, mc_config).value


        assert first != oracle.normalization_mc(2, 2, other).value

    def test_reproducing_within_errors(self, oracle, mc_config):
        deviation = oracle.reproducing_check(MultiIndex.of(1, 0), BergmanSpace.of(2, 1), mc_config)

        assert deviation.stderr > 0
        assert deviation.deviation <= 5 * deviation.stderr
