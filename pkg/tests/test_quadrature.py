"""Tests for Beta moments, radial integrals and the probability normalization."""
from fractions import Fraction
from math import factorial

import numpy as np
import pytest
from scipy.special import betaln

from toeplab.core.exceptions import (
    DivergentIntegralException,
    ErrorCode,
    QuadratureConvergenceException,
    ValidationException,
)
from toeplab.domain.value_objects.symbols import (
    BoundedRationalSymbol,
    CombinationSymbol,
    ConstantSymbol,
    InversePowerSymbol,
    RadialMonomialSymbol,
    tabulated,
)
from toeplab.services.quadrature_service import (
    QuadratureService,
    QuadratureSpec,
    RadialIntegrand,
    beta_moment,
    beta_moment_exact,
    jacobi_rule,
    mapped_rule,
)


class TestBetaMoment:
    """Tests for the Dirichlet-type Beta moment."""

    @pytest.mark.parametrize(
        "d,power,expected",
        [((1,), 2, Fraction(1)), ((3, 1), 5, Fraction(1, 12)), ((1, 1), 3, Fraction(1, 2))],
    )
    def test_values(self, d, power, expected):
        """Test floating and exact moments against hand values."""
        assert beta_moment(list(d), power) == pytest.approx(float(expected), rel=1e-14)
        assert beta_moment_exact(d, power) == expected

    def test_half_integer_parameters(self):
        """Test Gamma(1/2)^2 Gamma(1) / Gamma(2) = pi."""
        assert beta_moment([0.5, 0.5], 2) == pytest.approx(3.141592653589793, rel=1e-14)

    def test_divergent(self):
        """Test that sum(d) >= D is reported as a divergent integral."""
        with pytest.raises(DivergentIntegralException) as exc_info:
            beta_moment([2, 1], 3)

        assert exc_info.value.error_code == ErrorCode.DIVERGENT_INTEGRAL
        assert exc_info.value.exit_code == 3

    def test_nonpositive_parameter(self):
        with pytest.raises(ValidationException):
            beta_moment([0, 1], 3)


class TestRadialIntegral:
    """Tests for the closed-form and numeric radial integral paths."""

    def test_constant_one_block(self, quadrature):
        """Test int r (1 + r^2)^(-4) dr = 1/6."""
        ig = RadialIntegrand(exponents=(1,), power=4)

        result = quadrature.radial_integral(ig, "closed_form")

        assert result.value == pytest.approx(1 / 6, rel=1e-15)
        assert result.is_exact
        assert quadrature.radial_integral(ig, "numeric").value == pytest.approx(1 / 6, rel=1e-12)

    def test_radial_monomial_two_blocks(self, quadrature):
        """Test a = r_1^2 with e = (3, 1), D = 5 gives 1/48."""
        ig = RadialIntegrand(exponents=(3, 1), power=5, radial=RadialMonomialSymbol(c=(1, 0)))

        closed = quadrature.radial_integral(ig, "closed_form")
        numeric = quadrature.radial_integral(ig, "numeric")

        assert closed.terms[0][1] == Fraction(1, 48)
        assert numeric.value == pytest.approx(1 / 48, rel=1e-10)

    @pytest.mark.parametrize(
        "parts,m,s",
        [
            ((1,), 3, (2,)),
            ((2,), 2, (1,)),
            ((1, 1), 3, (1, 2)),
            ((1, 2), 4, (2, 1)),
            ((1, 1, 2), 2, (0, 1, 1)),
        ],
    )
    def test_constant_identity_forced_by_t1(self, quadrature, parts, m, s):
        """Test the integral of 1 equals (m - |s|)! prod (k_j - 1 + s_j)! / (2^l (n + m)!)."""
        n = sum(parts)
        exponents = tuple(2 * sj + 2 * kj - 1 for sj, kj in zip(s, parts))
        ig = RadialIntegrand(exponents=exponents, power=n + m + 1)
        expected = Fraction(factorial(m - sum(s)), 2 ** len(parts) * factorial(n + m))
        for kj, sj in zip(parts, s):
            expected *= factorial(kj - 1 + sj)

        closed = quadrature.closed_form(ig)

        assert sum(exact for _, exact in closed.terms) == expected
        assert quadrature.numeric(ig).value == pytest.approx(float(expected), rel=1e-12)

    @pytest.mark.parametrize(
        "radial",
        [
            InversePowerSymbol(t=1),
            InversePowerSymbol(t=3, coefficient=0.5),
            BoundedRationalSymbol(c=(2, 1), t=3),
            CombinationSymbol(terms=(ConstantSymbol(c=2.0), RadialMonomialSymbol(c=(0, 1)))),
        ],
    )
    def test_paths_agree(self, quadrature, radial):
        """Test closed-form and numeric paths agree to 1e-9 relative."""
        ig = RadialIntegrand(exponents=(5, 3), power=9, radial=radial)

        closed = quadrature.radial_integral(ig, "closed_form").value
        numeric = quadrature.radial_integral(ig, "numeric").value

        assert abs(closed - numeric) <= 1e-9 * abs(closed)

    def test_divergent_radial_monomial(self, quadrature):
        """Test r^2 against D just large enough for the constant."""
        ig = RadialIntegrand(exponents=(1,), power=2, radial=RadialMonomialSymbol(c=(1,)))

        with pytest.raises(DivergentIntegralException):
            quadrature.radial_integral(ig)

    def test_tabulated_needs_numeric(self, quadrature):
        """Test that tabulated symbols refuse the closed-form path and default to numeric."""
        ig = RadialIntegrand(exponents=(1,), power=3, radial=tabulated("gaussian"))

        with pytest.raises(ValidationException) as exc_info:
            quadrature.radial_integral(ig, "closed_form")

        assert exc_info.value.error_code == ErrorCode.INVALID_SYMBOL
        assert quadrature.radial_integral(ig).method == "numeric"

    def test_block_count_mismatch(self):
        with pytest.raises(ValueError):
            RadialIntegrand(exponents=(1,), power=3, radial=RadialMonomialSymbol(c=(1, 0)))

    def test_halving_tolerance(self):
        """Test that an unreachable halving tolerance raises."""
        coarse = QuadratureService(QuadratureSpec(nodes_per_axis=8, tolerance=1e-15))
        ig = RadialIntegrand(exponents=(1,), power=3, radial=tabulated("cosine"))

        with pytest.raises(QuadratureConvergenceException):
            coarse.numeric(ig)

    def test_moments_batch_matches_single(self, quadrature):
        """Test that a batched call returns the same values as single calls."""
        radial = BoundedRationalSymbol(c=(1, 0), t=1)
        exponents = [(1, 1), (3, 1), (1, 3), (3, 3)]

        batch = quadrature.moments(radial, exponents, 6, "numeric")

        for e in exponents:
            integrand = RadialIntegrand(exponents=e, power=6, radial=radial)
            single = quadrature.radial_integral(integrand, "numeric")
            assert batch[e].value == pytest.approx(single.value, rel=1e-13)

    def test_mapped_rule_is_read_only(self):
        nodes, weights = mapped_rule(16)

        assert nodes.shape == weights.shape == (16,)
        with pytest.raises(ValueError):
            nodes[0] = 1.0


class TestTensorRules:
    """Tests for the Gauss-Jacobi and Gauss-Legendre tensor rules."""

    @pytest.mark.parametrize("alpha,beta", [(0.0, 0.0), (-0.5, 2.0), (1.0, 3.5)])
    def test_jacobi_rule_integrates_beta_weight(self, alpha, beta):
        """Test that the weights sum to B(alpha + 1, beta + 1) and nodes lie in (0, 1)."""
        t, weights = jacobi_rule(12, alpha, beta)

        assert np.all((t > 0) & (t < 1))
        assert weights.sum() == pytest.approx(np.exp(betaln(alpha + 1, beta + 1)), rel=1e-13)
        with pytest.raises(ValueError):
            weights[0] = 0.0

    @pytest.mark.parametrize(
        "exponents,power",
        [((1, 1, 1, 1), 5), ((1, 1, 3), 5), ((7,), 5), ((1, 1, 1, 1), 11), ((3, 3, 5), 11)],
    )
    def test_identity_integrands_converge(self, exponents, power):
        """Test the integrands behind T_1 = I reach 1e-12 under node halving at 48 nodes."""
        service = QuadratureService(QuadratureSpec(nodes_per_axis=48, tolerance=1e-12))
        ig = RadialIntegrand(exponents=exponents, power=power)

        numeric = service.numeric(ig)
        closed = service.closed_form(ig)

        assert numeric.error <= 1e-12 * abs(closed.value)
        assert numeric.value == pytest.approx(closed.value, rel=1e-12)

    def test_mixed_parity_batch(self, quadrature):
        """Test a batch mixing odd and even exponents against single evaluations."""
        radial = InversePowerSymbol(t=1)
        exponents = [(1, 2), (2, 1), (1, 1), (4, 3)]

        batch = quadrature.moments(radial, exponents, 7, "numeric")

        for e in exponents:
            closed = quadrature.closed_form(RadialIntegrand(exponents=e, power=7, radial=radial))
            assert batch[e].value == pytest.approx(closed.value, rel=1e-10)

    def test_growing_symbol(self, quadrature):
        """Test that r_1^4 is absorbed into the weight and matches the closed form."""
        ig = RadialIntegrand(exponents=(1, 1), power=6, radial=RadialMonomialSymbol(c=(2, 0)))

        numeric = quadrature.radial_integral(ig, "numeric")

        assert numeric.value == pytest.approx(quadrature.closed_form(ig).value, rel=1e-12)

    def test_rational_mapping(self):
        """Test the u / (1 - u) Gauss-Legendre mapping on a one-axis integral."""
        service = QuadratureService(QuadratureSpec(mapping="rational"))
        ig = RadialIntegrand(exponents=(1,), power=4)

        assert service.numeric(ig).value == pytest.approx(1 / 6, rel=1e-9)

    def test_unknown_mapping(self):
        with pytest.raises(ValueError):
            QuadratureSpec(mapping="logarithmic")


class TestNormalization:
    """Tests for int dnu_m = 1."""

    @pytest.mark.parametrize("n,m", [(1, 0), (1, 5), (2, 3), (3, 0), (3, 5)])
    def test_closed_form(self, quadrature, n, m):
        assert quadrature.fs_normalization(n, m, "closed_form") == pytest.approx(1.0, abs=1e-14)

    @pytest.mark.parametrize("n,m", [(1, 0), (2, 3), (3, 5)])
    def test_numeric(self, quadrature, n, m):
        assert quadrature.fs_normalization(n, m, "numeric") == pytest.approx(1.0, abs=1e-10)

    def test_invalid(self, quadrature):
        with pytest.raises(ValidationException):
            quadrature.fs_normalization(0, 1)
