"""Tests for symbol value objects and the symbol service."""
import numpy as np
import pytest
from pydantic import ValidationError

from toeplab.core.exceptions import UndefinedCoordinatesException, ValidationException
from toeplab.domain.value_objects.multiindex import MultiIndex, Partition
from toeplab.domain.value_objects.symbols import (
    BoundedRationalSymbol,
    CombinationSymbol,
    ConstantSymbol,
    InversePowerSymbol,
    QuasiHomogeneousSymbol,
    RadialMonomialSymbol,
    SymbolClassRkh,
    TorusElement,
    tabulated,
)
from toeplab.services.symbol_service import (
    SymbolService,
    balanced_monomials,
    evaluate,
    evaluate_many,
    in_class_Rkh,
    invariance_deviation,
    is_balanced,
    is_in_Tk,
    rkh_generators,
    validate_orthogonal,
    witness_symbol,
)


class TestRadialSymbols:
    """Tests for the quasi-radial families."""

    def test_values(self):
        """Test evaluation on block radii of shape (..., l)."""
        r = np.array([[1.0], [0.0]])

        assert np.allclose(InversePowerSymbol(t=1).value(r), [0.5, 1.0])
        assert np.allclose(BoundedRationalSymbol(c=(1,), t=1).value(r), [0.5, 0.0])
        assert np.allclose(ConstantSymbol(c=2.0).value(r), [2.0, 2.0])

    def test_complement_sums_to_one(self):
        """Test (1 + r^2)^(-1) + sum_j r_j^2 / (1 + r^2) = 1 on two blocks."""
        total = CombinationSymbol(
            terms=(
                InversePowerSymbol(t=1),
                BoundedRationalSymbol(c=(1, 0), t=1),
                BoundedRationalSymbol(c=(0, 1), t=1),
            )
        )
        r = np.random.default_rng(3).uniform(0, 5, size=(50, 2))

        assert np.allclose(total.value(r), 1.0, atol=1e-14)

    def test_growth(self):
        assert RadialMonomialSymbol(c=(1, 2)).growth() == 3.0
        assert BoundedRationalSymbol(c=(1, 1), t=2).growth() == 0.0
        assert InversePowerSymbol(t=2).growth() == -2.0

    def test_block_count(self):
        assert ConstantSymbol().block_count() is None
        assert BoundedRationalSymbol(c=(1, 0, 0), t=1).block_count() == 3
        with pytest.raises(ValueError):
            terms = (RadialMonomialSymbol(c=(1,)), RadialMonomialSymbol(c=(1, 0)))
            CombinationSymbol(terms=terms).block_count()

    def test_tabulated(self):
        """Test the named tabulated functions."""
        gaussian = tabulated("gaussian")

        assert not gaussian.is_closed_form
        assert gaussian.value(np.array([0.0, 0.0])) == pytest.approx(1.0)
        with pytest.raises(TypeError):
            gaussian.beta_terms()
        with pytest.raises(ValueError):
            tabulated("unknown")

    def test_negative_power_rejected(self):
        with pytest.raises(ValidationError):
            RadialMonomialSymbol(c=(-1,))


class TestQuasiHomogeneousSymbol:
    """Tests for a(r) xi^p conj(xi)^q."""

    def test_orthogonality_required(self):
        with pytest.raises(ValidationError):
            QuasiHomogeneousSymbol.monomial((1, 1), (1, 0))

    def test_quasi_radial(self):
        sym = QuasiHomogeneousSymbol.quasi_radial(InversePowerSymbol(t=1), 3)

        assert sym.is_quasi_radial
        assert sym.n == 3
        assert sym.label() == "inverse_power"

    def test_label(self):
        sym = QuasiHomogeneousSymbol.monomial((1, 0), (0, 1))

        assert sym.label() == "const:(1+0j)*xi^(1,0)*conj(xi)^(0,1)"


class TestClassification:
    """Tests for orthogonality, balance and R_k(h) membership."""

    @pytest.mark.parametrize(
        "p,q,expected",
        [((1, 0), (0, 1), True), ((1, 1), (1, 0), False), ((0, 0), (3, 2), True)],
    )
    def test_validate_orthogonal(self, p, q, expected):
        assert validate_orthogonal(MultiIndex(entries=p), MultiIndex(entries=q)) is expected

    def test_is_balanced(self, k22):
        assert is_balanced(MultiIndex.of(1, 0, 1, 0), MultiIndex.of(0, 1, 0, 1), k22)
        assert not is_balanced(MultiIndex.of(1, 0, 0, 0), MultiIndex.of(0, 0, 1, 0), k22)

    @pytest.mark.parametrize(
        "p,q,expected",
        [((1, 0), (0, 1), True), ((0, 1), (1, 0), False), ((2, 0), (0, 1), False)],
    )
    def test_in_class_rkh(self, p, q, expected):
        """Test membership in R_(2)(1)."""
        cls = SymbolClassRkh(k=Partition.of(2), h=(1,))

        assert in_class_Rkh(QuasiHomogeneousSymbol.monomial(p, q), cls) is expected

    def test_size_one_blocks_carry_nothing(self):
        cls = SymbolClassRkh(k=Partition.of(1, 2), h=(None, 1))

        assert in_class_Rkh(QuasiHomogeneousSymbol.monomial((0, 1, 0), (0, 0, 1)), cls)
        assert not in_class_Rkh(QuasiHomogeneousSymbol.monomial((1, 0, 0), (0, 0, 0)), cls)

    @pytest.mark.parametrize("h", [(0,), (2,), (None,), (1, 1)])
    def test_invalid_bounds(self, h):
        with pytest.raises(ValidationError):
            SymbolClassRkh(k=Partition.of(2), h=h)


class TestEvaluate:
    """Tests for pointwise evaluation."""

    def test_constant(self):
        sym = QuasiHomogeneousSymbol.quasi_radial(ConstantSymbol(), 2)

        assert evaluate(sym, [0.3 + 1j, -2.0], Partition.of(2)) == 1.0

    def test_xi1_conj_xi2(self):
        """Test xi_1 conj(xi_2) at z = (1, i) on k = (2)."""
        sym = QuasiHomogeneousSymbol.monomial((1, 0), (0, 1))

        assert evaluate(sym, [1.0, 1j], Partition.of(2)) == pytest.approx(-0.5j, abs=1e-15)

    def test_vanishing_block(self):
        sym = QuasiHomogeneousSymbol.monomial((1, 0), (0, 0))

        with pytest.raises(UndefinedCoordinatesException):
            evaluate(sym, [0.0, 1.0], Partition.of(1, 1))

    def test_untouched_block_may_vanish(self):
        """Test that a block unused by (p, q) may be zero."""
        sym = QuasiHomogeneousSymbol.monomial((0, 1, 0), (0, 0, 1))

        value = evaluate(sym, [0.0, 1.0, 1j], Partition.of(1, 2))

        assert value == pytest.approx(-0.5j, abs=1e-15)

    def test_many_points(self, rng):
        sym = QuasiHomogeneousSymbol.monomial((1, 0), (0, 1), radial=InversePowerSymbol(t=1))
        z = rng.standard_normal((10, 2)) + 1j * rng.standard_normal((10, 2))

        values = evaluate_many(sym, z, Partition.of(2))

        assert values.shape == (10,)
        assert np.all(np.abs(values) <= 1.0)


class TestTorus:
    """Tests for T_k membership and invariance."""

    def test_is_in_tk(self):
        theta, phi = 0.4, 1.7
        inside = TorusElement.from_angles([theta, theta, phi])

        assert is_in_Tk(inside, Partition.of(2, 1))
        assert not is_in_Tk(TorusElement(values=np.array([1.0, -1.0])), Partition.of(2))
        assert is_in_Tk(TorusElement(values=np.full(4, 1j)), Partition.of(2, 2))

    def test_non_unit_rejected(self):
        with pytest.raises(ValueError):
            TorusElement(values=np.array([1.0, 2.0]))

    def test_rkh_generators_invariant(self, k22, rng):
        """Test every generator of R_k(h) is invariant under random t in T_k."""
        cls = SymbolClassRkh(k=k22, h=(1, 1))
        generators = rkh_generators(cls, 20, max_degree=2)
        service = SymbolService()
        points = service.sample_vk(k22, 100, rng)

        for _ in range(10):
            t = service.random_tk(k22, rng)
            assert service.max_deviation(generators, t, k22, points) <= 1e-12

    def test_identity_deviation(self, k22, rng):
        sym = QuasiHomogeneousSymbol.monomial((1, 0, 0, 0), (0, 0, 1, 0))
        points = SymbolService.sample_vk(k22, 20, rng)

        assert invariance_deviation(sym, TorusElement.identity(4), k22, points) == 0.0

    def test_drawn_points_follow_seed(self, k22, rng):
        """Test a point count is drawn from V_k reproducibly under the given seed."""
        cls = SymbolClassRkh(k=k22, h=(1, 1))
        t = SymbolService.random_outside_tk(k22, rng)
        witness, gap = SymbolService().witness_for(t, cls)

        first = invariance_deviation(witness, t, k22, 50, seed=7)

        assert first == invariance_deviation(witness, t, k22, 50, seed=7)
        assert first != invariance_deviation(witness, t, k22, 50, seed=8)
        assert first >= 0.1 * gap
        inside = SymbolService.random_tk(k22, rng)
        assert invariance_deviation(witness, inside, k22, 50, seed=7) <= 1e-12

    def test_witness_detects_outside(self, k22, rng):
        """Test the witness symbol deviates by at least a tenth of the ratio gap."""
        cls = SymbolClassRkh(k=k22, h=(1, 1))
        service = SymbolService()
        points = service.sample_vk(k22, 100, rng)

        for _ in range(10):
            t = service.random_outside_tk(k22, rng)
            witness, gap = service.witness_for(t, cls)
            assert not is_in_Tk(t, k22)
            assert in_class_Rkh(witness, cls)
            assert invariance_deviation(witness, t, k22, points) >= 0.1 * gap

    def test_witness_bounds(self, k22):
        cls = SymbolClassRkh(k=k22, h=(1, 1))

        with pytest.raises(ValidationException):
            witness_symbol(cls, 0, 1, 1)


class TestGenerators:
    """Tests for the symbol batteries."""

    def test_balanced_monomials(self, k22):
        battery = balanced_monomials(k22)

        assert len(battery) == 8
        assert all(is_balanced(s.p, s.q, k22) and not s.is_quasi_radial for s in battery)

    def test_rkh_generators(self):
        cls = SymbolClassRkh(k=Partition.of(2, 3), h=(1, 1))

        generators = rkh_generators(cls, 12, max_degree=2)

        assert len(generators) == 12
        assert generators[0].is_quasi_radial
        assert all(in_class_Rkh(g, cls) for g in generators)
