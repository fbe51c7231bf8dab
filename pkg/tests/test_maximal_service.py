from fractions import Fraction
import math

import pytest
from hypothesis import given, strategies as st

from app.services import maximal_service
from app.services.maximal_service import kolmogorov_check, maximal_operator, weak_type_check
from app.services.rearrange_service import decreasing_rearrangement
from app.services.tree_service import constant, integrate, refine, step_function
from tests.strategies import q_values, step_function_pairs, step_functions


class TestMaximalOperator:
    def test_constant(self, tree2):
        result = maximal_operator(constant(tree2, 3))
        assert result.maximal.values == (3, 3, 3, 3)
        assert result.argmax_levels == (0, 0, 0, 0)

    def test_spike(self, spike):
        result = maximal_operator(spike)
        assert result.maximal.values == (4, 2, 1, 1)
        assert result.argmax_levels == (2, 1, 0, 0)
        assert all(isinstance(v, Fraction) for v in result.maximal.values)

    def test_mirrored_spike(self, mirrored_spike):
        assert maximal_operator(mirrored_spike).maximal.values == (1, 1, 2, 4)

    @given(step_functions())
    def test_dominates_function_and_mean(self, phi):
        values = maximal_operator(phi).maximal.values
        mean = integrate(phi)
        assert all(m >= v for m, v in zip(values, phi.values))
        assert all(m >= mean for m in values)

    @given(step_functions(), st.integers(1, 50))
    def test_homogeneous(self, phi, factor):
        base = maximal_operator(phi)
        scaled = maximal_operator(phi.scaled(factor))
        assert scaled.maximal.values == tuple(v * factor for v in base.maximal.values)
        assert scaled.argmax_levels == base.argmax_levels

    @given(step_function_pairs())
    def test_monotone(self, pair):
        phi, extra = pair
        bigger = step_function(phi.tree, [a + b for a, b in zip(phi.values, extra.values)])
        for small, large in zip(maximal_operator(phi).maximal.values, maximal_operator(bigger).maximal.values):
            assert small <= large

    @given(step_functions(max_depth=5))
    def test_refinement_keeps_values(self, phi):
        coarse = maximal_operator(phi).maximal.values
        fine = maximal_operator(refine(phi)).maximal.values
        assert fine == tuple(v for value in coarse for v in (value, value))


class TestWeakType:
    def test_whole_space(self, tree2):
        report = weak_type_check(constant(tree2, 2), 1)
        assert report.lhs == 1 and report.rhs == 2 and report.holds

    def test_empty_level_set(self, tree2):
        report = weak_type_check(constant(tree2, 2), 2)
        assert report.lhs == 0 and report.rhs == 0 and report.holds

    def test_spike(self, spike):
        report = weak_type_check(spike, 1.5)
        assert report.lhs == 0.5
        assert report.rhs == pytest.approx(2 / 3)
        assert report.holds

    def test_non_strict_level_set(self, spike):
        result = maximal_operator(spike)
        assert maximal_service.level_set(result, 2, strict=True) == (0,)
        assert maximal_service.level_set(result, 2, strict=False) == (0, 1)

    def test_rejects_non_positive_lambda(self, spike):
        with pytest.raises(ValueError):
            weak_type_check(spike, 0)

    @given(step_functions(), st.fractions(min_value=Fraction(1, 1000), max_value=1000), st.booleans())
    def test_holds(self, phi, lam, strict):
        assert weak_type_check(phi, lam, strict).holds


class TestKolmogorov:
    def test_spike_full_space(self, spike):
        report = kolmogorov_check(0.5, spike, range(4))
        assert report.lhs == pytest.approx(0.5 + math.sqrt(2) / 4 + 0.5)
        assert report.lhs == pytest.approx(1.35355, abs=1e-5)
        assert report.rhs == pytest.approx(2.0)
        assert report.ratio == pytest.approx(report.lhs / 2)
        assert report.holds

    def test_constant_full_space(self, tree2):
        report = kolmogorov_check(0.5, constant(tree2, 1), range(4))
        assert report.lhs == pytest.approx(1.0) and report.rhs == pytest.approx(2.0)

    def test_constant_single_leaf(self, tree2):
        report = kolmogorov_check(0.5, constant(tree2, 1), [2])
        assert report.lhs == pytest.approx(0.25) and report.rhs == pytest.approx(1.0)

    def test_empty_subset_rejected(self, spike):
        with pytest.raises(ValueError):
            kolmogorov_check(0.5, spike, [])

    @given(step_functions(), q_values, st.data())
    def test_holds(self, phi, q, data):
        subset = data.draw(st.sets(st.integers(0, phi.tree.leaf_count - 1), min_size=1))
        assert kolmogorov_check(q, phi, subset).holds


class TestIntegrals:
    def test_spike_integral(self, spike):
        assert maximal_service.maximal_integral(0.5, spike) == pytest.approx(1.3535533905932737)

    @given(step_functions(), q_values)
    def test_layer_cake_agrees(self, phi, q):
        direct = maximal_service.maximal_integral(q, phi)
        assert maximal_service.layer_cake_integral(q, phi) == pytest.approx(direct, rel=1e-12)


class TestLevelDistribution:
    @given(step_functions(max_depth=6), st.fractions(min_value=Fraction(1, 1000), max_value=1000), st.booleans())
    def test_matches_direct_level_set_sums(self, phi, lam, strict):
        result = maximal_operator(phi)
        positions = maximal_service.level_set(result, lam, strict)
        measures = phi.tree.leaf_measures
        measure, mass = result.distribution.above(lam, strict)
        assert measure == sum((measures[i] for i in positions), start=Fraction(0))
        assert mass == sum((phi.values[i] * measures[i] for i in positions), start=Fraction(0))

    @given(step_functions(max_depth=6))
    def test_mass_is_exact_integral(self, phi):
        result = maximal_operator(phi)
        assert isinstance(result.mass, Fraction)
        assert result.mass == sum((v * mu for v, mu in phi.atoms()), start=Fraction(0))

    @given(step_functions(max_depth=6))
    def test_rearranged_matches_generic(self, phi):
        result = maximal_operator(phi)
        generic = decreasing_rearrangement(result.maximal)
        assert result.distribution.rearranged() == generic

    def test_spike_levels(self, spike):
        distribution = maximal_operator(spike).distribution
        assert distribution.levels == (1, 2, 4)
        assert distribution.tail_measure == (1, Fraction(1, 2), Fraction(1, 4), 0)
        assert distribution.tail_mass == (1, 1, 1, 0)

    def test_float_values(self, tree2):
        phi = step_function(tree2, [0.5, 0.25, 3.0, 0.0])
        result = maximal_operator(phi)
        assert result.maximal.values == pytest.approx((0.9375, 0.9375, 3.0, 1.5))
        measure, mass = result.distribution.above(1.0)
        assert measure == pytest.approx(0.5) and mass == pytest.approx(0.75)
