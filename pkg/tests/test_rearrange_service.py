from fractions import Fraction
import math

import pytest
from hypothesis import given, settings as hypothesis_settings, strategies as st

from app.core.exceptions import EnumerationLimitError
from app.services import rearrange_service
from app.services.export_service import export_service
from app.services.maximal_service import maximal_integral, maximal_operator
from app.services.rearrange_service import (
    decreasing_rearrangement,
    distinct_permutations,
    rearrangement_search,
    restricted_integral,
)
from app.services.tree_service import build_tree, dyadic_comb_tree, dyadic_tree, integrate, step_function
from tests.strategies import q_values, step_functions


class TestDecreasingRearrangement:
    def test_spike(self, spike):
        profile = decreasing_rearrangement(spike)
        assert profile.breakpoints == (0, Fraction(1, 4), 1)
        assert profile.values == (4, 0)

    def test_equal_values_are_merged(self, tree2):
        profile = decreasing_rearrangement(step_function(tree2, [1, 2, 1, 0]))
        assert profile.breakpoints == (0, Fraction(1, 4), Fraction(3, 4), 1)
        assert profile.values == (2, 1, 0)

    def test_left_continuous(self, spike):
        profile = decreasing_rearrangement(maximal_operator(spike).maximal)
        assert rearrange_service.profile_value(profile, Fraction(1, 4)) == 4
        assert rearrange_service.profile_value(profile, 0.3) == 2
        assert rearrange_service.profile_value(profile, 1) == 1

    def test_left_continuous_at_non_dyadic_breakpoint(self):
        tree = build_tree({"measure": "1", "children": [{"measure": "1/3"}, {"measure": "2/3"}]})
        profile = decreasing_rearrangement(step_function(tree, [5, 1]))
        assert profile.breakpoints == (0, Fraction(1, 3), 1)
        assert profile(Fraction(1, 3)) == 5
        assert profile(Fraction(1, 3) + Fraction(1, 10**30)) == 1
        assert profile(1 / 3) == 5

    @given(step_functions(), q_values)
    def test_equimeasurable(self, phi, q):
        profile = decreasing_rearrangement(phi)
        assert profile.mass() == integrate(phi, 1)
        assert rearrange_service.profile_integral(profile, q) == pytest.approx(float(integrate(phi, q)), rel=1e-12)


class TestRestrictedIntegral:
    def test_maximal_of_spike(self, spike):
        profile = decreasing_rearrangement(maximal_operator(spike).maximal)
        assert restricted_integral(profile, 0.5, Fraction(1, 2)) == pytest.approx(0.5 + math.sqrt(2) / 4)
        assert restricted_integral(profile, 0.5, 1) == pytest.approx(1.3535533905932737)

    def test_k_range(self, spike):
        with pytest.raises(ValueError):
            restricted_integral(decreasing_rearrangement(spike), 0.5, 0)

    def test_hardy_bound_of_spike(self, spike):
        # Харди φ* = 4 на (0, 1/4] и 1/t дальше
        g = decreasing_rearrangement(spike)
        assert rearrange_service.restricted_hardy_bound(g, 0.5, 1) == pytest.approx(1.5)
        assert rearrange_service.restricted_hardy_bound(g, 0.5, 0.25) == pytest.approx(0.5)


    @given(step_functions(), q_values, st.integers(1, 16), st.integers(1, 16))
    def test_monotone_in_k(self, phi, q, first, second):
        profile = decreasing_rearrangement(phi)
        small, large = sorted((Fraction(first, 16), Fraction(second, 16)))
        assert restricted_integral(profile, q, small) <= restricted_integral(profile, q, large) * (1 + 1e-12)

    @given(step_functions(), q_values, st.integers(1, 16))
    def test_matches_aligned_midpoint_rule(self, phi, q, sixteenths):
        # Все точки разбиения кратны 1/16, поэтому средние точки на сетке 1/256 не попадают на скачки
        profile = decreasing_rearrangement(phi)
        k = Fraction(sixteenths, 16)
        cells = 16 * sixteenths
        midpoint = math.fsum(
            float(profile(Fraction(2 * i + 1, 512))) ** q / 256 for i in range(cells)
        )
        assert restricted_integral(profile, q, k) == pytest.approx(midpoint, rel=1e-12, abs=1e-300)


class TestSymmetrization:
    def test_spike_exact_grid(self, spike):
        report = rearrange_service.pointwise_symmetrization_check(spike, points=8)
        assert report.holds
        assert report.lhs == report.rhs == 4.0
        assert report.worst_t == pytest.approx(1 / 16)

    def test_rejects_empty_grid(self, spike):
        with pytest.raises(ValueError):
            rearrange_service.pointwise_symmetrization_check(spike, points=0)

    @given(step_functions())
    def test_holds(self, phi):
        assert rearrange_service.pointwise_symmetrization_check(phi).holds


class TestDistinctPermutations:
    def test_lexicographic(self):
        assert list(distinct_permutations([2, 1, 1])) == [(1, 1, 2), (1, 2, 1), (2, 1, 1)]

    def test_single_value(self):
        assert list(distinct_permutations([3, 3, 3])) == [(3, 3, 3)]

    @given(st.lists(st.integers(0, 3), min_size=1, max_size=7))
    def test_count_matches_multinomial(self, multiset):
        permutations = list(distinct_permutations(multiset))
        expected = math.factorial(len(multiset))
        for value in set(multiset):
            expected //= math.factorial(multiset.count(value))
        assert len(permutations) == len(set(permutations)) == expected
        assert permutations == sorted(permutations)


class TestRearrangementSearch:
    def test_matches_brute_force(self, tree3):
        multiset = [8, 4, 2, 1, 0, 0, 0, 0]
        report = rearrangement_search(tree3, multiset, 0.5)
        brute = max(
            maximal_integral(0.5, step_function(tree3, values))
            for values in distinct_permutations(multiset)
        )
        assert report.permutations == 1680
        assert report.best_value == pytest.approx(brute, rel=1e-12)
        assert report.left_value <= report.best_value + 1e-12
        assert report.best_value <= report.hardy_bound
        assert report.holds

    def test_left_arranged(self, tree2):
        assert rearrange_service.left_arranged(tree2, [0, 4, 0, 1]).values == (4, 1, 0, 0)

    def test_enumeration_cap(self):
        with pytest.raises(EnumerationLimitError):
            rearrangement_search(dyadic_tree(4), [1] * 16, 0.5)

    def test_unequal_leaves_rejected(self):
        with pytest.raises(ValueError):
            rearrangement_search(dyadic_comb_tree(3), [1, 2, 3, 4], 0.5)

    def test_size_mismatch(self, tree2):
        with pytest.raises(ValueError):
            rearrangement_search(tree2, [1, 2, 3], 0.5)

    @hypothesis_settings(max_examples=20)
    @given(st.lists(st.integers(0, 20), min_size=8, max_size=8).filter(any), q_values)
    def test_oracle_holds(self, multiset, q):
        assert rearrangement_search(dyadic_tree(3), multiset, q).holds


class TestProfileSerialization:
    def test_maximal_of_spike(self, spike):
        profile = maximal_operator(spike).distribution.rearranged()
        text = export_service.render_profile(rearrange_service.profile_to_schema(profile))
        assert text == "breakpoint,value\n1/4,4\n1/2,2\n1,1\n"

    @given(step_functions())
    def test_exact_round_trip(self, phi):
        profile = decreasing_rearrangement(phi)
        text = export_service.render_profile(rearrange_service.profile_to_schema(profile))
        restored = rearrange_service.profile_from_schema(export_service.parse_profile(text))
        assert restored == profile

    def test_float_round_trip(self, tree2):
        profile = decreasing_rearrangement(step_function(tree2, [0.1, 2.5, 0.1, 1e-7]))
        text = export_service.render_profile(rearrange_service.profile_to_schema(profile))
        restored = rearrange_service.profile_from_schema(export_service.parse_profile(text), exact=False)
        assert restored.values == profile.values
        assert restored.breakpoints == tuple(float(b) for b in profile.breakpoints)

    def test_rejects_wrong_header(self):
        with pytest.raises(ValueError):
            export_service.parse_profile("t,value\n1,1\n")

    def test_rejects_empty_profile(self):
        with pytest.raises(ValueError):
            export_service.parse_profile("breakpoint,value\n")

    def test_rejects_increasing_values(self):
        points = export_service.parse_profile("breakpoint,value\n1/2,1\n1,2\n")
        with pytest.raises(ValueError):
            rearrange_service.profile_from_schema(points)
