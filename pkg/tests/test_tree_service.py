from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from config import settings
from app.core.exceptions import DepthLimitError, TreeStructureError
from app.services import tree_service
from app.services.tree_service import dyadic_comb_tree, dyadic_tree, integrate, step_function
from tests.strategies import step_functions


class TestDyadicTree:
    def test_depth_one_has_two_halves(self):
        tree = dyadic_tree(1)
        assert tree.leaf_measures == (Fraction(1, 2), Fraction(1, 2))

    def test_depth_three_has_eight_atoms(self):
        tree = dyadic_tree(3)
        assert tree.leaf_count == 8
        assert set(tree.leaf_measures) == {Fraction(1, 8)}
        assert tree.is_exact and tree.has_equal_leaves

    def test_measures_by_level(self, tree2):
        assert tree2.measures_by_level() == [
            [1],
            [Fraction(1, 2)] * 2,
            [Fraction(1, 4)] * 4,
        ]

    def test_leaves_in_interval_order(self, tree2):
        starts = [tree2.nodes[i].leaf_start for i in tree2.leaves]
        assert starts == [0, 1, 2, 3]
        assert [tree2.nodes[i].level for i in tree2.ancestors(0)] == [0, 1, 2]

    def test_rejects_bad_depth(self):
        with pytest.raises(ValueError):
            dyadic_tree(0)
        with pytest.raises(DepthLimitError):
            dyadic_tree(settings.max_tree_depth + 1)


class TestCombTree:
    def test_half_ratio_cells(self):
        tree = dyadic_comb_tree(3)
        assert tree.leaf_measures == (Fraction(1, 8), Fraction(1, 8), Fraction(1, 4), Fraction(1, 2))
        assert tree.depth == 3

    def test_float_ratio_is_valid_tree(self):
        tree = dyadic_comb_tree(50, 0.9)
        assert tree.leaf_count == 51
        assert sum(tree.leaf_measures) == pytest.approx(1.0, abs=1e-12)

    def test_expand_to_dyadic(self):
        comb = dyadic_comb_tree(2)
        phi = step_function(comb, [8, 2, 1])
        expanded = tree_service.expand_to_dyadic(phi)
        assert expanded.tree.name == "dyadic"
        assert expanded.values == (8, 2, 1, 1)
        assert integrate(expanded) == integrate(phi)


class TestBuildTree:
    def test_general_tree(self):
        tree = tree_service.build_tree({
            "measure": "1",
            "children": [
                {"measure": "1/3"},
                {"measure": "2/3", "children": [{"measure": "1/3"}, {"measure": "1/3"}]},
            ],
        })
        assert tree.leaf_measures == (Fraction(1, 3),) * 3
        assert tree.depth == 2

    def test_children_must_sum_to_parent(self):
        with pytest.raises(TreeStructureError):
            tree_service.build_tree({"measure": "1", "children": [{"measure": "1/3"}, {"measure": "1/3"}]})

    def test_single_child_rejected(self):
        with pytest.raises(TreeStructureError):
            tree_service.build_tree({"measure": "1", "children": [{"measure": "1"}]})

    def test_schema_round_trip(self, spike):
        schema = tree_service.step_function_to_schema(spike)
        assert schema.children[0].children[0].value == "4"
        restored = tree_service.step_function_from_schema(schema.model_dump())
        assert restored.values == spike.values
        assert restored.tree.leaf_measures == spike.tree.leaf_measures


class TestIntegrate:
    def test_constant(self, tree2):
        assert integrate(tree_service.constant(tree2, 2), 1) == 2

    def test_constant_square_root(self, tree2):
        assert integrate(tree_service.constant(tree2, 4), 0.5) == pytest.approx(2.0)

    def test_spike_is_exact(self, spike):
        assert integrate(spike, 1) == Fraction(1)

    def test_exponent_range(self, spike):
        with pytest.raises(ValueError):
            integrate(spike, 1.5)

    @given(step_functions())
    def test_permutation_invariance(self, phi):
        reversed_phi = step_function(phi.tree, phi.values[::-1])
        assert integrate(reversed_phi, 1) == integrate(phi, 1)

    @given(step_functions(), st.floats(0.1, 1.0), st.sampled_from([Fraction(1, 3), Fraction(2), Fraction(7, 2)]))
    def test_homogeneity(self, phi, exponent, factor):
        scaled = integrate(phi.scaled(factor), exponent)
        assert float(scaled) == pytest.approx(float(factor) ** exponent * float(integrate(phi, exponent)), rel=1e-12)

    def test_refine_duplicates_values(self, spike):
        finer = tree_service.refine(spike)
        assert finer.tree.depth == 3
        assert finer.values == (4, 4, 0, 0, 0, 0, 0, 0)
        assert integrate(finer) == integrate(spike)
