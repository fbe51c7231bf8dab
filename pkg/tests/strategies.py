"""
Стратегии hypothesis: точные ступенчатые функции на двоичных деревьях.
"""
from fractions import Fraction

from hypothesis import strategies as st

from app.services.tree_service import dyadic_tree, step_function

# Кратные 1/64 с заметной долей точных нулей
exact_values = st.one_of(
    st.just(Fraction(0)),
    st.integers(1, 64 * 64).map(lambda n: Fraction(n, 64)),
    st.integers(1, 10**6).map(Fraction),
)

q_values = st.sampled_from([0.25, 0.5, 0.75])


@st.composite
def step_functions(draw, min_depth: int = 1, max_depth: int = 4):
    depth = draw(st.integers(min_depth, max_depth))
    tree = dyadic_tree(depth)
    values = draw(st.lists(exact_values, min_size=tree.leaf_count, max_size=tree.leaf_count))
    if not any(values):
        values[draw(st.integers(0, tree.leaf_count - 1))] = Fraction(1)
    return step_function(tree, values)


@st.composite
def step_function_pairs(draw, min_depth: int = 1, max_depth: int = 4):
    """Две функции на одном дереве"""
    first = draw(step_functions(min_depth, max_depth))
    count = first.tree.leaf_count
    values = draw(st.lists(exact_values, min_size=count, max_size=count))
    return first, step_function(first.tree, values)
