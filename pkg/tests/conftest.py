import pytest
from hypothesis import HealthCheck, settings as hypothesis_settings

from app.services.tree_service import dyadic_tree, step_function

# Детерминированный профиль: одинаковые примеры при каждом запуске
hypothesis_settings.register_profile(
    "deterministic",
    derandomize=True,
    max_examples=100,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
hypothesis_settings.load_profile("deterministic")


@pytest.fixture
def tree2():
    return dyadic_tree(2)


@pytest.fixture
def tree3():
    return dyadic_tree(3)


@pytest.fixture
def spike(tree2):
    """φ = (4, 0, 0, 0) на двоичном дереве глубины 2"""
    return step_function(tree2, [4, 0, 0, 0])


@pytest.fixture
def mirrored_spike(tree2):
    return step_function(tree2, [0, 0, 0, 4])
