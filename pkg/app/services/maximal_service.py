"""
Двоичный максимальный оператор M_T на ступенчатых функциях
и проверки слабого типа (1,1) и неравенства Колмогорова.
"""
from fractions import Fraction
from typing import Iterable
import logging
import math

from app.core.numeric import Number, exact_sum, leq, power
from app.models import LevelDistribution, MaximalResult, StepFunction
from app.schemas import KolmogorovReport, WeakTypeReport

logger = logging.getLogger(__name__)


def _node_integrals(phi: StepFunction) -> tuple[list, tuple, int]:
    """
    Интегралы и меры узлов в общих единицах и знаменатель единиц.

    В точном режиме: целые числа, интеграл узла равен integral / denominator,
    мера равна units / tree.measure_denominator. Иначе: float и denominator = 1.
    """
    tree = phi.tree
    nodes = tree.nodes
    if phi.is_exact:
        scale = math.lcm(*(v.denominator for v in phi.values))
        measures = tree.measure_units
        leaf_values = [v.numerator * (scale // v.denominator) for v in phi.values]
        denominator = scale * tree.measure_denominator
    else:
        measures = tuple(float(node.measure) for node in nodes)
        leaf_values = list(phi.float_values)
        denominator = 1
    integrals = [0] * len(nodes)
    for position, index in enumerate(tree.leaves):
        integrals[index] = leaf_values[position] * measures[index]
    for index in range(len(nodes) - 1, -1, -1):
        if nodes[index].children:
            integrals[index] = sum(integrals[c] for c in nodes[index].children)
    return integrals, measures, denominator


def maximal_operator(phi: StepFunction) -> MaximalResult:
    """
    M_T φ на каждом листе: максимум средних по всем предкам листа (включая корень и сам лист).

    Интегралы узлов собираются снизу вверх, лучший предок: сверху вниз;
    при равенстве остаётся более мелкий (ближе к корню) уровень.
    В точном режиме средние сравниваются перекрёстным умножением целых.
    """
    tree = phi.tree
    nodes = tree.nodes
    exact = phi.is_exact
    integrals, measures, denominator = _node_integrals(phi)

    best = [0] * len(nodes)
    for index, node in enumerate(nodes):
        parent = node.parent
        if parent is None:
            best[index] = index
            continue
        top = best[parent]
        if exact:
            better = integrals[index] * measures[top] > integrals[top] * measures[index]
        else:
            better = integrals[index] / measures[index] > integrals[top] / measures[top]
        best[index] = index if better else top

    averages: dict[int, Number] = {}
    leaf_best = [best[i] for i in tree.leaves]
    for index in set(leaf_best):
        if exact:
            averages[index] = Fraction(integrals[index] * tree.measure_denominator, denominator * measures[index])
        else:
            averages[index] = integrals[index] / measures[index]

    maximal = StepFunction(tree, tuple(averages[b] for b in leaf_best))
    mass = Fraction(integrals[0], denominator) if exact else integrals[0]
    return MaximalResult(
        source=phi,
        maximal=maximal,
        argmax_levels=tuple(nodes[b].level for b in leaf_best),
        mass=mass,
        distribution=_distribution(phi, leaf_best, averages, integrals, measures, denominator),
    )


def _distribution(
    phi: StepFunction,
    leaf_best: list[int],
    averages: dict[int, Number],
    integrals: list,
    measures: tuple,
    denominator: int,
) -> LevelDistribution:
    """Хвостовые суммы меры и массы φ по уровням M_T φ"""
    tree = phi.tree
    exact = phi.is_exact
    # Листья с одним лучшим узлом дают одно значение; их мера и интеграл складываются в единицах
    grouped_measure: dict[int, Number] = {}
    grouped_mass: dict[int, Number] = {}
    for position, index in enumerate(tree.leaves):
        node = leaf_best[position]
        grouped_measure[node] = grouped_measure.get(node, 0) + measures[index]
        grouped_mass[node] = grouped_mass.get(node, 0) + integrals[index]

    by_level: dict[Number, list] = {}
    for node, value in averages.items():
        entry = by_level.setdefault(value, [0, 0])
        entry[0] += grouped_measure[node]
        entry[1] += grouped_mass[node]

    levels = sorted(by_level)
    tail_measure: list = [0] * (len(levels) + 1)
    tail_mass: list = [0] * (len(levels) + 1)
    for j in range(len(levels) - 1, -1, -1):
        tail_measure[j] = tail_measure[j + 1] + by_level[levels[j]][0]
        tail_mass[j] = tail_mass[j + 1] + by_level[levels[j]][1]
    if exact:
        tail_measure = [Fraction(m, tree.measure_denominator) for m in tail_measure]
        tail_mass = [Fraction(m, denominator) for m in tail_mass]
    else:
        tail_measure = [float(m) for m in tail_measure]
        tail_mass = [float(m) for m in tail_mass]
    return LevelDistribution(tuple(levels), tuple(tail_measure), tuple(tail_mass))


def _resolve(phi: StepFunction, maximal: MaximalResult | None) -> MaximalResult:
    if maximal is None:
        return maximal_operator(phi)
    if maximal.source is not phi:
        raise ValueError("MaximalResult вычислен для другой функции")
    return maximal


def _check_q(q: float) -> None:
    if not 0 < q < 1:
        raise ValueError(f"q={q} вне (0, 1)")


def level_set(result: MaximalResult, lam: Number, strict: bool = True) -> tuple[int, ...]:
    """Позиции листьев, где M_T φ > λ (strict) или M_T φ >= λ"""
    values = result.maximal.values
    if strict:
        return tuple(i for i, v in enumerate(values) if v > lam)
    return tuple(i for i, v in enumerate(values) if v >= lam)


def weak_type_check(
    phi: StepFunction,
    lam: Number,
    strict: bool = True,
    *,
    maximal: MaximalResult | None = None,
    tol: float | None = None,
) -> WeakTypeReport:
    """μ({M_T φ > λ}) <= (1/λ) ∫_{M_T φ > λ} φ dμ"""
    if lam <= 0:
        raise ValueError(f"λ должно быть положительным: {lam}")
    result = _resolve(phi, maximal)
    if phi.is_exact:
        lam = Fraction(lam)
    lhs, level_mass = result.distribution.above(lam, strict)
    rhs = level_mass / lam
    return WeakTypeReport(
        lhs=float(lhs),
        rhs=float(rhs),
        holds=leq(lhs, rhs, tol),
        lam=float(lam),
        strict=strict,
    )


def maximal_integral(q: float, phi: StepFunction, *, maximal: MaximalResult | None = None) -> float:
    """∫(M_T φ)^q dμ суммой по листьям"""
    result = _resolve(phi, maximal)
    return math.fsum(p * mu for p, mu in zip(result.powered(q), phi.tree.float_leaf_measures))


def layer_cake_integral(q: float, phi: StepFunction, *, maximal: MaximalResult | None = None) -> float:
    """
    ∫(M_T φ)^q dμ через функцию распределения: ∫_0^∞ q λ^(q-1) μ({M_T φ > λ}) dλ.

    Между соседними уровнями λ_(j-1) < λ_j множество {M > λ} постоянно,
    поэтому интеграл равен Σ μ({M >= λ_j}) (λ_j^q - λ_(j-1)^q).
    """
    distribution = _resolve(phi, maximal).distribution
    total = 0.0
    previous = 0.0
    for lam, tail in zip(distribution.levels, distribution.tail_measure):
        current = float(power(lam, q))
        total += float(tail) * (current - previous)
        previous = current
    return total


def kolmogorov_check(
    q: float,
    phi: StepFunction,
    subset: Iterable[int],
    *,
    maximal: MaximalResult | None = None,
    tol: float | None = None,
) -> KolmogorovReport:
    """∫_E (M_T φ)^q dμ <= (1/(1-q)) μ(E)^(1-q) (∫φ)^q; E: множество позиций листьев"""
    _check_q(q)
    positions = sorted(set(subset))
    if not positions:
        raise ValueError("Множество E пусто")
    if positions[0] < 0 or positions[-1] >= phi.tree.leaf_count:
        raise ValueError(f"Позиции E вне [0, {phi.tree.leaf_count})")
    result = _resolve(phi, maximal)

    measures = phi.tree.leaf_measures
    floats = phi.tree.float_leaf_measures
    powered = result.powered(q)
    subset_measure = exact_sum(measures[i] for i in positions)
    lhs = math.fsum(powered[i] * floats[i] for i in positions)
    rhs = power(subset_measure, 1 - q) * power(result.mass, q) / (1 - q)
    return KolmogorovReport(
        lhs=float(lhs),
        rhs=float(rhs),
        holds=leq(lhs, rhs, tol),
        q=q,
        subset_measure=float(subset_measure),
    )
