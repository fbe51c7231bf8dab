"""
Убывающие перестановки, интегралы по префиксам (0, k]
и перебор всех перестановок значений по листьям как оракул для оценки через оператор Харди.
"""
from collections import Counter
from fractions import Fraction
from typing import Iterator, Sequence
import logging

import numpy as np

from config import settings
from app.core.exceptions import EnumerationLimitError
from app.core.numeric import Number, as_number, is_exact, leq, power, render_exact
from app.models import MaximalResult, MonotoneProfile, StepFunction, Tree
from app.schemas import ProfilePoint, SearchReport, SymmetrizationReport
from app.services.bellman_service import hardy_operator
from app.services.maximal_service import maximal_integral, maximal_operator
from app.services.tree_service import step_function

logger = logging.getLogger(__name__)


def decreasing_rearrangement(phi: StepFunction) -> MonotoneProfile:
    """φ*: значения по убыванию, длина куска: суммарная мера атомов с этим значением"""
    tree = phi.tree
    # Меры атомов складываются в целых единицах дерева, если оно точное
    units = tree.measure_units
    weights = [units[i] for i in tree.leaves] if units is not None else tree.float_leaf_measures
    mass_by_value: dict[Number, Number] = {}
    for value, weight in zip(phi.values, weights):
        mass_by_value[value] = mass_by_value.get(value, 0) + weight

    breakpoints: list[Number] = [0]
    values: list[Number] = []
    running: Number = 0
    for value in sorted(mass_by_value, reverse=True):
        running += mass_by_value[value]
        breakpoints.append(Fraction(running, tree.measure_denominator) if units is not None else running)
        values.append(value)
    # Сумма мер равна 1 точно в точном режиме и с ошибкой округления иначе
    breakpoints[-1] = 1 if is_exact(breakpoints[-1]) else 1.0
    return MonotoneProfile(tuple(breakpoints), tuple(values))


def profile_value(profile: MonotoneProfile, t: float) -> Number:
    """Значение непрерывного слева профиля в точке t из (0, 1]"""
    return profile(t)


def profile_to_schema(profile: MonotoneProfile) -> list[ProfilePoint]:
    """Пары (t_i, v_i) по возрастанию t_i; числа как в render_exact"""
    return [
        ProfilePoint(breakpoint=render_exact(hi), value=render_exact(value))
        for _, hi, value in profile.pieces()
    ]


def profile_from_schema(points: Sequence[ProfilePoint], exact: bool = True) -> MonotoneProfile:
    """Обратное к profile_to_schema; инварианты профиля проверяет MonotoneProfile"""
    breakpoints: list[Number] = [0]
    values: list[Number] = []
    for point in points:
        breakpoints.append(as_number(point.breakpoint, exact))
        values.append(as_number(point.value, exact))
    return MonotoneProfile(tuple(breakpoints), tuple(values))


def restricted_integral(profile: MonotoneProfile, q: float, k: Number) -> float:
    """∫_0^k profile(t)^q dt: точная сумма по кускам"""
    if not 0 < k <= 1:
        raise ValueError(f"k={k} вне (0, 1]")
    total = 0.0
    for lo, hi, value in profile.pieces():
        if lo >= k:
            break
        total += float(power(value, q)) * float(min(hi, k) - lo)
    return total


def profile_integral(profile: MonotoneProfile, exponent: float) -> float:
    """∫_0^1 profile^e; совпадает с integrate(φ, e) для φ с φ* = profile"""
    return restricted_integral(profile, exponent, 1)


def restricted_hardy_bound(g: MonotoneProfile, q: float, k: float) -> float:
    """∫_0^k (Харди g)^q dt"""
    if not 0 < k <= 1:
        raise ValueError(f"k={k} вне (0, 1]")
    return hardy_operator(g).power_integral(q, 0.0, float(k))


def _piece_indexes(breakpoints: Sequence[Number], grid: Sequence[Number]) -> list[int]:
    """Номер куска (t_i, t_(i+1)] для каждой точки возрастающей сетки одним проходом"""
    indexes: list[int] = []
    piece, last = 0, len(breakpoints) - 2
    for t in grid:
        while piece < last and breakpoints[piece + 1] < t:
            piece += 1
        indexes.append(piece)
    return indexes


def pointwise_symmetrization_check(
    phi: StepFunction,
    points: int = 64,
    *,
    maximal: MaximalResult | None = None,
    tol: float | None = None,
) -> SymmetrizationReport:
    """
    (M_T φ)*(t) <= Харди(φ*)(t) в серединах points равных кусков (0, 1].

    В точном режиме сетка и обе части: Fraction, сравнение без допуска.
    """
    if points < 1:
        raise ValueError(f"Число точек должно быть >= 1: {points}")
    result = maximal if maximal is not None else maximal_operator(phi)
    rearranged = result.distribution.rearranged()
    hardy = hardy_operator(decreasing_rearrangement(phi))
    exact = phi.is_exact

    grid = [Fraction(2 * i + 1, 2 * points) if exact else (2 * i + 1) / (2 * points) for i in range(points)]
    worst: tuple[Number, Number, Number] | None = None
    holds = True
    pieces = _piece_indexes(rearranged.breakpoints, grid)
    hardy_pieces = _piece_indexes(hardy.breakpoints, grid)
    for t, piece, hardy_piece in zip(grid, pieces, hardy_pieces):
        lhs = rearranged.values[piece]
        a_coef, b_coef = hardy.coefficients[hardy_piece]
        rhs = a_coef + b_coef / t
        holds = holds and leq(lhs, rhs, tol)
        if worst is None or rhs - lhs < worst[2] - worst[1]:
            worst = (t, lhs, rhs)
    t, lhs, rhs = worst
    return SymmetrizationReport(lhs=float(lhs), rhs=float(rhs), holds=holds, worst_t=float(t), points=points)


def left_arranged(tree: Tree, multiset: Sequence[Number]) -> StepFunction:
    """Значения по убыванию в каноническом порядке листьев"""
    return step_function(tree, sorted(multiset, reverse=True))


def distinct_permutations(multiset: Sequence[Number]) -> Iterator[tuple[Number, ...]]:
    """
    Все различные перестановки мультимножества в лексикографическом порядке
    (поиск в глубину по счётчикам значений).
    """
    counts = Counter(multiset)
    keys = sorted(counts)
    size = len(multiset)
    current: list[Number] = []

    stack: list[int] = [0]
    while stack:
        position = stack[-1]
        if len(current) == size:
            yield tuple(current)
            stack.pop()
            counts[current.pop()] += 1
            continue
        while position < len(keys) and counts[keys[position]] == 0:
            position += 1
        if position == len(keys):
            stack.pop()
            if current:
                counts[current.pop()] += 1
            continue
        stack[-1] = position + 1
        value = keys[position]
        counts[value] -= 1
        current.append(value)
        stack.append(0)


def _batch_integrals(tree: Tree, permutations: np.ndarray, q: float) -> np.ndarray:
    """
    ∫(M_T φ)^q для пачки расстановок сразу (листья равной меры).

    Среднее по узлу: доля его листьев; M_T на листе: максимум по предкам.
    """
    leaf_count = tree.leaf_count
    averaging = np.zeros((len(tree.nodes), leaf_count))
    ancestry = np.zeros((leaf_count, len(tree.nodes)), dtype=bool)
    for index, node in enumerate(tree.nodes):
        span = node.leaf_stop - node.leaf_start
        averaging[index, node.leaf_start:node.leaf_stop] = 1.0 / span
        ancestry[node.leaf_start:node.leaf_stop, index] = True
    averages = permutations @ averaging.T
    maximal = np.where(ancestry[None, :, :], averages[:, None, :], -np.inf).max(axis=2)
    return (maximal**q).sum(axis=1) / leaf_count


def rearrangement_search(tree: Tree, multiset: Sequence[Number], q: float) -> SearchReport:
    """
    Максимум ∫(M_T φ)^q по всем различным расстановкам мультимножества на листья
    и сравнение с ∫_0^1 (Харди g)^q, g: убывающий профиль мультимножества.
    """
    if not 0 < q < 1:
        raise ValueError(f"q={q} вне (0, 1)")
    if tree.leaf_count > settings.enumeration_cap:
        raise EnumerationLimitError(
            f"{tree.leaf_count} листьев > ENUMERATION_CAP={settings.enumeration_cap}"
        )
    if not tree.has_equal_leaves:
        raise ValueError("Перебор определён только для листьев равной меры")
    if len(multiset) != tree.leaf_count:
        raise ValueError(f"Размер мультимножества {len(multiset)} != числу листьев {tree.leaf_count}")

    permutations = list(distinct_permutations(multiset))
    values = _batch_integrals(tree, np.array(permutations, dtype=float), q)
    best_index = int(np.argmax(values))
    best = permutations[best_index]
    # Пачечный результат перепроверяется общим оператором на лучшей расстановке
    best_value = maximal_integral(q, step_function(tree, best))

    left = left_arranged(tree, multiset)
    left_value = maximal_integral(q, left)
    hardy_bound = hardy_operator(decreasing_rearrangement(left)).power_integral(q)
    holds = leq(best_value, hardy_bound, abs_tol=settings.quad_abs_tol) and leq(
        left_value, best_value, abs_tol=settings.quad_abs_tol
    )
    if not holds:
        logger.error(f"Перебор: best={best_value!r}, hardy={hardy_bound!r}, left={left_value!r}, multiset={list(multiset)}")
    return SearchReport(
        q=q,
        best_value=best_value,
        best_permutation=[float(v) for v in best],
        left_value=left_value,
        hardy_bound=hardy_bound,
        permutations=len(permutations),
        holds=holds,
    )
