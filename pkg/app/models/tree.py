"""
Деревья (конечные срезки) и ступенчатые функции на их листьях.

Узлы хранятся плоским массивом в прямом порядке обхода (корень: nodes[0]),
поэтому глубина дерева не ограничена глубиной рекурсии.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator
import math

from config import settings
from app.core.exceptions import TreeStructureError
from app.core.numeric import Number, is_exact


@dataclass(frozen=True, slots=True)
class TreeNode:
    """Элемент дерева: мера, уровень, родитель и отрезок листьев [leaf_start, leaf_stop)"""
    measure: Number
    level: int
    parent: int | None
    children: tuple[int, ...]
    leaf_start: int
    leaf_stop: int

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass(frozen=True, slots=True)
class Tree:
    """
    Конечное дерево измеримых множеств.

    Инварианты проверяются при создании:
    - мера корня равна 1;
    - у внутреннего узла не меньше двух детей, их меры положительны
      и в сумме дают меру родителя (точно для Fraction, с допуском MEASURE_TOL иначе).
    """
    nodes: tuple[TreeNode, ...]
    name: str = "tree"
    leaves: tuple[int, ...] = field(init=False)
    # Производные величины считаются один раз при создании
    leaf_measures: tuple[Number, ...] = field(init=False, repr=False, compare=False)
    float_leaf_measures: tuple[float, ...] = field(init=False, repr=False, compare=False)
    is_exact: bool = field(init=False, repr=False, compare=False)
    measure_units: tuple[int, ...] | None = field(init=False, repr=False, compare=False)
    measure_denominator: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.nodes:
            raise TreeStructureError("Дерево без узлов")
        leaves = tuple(i for i, node in enumerate(self.nodes) if node.is_leaf)
        leaf_measures = tuple(self.nodes[i].measure for i in leaves)
        exact = all(is_exact(node.measure) for node in self.nodes)
        object.__setattr__(self, "leaves", leaves)
        object.__setattr__(self, "leaf_measures", leaf_measures)
        object.__setattr__(self, "float_leaf_measures", tuple(float(m) for m in leaf_measures))
        object.__setattr__(self, "is_exact", exact)
        # Точные меры узлов: целые числители над общим знаменателем
        units, denominator = None, 1
        if exact:
            denominator = math.lcm(*(node.measure.denominator for node in self.nodes))
            units = tuple(
                node.measure.numerator * (denominator // node.measure.denominator) for node in self.nodes
            )
        object.__setattr__(self, "measure_units", units)
        object.__setattr__(self, "measure_denominator", denominator)
        self._validate()

    def _validate(self) -> None:
        root = self.nodes[0]
        if root.parent is not None or root.level != 0:
            raise TreeStructureError("nodes[0] должен быть корнем уровня 0")
        if not _equal(root.measure, 1):
            raise TreeStructureError(f"Мера корня {root.measure} != 1")
        for index, node in enumerate(self.nodes):
            if node.measure <= 0:
                raise TreeStructureError(f"Узел {index}: мера {node.measure} <= 0")
            if node.is_leaf:
                continue
            if len(node.children) < 2:
                raise TreeStructureError(f"Узел {index}: у внутреннего узла меньше двух детей")
            total = sum((self.nodes[c].measure for c in node.children), start=0)
            if not _equal(total, node.measure):
                raise TreeStructureError(
                    f"Узел {index}: сумма мер детей {total} != мере родителя {node.measure}"
                )

    @property
    def root(self) -> TreeNode:
        return self.nodes[0]

    @property
    def depth(self) -> int:
        return max(self.nodes[i].level for i in self.leaves)

    @property
    def leaf_count(self) -> int:
        return len(self.leaves)

    @property
    def has_equal_leaves(self) -> bool:
        measures = self.leaf_measures
        return all(_equal(m, measures[0]) for m in measures)

    def ancestors(self, leaf_position: int) -> list[int]:
        """Индексы узлов от корня до листа включительно"""
        chain = []
        current: int | None = self.leaves[leaf_position]
        while current is not None:
            chain.append(current)
            current = self.nodes[current].parent
        return chain[::-1]

    def measures_by_level(self) -> list[list[Number]]:
        """Меры узлов по уровням: [[1], [1/2, 1/2], ...]"""
        levels: list[list[Number]] = []
        for node in self.nodes:
            while len(levels) <= node.level:
                levels.append([])
            levels[node.level].append(node.measure)
        return levels


@dataclass(frozen=True, slots=True)
class StepFunction:
    """Неотрицательная функция, постоянная на листьях дерева"""
    tree: Tree
    values: tuple[Number, ...]
    float_values: tuple[float, ...] = field(init=False, repr=False, compare=False)
    is_exact: bool = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.values) != self.tree.leaf_count:
            raise ValueError(
                f"Число значений {len(self.values)} != числу листьев {self.tree.leaf_count}"
            )
        for position, value in enumerate(self.values):
            if value < 0 or not math.isfinite(value):
                raise ValueError(f"Лист {position}: недопустимое значение {value}")
        object.__setattr__(self, "float_values", tuple(float(v) for v in self.values))
        object.__setattr__(self, "is_exact", self.tree.is_exact and all(is_exact(v) for v in self.values))

    @property
    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)

    def atoms(self) -> Iterator[tuple[Number, Number]]:
        """Пары (значение, мера атома) в каноническом порядке листьев"""
        return zip(self.values, self.tree.leaf_measures)

    def scaled(self, factor: Number) -> "StepFunction":
        if factor <= 0:
            raise ValueError(f"Множитель должен быть положительным: {factor}")
        return StepFunction(self.tree, tuple(v * factor for v in self.values))


def _equal(lhs: Number, rhs: Number) -> bool:
    if is_exact(lhs) and is_exact(rhs):
        return Fraction(lhs) == Fraction(rhs)
    return abs(float(lhs) - float(rhs)) <= settings.measure_tol
