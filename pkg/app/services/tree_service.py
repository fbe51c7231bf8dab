"""
Построение деревьев и ступенчатых функций.

- dyadic_tree: двоичные отрезки [0, 1) до заданной глубины (точные меры);
- dyadic_comb_tree: «гребёнка»: узел [0, ρ^k) делится на [0, ρ^(k+1)) и лист [ρ^(k+1), ρ^k);
- build_tree: произвольное конечное дерево из вложенных записей.

Все деревья собираются итеративно в прямом порядке обхода.
"""
from fractions import Fraction
from typing import Iterable, Sequence
import logging
import math

from config import settings
from app.core.exceptions import DepthLimitError, TreeStructureError
from app.core.numeric import Number, as_number, exact_dot, is_exact, render_exact
from app.models import StepFunction, Tree, TreeNode
from app.schemas import TreeNodeSchema

logger = logging.getLogger(__name__)

# (мера, уровень, родитель) в прямом порядке обхода
_Entry = tuple[Number, int, int | None]


def _assemble(entries: Sequence[_Entry], name: str) -> Tree:
    """Собрать Tree: списки детей и отрезки листьев по записям в прямом порядке"""
    children: list[list[int]] = [[] for _ in entries]
    for index, (_, _, parent) in enumerate(entries):
        if parent is not None:
            if parent >= index:
                raise TreeStructureError(f"Узел {index}: родитель {parent} не предшествует узлу")
            children[parent].append(index)

    starts = [0] * len(entries)
    stops = [0] * len(entries)
    position = 0
    for index in range(len(entries)):
        if not children[index]:
            starts[index], stops[index] = position, position + 1
            position += 1
    # В обратном прямом порядке дети обрабатываются раньше родителя
    for index in range(len(entries) - 1, -1, -1):
        if children[index]:
            starts[index] = starts[children[index][0]]
            stops[index] = stops[children[index][-1]]

    nodes = tuple(
        TreeNode(
            measure=measure,
            level=level,
            parent=parent,
            children=tuple(children[index]),
            leaf_start=starts[index],
            leaf_stop=stops[index],
        )
        for index, (measure, level, parent) in enumerate(entries)
    )
    return Tree(nodes=nodes, name=name)


def dyadic_tree(depth: int) -> Tree:
    """
    Двоичное дерево глубины depth: узел уровня k имеет меру 2^(-k),
    листья: отрезки [j·2^(-depth), (j+1)·2^(-depth)) по порядку.
    """
    if depth < 1:
        raise ValueError(f"Глубина должна быть >= 1: {depth}")
    if depth > settings.max_tree_depth:
        raise DepthLimitError(f"Глубина {depth} > MAX_TREE_DEPTH={settings.max_tree_depth}")

    entries: list[_Entry] = []
    stack: list[tuple[int, int | None]] = [(0, None)]
    while stack:
        level, parent = stack.pop()
        index = len(entries)
        entries.append((Fraction(1, 2**level), level, parent))
        if level < depth:
            stack.append((level + 1, index))
            stack.append((level + 1, index))
    return _assemble(entries, name="dyadic")


def dyadic_comb_tree(depth: int, ratio: Number = Fraction(1, 2)) -> Tree:
    """
    Гребёнка из depth ячеек: листья слева направо:
    хвост [0, ρ^depth), затем ячейки C_(depth-1), ..., C_0, где C_k = [ρ^(k+1), ρ^k).

    При ρ = 1/2 это огрубление двоичного дерева: у функций, постоянных
    на ячейках, M_T совпадает с M_T на dyadic_tree(depth).
    """
    if depth < 1:
        raise ValueError(f"Число ячеек должно быть >= 1: {depth}")
    if not 0 < ratio < 1:
        raise ValueError(f"Отношение ρ вне (0, 1): {ratio}")

    exact = is_exact(ratio)
    spine = [ratio**k if exact else float(ratio) ** k for k in range(depth + 1)]
    entries: list[_Entry] = []
    for k in range(depth + 1):
        entries.append((spine[k], k, k - 1 if k > 0 else None))
    for k in range(depth - 1, -1, -1):
        entries.append((spine[k] - spine[k + 1], k + 1, k))
    return _assemble(entries, name="comb")


def build_tree(root: TreeNodeSchema | dict, name: str = "tree") -> Tree:
    """Дерево из вложенных записей {measure, children}; значения листьев игнорируются"""
    schema = root if isinstance(root, TreeNodeSchema) else TreeNodeSchema.model_validate(root)
    entries: list[_Entry] = []
    stack: list[tuple[TreeNodeSchema, int, int | None]] = [(schema, 0, None)]
    while stack:
        record, level, parent = stack.pop()
        index = len(entries)
        entries.append((as_number(record.measure, exact=True), level, parent))
        for child in reversed(record.children):
            stack.append((child, level + 1, index))
    return _assemble(entries, name=name)


def step_function(tree: Tree, values: Iterable[Number | str], exact: bool | None = None) -> StepFunction:
    """
    Ступенчатая функция по значениям на листьях.

    exact=None: точный режим, если дерево точное и значения не float.
    """
    raw = list(values)
    if exact is None:
        exact = tree.is_exact and not any(isinstance(v, float) for v in raw)
    return StepFunction(tree, tuple(as_number(v, exact) for v in raw))


def constant(tree: Tree, value: Number) -> StepFunction:
    return step_function(tree, [value] * tree.leaf_count)


def integrate(phi: StepFunction, exponent: float = 1) -> Number:
    """Σ value^exponent · μ(атома); при exponent = 1 в точном режиме результат: Fraction"""
    if not 0 < exponent <= 1:
        raise ValueError(f"Показатель вне (0, 1]: {exponent}")
    if exponent == 1:
        return exact_dot(phi.values, phi.tree.leaf_measures)
    return math.fsum(
        v**exponent * mu for v, mu in zip(phi.float_values, phi.tree.float_leaf_measures) if v > 0
    )


def refine(phi: StepFunction) -> StepFunction:
    """Вложить функцию с двоичного дерева глубины m в глубину m+1 (каждый лист делится пополам)"""
    if phi.tree.name != "dyadic":
        raise ValueError(f"refine определён только для двоичных деревьев, получено {phi.tree.name!r}")
    finer = dyadic_tree(phi.tree.depth + 1)
    return StepFunction(finer, tuple(v for value in phi.values for v in (value, value)))


def expand_to_dyadic(phi: StepFunction) -> StepFunction:
    """
    Перенести функцию с гребёнки ρ = 1/2 на dyadic_tree той же глубины.

    Лист j двоичного дерева лежит в ячейке с позицией j.bit_length()
    в порядке листьев гребёнки (позиция 0: хвост).
    """
    tree = phi.tree
    if tree.name != "comb" or tree.leaf_measures[0] != Fraction(1, 2**tree.depth):
        raise ValueError("expand_to_dyadic ожидает гребёнку с отношением 1/2")
    dyadic = dyadic_tree(tree.depth)
    return StepFunction(dyadic, tuple(phi.values[j.bit_length()] for j in range(dyadic.leaf_count)))


def tree_to_schema(tree: Tree, values: Sequence[Number] | None = None) -> TreeNodeSchema:
    """Вложенные записи узлов; меры и значения: точные строки "p/q" или 17 значащих цифр"""
    records: list[dict] = [
        {"measure": render_exact(node.measure), "children": []} for node in tree.nodes
    ]
    if values is not None:
        for position, index in enumerate(tree.leaves):
            records[index]["value"] = render_exact(values[position])
    for index, node in enumerate(tree.nodes):
        if node.parent is not None:
            records[node.parent]["children"].append(records[index])
    return TreeNodeSchema.model_validate(records[0])


def step_function_to_schema(phi: StepFunction) -> TreeNodeSchema:
    return tree_to_schema(phi.tree, phi.values)


def step_function_from_schema(root: TreeNodeSchema | dict) -> StepFunction:
    """Обратное к step_function_to_schema; у каждого листа должно быть значение"""
    schema = root if isinstance(root, TreeNodeSchema) else TreeNodeSchema.model_validate(root)
    tree = build_tree(schema)
    values: list[str] = []
    stack = [schema]
    while stack:
        record = stack.pop()
        if not record.children:
            if record.value is None:
                raise ValueError("У листа нет значения")
            values.append(record.value)
        stack.extend(reversed(record.children))
    return step_function(tree, values, exact=True)

