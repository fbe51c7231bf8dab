"""
Исключения предметной области.

Все наследуются от ValueError: вызывающий код может ловить их общим except.
"""


class TreeStructureError(ValueError):
    """Дерево нарушает условия (i)-(ii): меры, число детей, сумма мер детей"""


class DepthLimitError(ValueError):
    """Запрошенная глубина больше настроенного максимума"""


class EnumerationLimitError(ValueError):
    """Слишком много листьев для полного перебора перестановок"""


class InadmissiblePointError(ValueError):
    """Параметры (q, f, h) не удовлетворяют 0 < h <= f^q"""
