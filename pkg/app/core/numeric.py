"""
Арифметика в двух режимах: точный (Fraction) и float.

Линейные величины (меры атомов, значения, средние) остаются Fraction,
если все входы точные. Степени с вещественным показателем q всегда
считаются во float от точного основания.
"""
from fractions import Fraction
from typing import Iterable
import math

from config import settings

Number = Fraction | float | int


def is_exact(value: Number) -> bool:
    """Точное ли число (Fraction или int, но не bool/float)"""
    return isinstance(value, (Fraction, int)) and not isinstance(value, bool)


def as_number(value: Number | str, exact: bool) -> Number:
    """
    Привести значение к нужному режиму.

    В точном режиме float переводится в Fraction без потерь
    (каждый float: двоично-рациональное число), строки "3/8" и "0.125" понимаются как есть.
    """
    if exact:
        return Fraction(value)
    if isinstance(value, str):
        return float(Fraction(value))
    return float(value)


def power(base: Number, exponent: float) -> Number:
    """base^exponent; при exponent == 1 точность сохраняется"""
    if base < 0:
        raise ValueError(f"Отрицательное основание степени: {base}")
    if exponent == 1:
        return base
    if base == 0:
        return 0.0 if exponent > 0 else math.inf
    return float(base) ** exponent


def leq(lhs: Number, rhs: Number, tol: float | None = None, abs_tol: float = 0.0) -> bool:
    """
    lhs <= rhs с допуском.

    Если обе стороны точные: сравнение без допуска.
    Иначе допуск относительный: tol * max(|lhs|, |rhs|), плюс abs_tol
    (для величин, полученных квадратурой).
    """
    if is_exact(lhs) and is_exact(rhs):
        return lhs <= rhs
    tol = settings.compare_tol if tol is None else tol
    lhs_f, rhs_f = float(lhs), float(rhs)
    return lhs_f <= rhs_f + tol * max(abs(lhs_f), abs(rhs_f)) + abs_tol


def close(lhs: Number, rhs: Number, tol: float | None = None, abs_tol: float = 0.0) -> bool:
    """Равенство с теми же допусками"""
    return leq(lhs, rhs, tol, abs_tol) and leq(rhs, lhs, tol, abs_tol)


def render_float(value: Number) -> str:
    """17 значащих цифр: float восстанавливается из строки без потерь"""
    return format(float(value), ".17g")


def render_exact(value: Number) -> str:
    """Fraction как "p/q" (или целое), float: через render_float"""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, int):
        return str(value)
    return render_float(value)


def exact_sum(values: Iterable[Number]) -> Number:
    """
    Σ values; для точных слагаемых: целые числители над общим знаменателем,
    без сокращения на каждом шаге. Если есть float, сумма через math.fsum.
    """
    items = list(values)
    if not all(is_exact(v) for v in items):
        return math.fsum(float(v) for v in items)
    if not items:
        return Fraction(0)
    denominator = math.lcm(*(v.denominator for v in items))
    return Fraction(sum(v.numerator * (denominator // v.denominator) for v in items), denominator)


def exact_dot(values: Iterable[Number], weights: Iterable[Number]) -> Number:
    """Σ v·w так же, как exact_sum"""
    pairs = list(zip(values, weights))
    if not all(is_exact(v) and is_exact(w) for v, w in pairs):
        return math.fsum(float(v) * float(w) for v, w in pairs)
    if not pairs:
        return Fraction(0)
    denominator = math.lcm(*(v.denominator * w.denominator for v, w in pairs))
    return Fraction(
        sum(v.numerator * w.numerator * (denominator // (v.denominator * w.denominator)) for v, w in pairs),
        denominator,
    )
