"""
Профили на (0, 1]: невозрастающие ступенчатые (убывающие перестановки)
и степенной экстремальный профиль g(t) = K·t^(-1+1/c).
"""
from dataclasses import dataclass
from typing import Iterator
import bisect
import math

from pydantic import BaseModel, ConfigDict, Field

from config import settings
from app.core.numeric import Number, is_exact


@dataclass(frozen=True, slots=True)
class MonotoneProfile:
    """
    Невозрастающая ступенчатая функция на (0, 1], непрерывная слева.

    breakpoints: 0 = t_0 < t_1 < ... < t_N = 1
    values: v_1 >= v_2 >= ... >= v_N >= 0, значение v_i на (t_{i-1}, t_i]
    """
    breakpoints: tuple[Number, ...]
    values: tuple[Number, ...]

    def __post_init__(self) -> None:
        if len(self.breakpoints) != len(self.values) + 1 or not self.values:
            raise ValueError("Число точек разбиения должно быть на 1 больше числа значений")
        if self.breakpoints[0] != 0:
            raise ValueError("Первая точка разбиения должна быть 0")
        last = self.breakpoints[-1]
        if abs(float(last) - 1.0) > settings.measure_tol:
            raise ValueError(f"Последняя точка разбиения {last} != 1")
        for lo, hi in zip(self.breakpoints[:-1], self.breakpoints[1:]):
            if not lo < hi:
                raise ValueError(f"Точки разбиения не возрастают: {lo} >= {hi}")
        for left, right in zip(self.values[:-1], self.values[1:]):
            if left < right:
                raise ValueError(f"Значения профиля возрастают: {left} < {right}")
        if self.values[-1] < 0:
            raise ValueError("Значения профиля должны быть неотрицательными")

    @classmethod
    def constant(cls, value: Number) -> "MonotoneProfile":
        return cls((0, 1), (value,))

    @property
    def is_exact(self) -> bool:
        return all(is_exact(x) for x in (*self.breakpoints, *self.values))

    def pieces(self) -> Iterator[tuple[Number, Number, Number]]:
        """Куски (t_{i-1}, t_i, v_i)"""
        return zip(self.breakpoints[:-1], self.breakpoints[1:], self.values)

    def __call__(self, t: float) -> Number:
        if not 0 < t <= self.breakpoints[-1] + settings.measure_tol:
            raise ValueError(f"t={t} вне (0, 1]")
        # Fraction и float сравниваются точно
        index = bisect.bisect_left(self.breakpoints, t)
        return self.values[min(index, len(self.values)) - 1]

    def mass(self) -> Number:
        """∫_0^1 профиля"""
        return sum(((hi - lo) * v for lo, hi, v in self.pieces()), start=0)


class PowerProfile(BaseModel):
    """g(t) = K·t^(-1+1/c) на (0, 1], K > 0, c >= 1"""
    model_config = ConfigDict(frozen=True)

    K: float = Field(gt=0, description="Множитель K")
    c: float = Field(ge=1, description="Показатель c (собственное число оператора Харди)")

    @property
    def exponent(self) -> float:
        """Показатель степени -1 + 1/c"""
        return -1.0 + 1.0 / self.c

    def __call__(self, t: float) -> float:
        return self.K * t ** self.exponent

    def antiderivative(self, t: float) -> float:
        """∫_0^t g = K·c·t^(1/c)"""
        return self.K * self.c * t ** (1.0 / self.c)

    def mass(self) -> float:
        """∫_0^1 g = K·c"""
        return self.K * self.c

    def power_integral(self, e: float, a: float = 0.0, b: float = 1.0) -> float:
        """
        ∫_a^b g^e в замкнутой форме.

        При a = 0, b = 1: K^e / ((1-e) + e/c); сходится, т.к. e·(1-1/c) < 1.
        """
        growth = 1.0 + e * self.exponent
        return self.K ** e * (b ** growth - a ** growth) / growth

    def cell_average(self, a: float, b: float) -> float:
        """Среднее g по (a, b]; разность b^(1/c) - a^(1/c) считается через expm1"""
        if a == 0:
            return self.antiderivative(b) / b
        gap = a ** (1.0 / self.c) * math.expm1(math.log(b / a) / self.c)
        return self.K * self.c * gap / (b - a)

