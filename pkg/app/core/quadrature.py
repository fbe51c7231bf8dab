"""
Квадратуры для кусочно-гладких подынтегральных функций.

- adaptive_integral: адаптивный scipy.integrate.quad с предупреждением о погрешности;
- jacobi_integral: векторизованные правила Гаусса–Якоби для множества кусков,
  у которых подынтегральная функция ведёт себя как (b-t)^alpha (t-a)^beta у концов.
"""
from functools import lru_cache
from typing import Callable
import logging
import warnings

import numpy as np
from scipy.integrate import IntegrationWarning, quad
from scipy.special import roots_jacobi

from config import settings

logger = logging.getLogger(__name__)


def adaptive_integral(
    func: Callable[[float], float],
    a: float,
    b: float,
    abs_tol: float | None = None,
) -> tuple[float, float]:
    """
    Адаптивный интеграл на [a, b].

    Returns:
        (значение, оценка погрешности)
    """
    if b <= a:
        return 0.0, 0.0
    abs_tol = settings.quad_abs_tol if abs_tol is None else abs_tol
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IntegrationWarning)
        value, error = quad(func, a, b, epsabs=abs_tol, epsrel=1e-12, limit=settings.quad_limit)
    if caught and error > abs_tol:
        logger.warning(f"quad на [{a:.6g}, {b:.6g}]: погрешность {error:.3g} > {abs_tol:.3g}")
    return value, error


@lru_cache(maxsize=64)
def _jacobi_rule(order: int, alpha: float, beta: float) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = roots_jacobi(order, alpha, beta)
    return nodes, weights


def jacobi_integral(
    func: Callable[[np.ndarray], np.ndarray],
    a: np.ndarray,
    b: np.ndarray,
    alpha: float = 0.0,
    beta: float = 0.0,
    order: int | None = None,
) -> np.ndarray:
    """
    Интегралы ∫_a^b func(t) dt сразу по массиву кусков.

    func должна вести себя как s(t)·(b-t)^alpha·(t-a)^beta с гладкой s;
    гладкая часть восстанавливается делением на вес в узлах.

    Args:
        func: векторизованная функция, принимает массив формы (P, order)
        a, b: концы кусков, массивы формы (P,)
        alpha, beta: показатели особенностей у правого и левого конца (> -1)

    Returns:
        массив формы (P,) со значениями интегралов
    """
    order = settings.jacobi_order if order is None else order
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0:
        return np.zeros(0)
    nodes, weights = _jacobi_rule(order, float(alpha), float(beta))
    half = (b - a) / 2.0
    t = a[:, None] + half[:, None] * (nodes[None, :] + 1.0)
    weight = (b[:, None] - t) ** alpha * (t - a[:, None]) ** beta
    with np.errstate(divide="ignore", invalid="ignore"):
        smooth = np.where(weight > 0, func(t) / weight, 0.0)
    return half ** (1.0 + alpha + beta) * (smooth @ weights)
