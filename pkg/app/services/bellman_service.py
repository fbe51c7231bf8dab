"""
Функция Беллмана B_q(f, h) = h·ω_q(f^q/h) и всё, что нужно для её проверки.

- H_q(z) = (1-q)z^q + q·z^(q-1), строго возрастает на [1, ∞);
- ω_q(z) = [H_q^(-1)(z)]^q, обратная функция: scipy brentq в расширяемой скобке;
- оператор Харди g ↦ (1/t)∫_0^t g в замкнутой форме для степенного и ступенчатого профилей;
- цепочка неравенств верхней оценки как исполнимые проверки.
"""
from dataclasses import dataclass
import bisect
import logging
import math

import numpy as np
from pydantic import ValidationError
from scipy.optimize import root_scalar

from config import settings
from app.core.exceptions import InadmissiblePointError
from app.core.numeric import Number, close, leq, power
from app.core.quadrature import adaptive_integral
from app.models import BellmanPoint, MaximalResult, MonotoneProfile, PowerProfile, StepFunction
from app.schemas import (
    ChainReport,
    CheckReport,
    ExtremalProfileReport,
    HardyIdentityReport,
    ReductionReport,
    UpperBoundReport,
)
from app.services.maximal_service import maximal_integral, maximal_operator
from app.services.tree_service import integrate

logger = logging.getLogger(__name__)

# z из [1 - ε, 1) считается ошибкой округления и заменяется на 1
_ROUNDING_EPS = 1e-9


# === Специальные функции ===

def _check_q(q: float) -> None:
    if not 0 < q < 1:
        raise ValueError(f"q={q} вне (0, 1)")


def _clamp_z(z: float) -> float:
    if z >= 1:
        return z
    if z >= 1 - _ROUNDING_EPS:
        logger.warning(f"z={z!r} < 1 в пределах округления, заменено на 1")
        return 1.0
    raise ValueError(f"z={z} < 1")


def hq_eval(q: float, z: float) -> float:
    """H_q(z) = (1-q)z^q + q·z^(q-1)"""
    _check_q(q)
    if z < 1:
        raise ValueError(f"z={z} < 1")
    return (1 - q) * z**q + q * z ** (q - 1)


def _log_hq(q: float, s: float) -> float:
    """ln H_q(e^s) = qs + ln(1 - q(1 - e^(-s))) без вычисления e^s"""
    return q * s + math.log1p(q * math.expm1(-s))


def _log_hq_inverse(q: float, z: float) -> float:
    """
    Корень s >= 0 уравнения H_q(e^s) = z.

    Скобка [1, z^(1/q) + 1] по c берётся в логарифмах и расширяется удвоением c,
    пока H_q на правом конце не превысит z.
    """
    _check_q(q)
    z = _clamp_z(float(z))
    if z == 1:
        return 0.0
    log_z = math.log(z)
    upper = log_z / q + math.log1p(math.exp(-log_z / q))
    while _log_hq(q, upper) < log_z:
        upper += math.log(2)
    solution = root_scalar(
        lambda s: _log_hq(q, s) - log_z,
        bracket=(0.0, upper),
        method="brentq",
        xtol=settings.root_xtol,
        rtol=settings.root_rtol,
    )
    if not solution.converged:
        raise ValueError(f"brentq не сошёлся для z={z}, q={q}: {solution.flag}")
    return solution.root


def hq_inverse(q: float, z: float) -> float:
    """Корень c >= 1 уравнения H_q(c) = z; ValueError, если c не представимо во float"""
    s = _log_hq_inverse(q, z)
    if s == 0:
        return 1.0
    try:
        return math.exp(s)
    except OverflowError as exc:
        raise ValueError(f"H_q^(-1)({z}) для q={q} не представимо во float") from exc


def omega_q(q: float, z: float) -> float:
    """ω_q(z) = [H_q^(-1)(z)]^q = exp(q·ln c); ω_q(1) = 1 точно"""
    s = _log_hq_inverse(q, z)
    return 1.0 if s == 0 else math.exp(q * s)


def make_point(q: float, f: float, h: float) -> BellmanPoint:
    try:
        return BellmanPoint(q=q, f=f, h=h)
    except ValidationError as exc:
        raise InadmissiblePointError(f"Недопустимая точка (q={q}, f={f}, h={h}): {exc}") from exc


def bellman_value(point: BellmanPoint) -> float:
    """B_q(f, h) = h·ω_q(f^q/h)"""
    return point.h * omega_q(point.q, point.z)


def bellman_curve(q: float, samples: int, z_max: float = 100.0) -> list[tuple[float, float]]:
    """(z, ω_q(z)) на равномерной сетке [1, z_max]"""
    if samples < 2:
        raise ValueError(f"Нужно хотя бы 2 точки: {samples}")
    return [(float(z), omega_q(q, float(z))) for z in np.linspace(1.0, z_max, samples)]


# === Оператор Харди ===

@dataclass(frozen=True, slots=True)
class PowerHardy:
    """Харди g для g = K·t^(-1+1/c): (1/t)∫_0^t g = c·g(t)"""
    profile: PowerProfile

    def __call__(self, t: float) -> float:
        return self.profile.c * self.profile(t)

    def power_integral(self, q: float, a: float = 0.0, b: float = 1.0) -> float:
        """∫_a^b (Харди g)^q = c^q ∫_a^b g^q"""
        return self.profile.c**q * self.profile.power_integral(q, a, b)

    def weighted_integral(self, q: float) -> float:
        """∫_0^1 g·(Харди g)^(q-1) = c^(q-1) ∫ g^q"""
        return self.profile.c ** (q - 1) * self.profile.power_integral(q)


@dataclass(frozen=True, slots=True)
class PiecewiseHardy:
    """
    Харди ступенчатого профиля: A_i + B_i/t на (t_(i-1), t_i],
    A_i = v_i, B_i = ∫_0^(t_(i-1)) g - v_i·t_(i-1) >= 0; на первом куске B = 0.
    """
    breakpoints: tuple[Number, ...]
    coefficients: tuple[tuple[Number, Number], ...]

    def pieces(self):
        return zip(self.breakpoints[:-1], self.breakpoints[1:], self.coefficients)

    def __call__(self, t: Number) -> Number:
        index = bisect.bisect_left(self.breakpoints, t)
        index = min(max(index, 1), len(self.coefficients))
        a_coef, b_coef = self.coefficients[index - 1]
        return a_coef + b_coef / t

    def evaluate(self, t: np.ndarray) -> np.ndarray:
        """Векторное вычисление на массиве точек из (0, 1]"""
        bounds = np.array([float(b) for b in self.breakpoints])
        index = np.clip(np.searchsorted(bounds, t, side="left"), 1, len(self.coefficients)) - 1
        a_coef = np.array([float(a) for a, _ in self.coefficients])
        b_coef = np.array([float(b) for _, b in self.coefficients])
        return a_coef[index] + b_coef[index] / t

    def _piece_integral(self, lo: float, hi: float, a_coef: float, b_coef: float, e: float) -> float:
        """∫_lo^hi (A + B/t)^e"""
        if b_coef == 0:
            return a_coef**e * (hi - lo) if a_coef > 0 else 0.0
        if a_coef == 0:
            return b_coef**e * (hi ** (1 - e) - lo ** (1 - e)) / (1 - e)
        value, _ = adaptive_integral(lambda t: (a_coef + b_coef / t) ** e, lo, hi)
        return value

    def power_integral(self, q: float, a: float = 0.0, b: float = 1.0) -> float:
        """∫_a^b (Харди g)^q по кускам"""
        total = 0.0
        for lo, hi, (a_coef, b_coef) in self.pieces():
            left, right = max(float(lo), a), min(float(hi), b)
            if right <= left:
                continue
            total += self._piece_integral(left, right, float(a_coef), float(b_coef), q)
        return total

    def weighted_integral(self, q: float) -> float:
        """∫_0^1 g·(Харди g)^(q-1); на куске g = A_i, нулевые куски не дают вклада"""
        total = 0.0
        for lo, hi, (a_coef, b_coef) in self.pieces():
            if a_coef == 0:
                continue
            total += float(a_coef) * self._piece_integral(
                float(lo), float(hi), float(a_coef), float(b_coef), q - 1
            )
        return total


Hardy = PowerHardy | PiecewiseHardy


def hardy_operator(profile: MonotoneProfile | PowerProfile) -> Hardy:
    """t ↦ (1/t)∫_0^t g в замкнутой форме; для точного профиля коэффициенты: Fraction"""
    if isinstance(profile, PowerProfile):
        return PowerHardy(profile)
    coefficients = []
    prefix: Number = 0
    for lo, hi, value in profile.pieces():
        coefficients.append((value, prefix - value * lo))
        prefix += value * (hi - lo)
    return PiecewiseHardy(profile.breakpoints, tuple(coefficients))


def power_profile_integral(profile: PowerProfile, exponent: float, a: float = 0.0, b: float = 1.0) -> float:
    """∫_a^b g^e в замкнутой форме"""
    return profile.power_integral(exponent, a, b)


def hardy_identity_check(
    profile: MonotoneProfile | PowerProfile,
    q: float,
    tolerance: float = 1e-8,
) -> HardyIdentityReport:
    """
    ∫_0^1 (Харди g)^q = f^q/(1-q) - q/(1-q) ∫_0^1 g·(Харди g)^(q-1), f = ∫_0^1 g
    """
    _check_q(q)
    hardy = hardy_operator(profile)
    mass = float(profile.mass())
    lhs = hardy.power_integral(q)
    rhs = (mass**q - q * hardy.weighted_integral(q)) / (1 - q)
    error = abs(lhs - rhs)
    return HardyIdentityReport(lhs=lhs, rhs=rhs, abs_error=error, tolerance=tolerance, holds=error <= tolerance)


# === Экстремальный профиль ===

def extremal_profile(point: BellmanPoint) -> PowerProfile:
    """g = K·t^(-1+1/c) с c = H_q^(-1)(f^q/h), K = f/c"""
    c = hq_inverse(point.q, point.z)
    return PowerProfile(K=point.f / c, c=c)


def extremal_profile_check(point: BellmanPoint) -> ExtremalProfileReport:
    """∫g = f, ∫g^q = h, коэффициент Харди равен c, ∫(Харди g)^q = B_q(f, h)"""
    g = extremal_profile(point)
    mass = g.mass()
    power_integral = g.power_integral(point.q)
    # (1/t)∫_0^t g / g(t) в t = 1/2
    coefficient = g.antiderivative(0.5) / 0.5 / g(0.5)
    sharpness = PowerHardy(g).power_integral(point.q)
    bellman = bellman_value(point)

    mass_error = abs(mass - point.f)
    power_error = abs(power_integral - point.h) / point.h
    holds = (
        mass_error <= 1e-12 * point.f
        and power_error <= 1e-10
        and close(coefficient, g.c, 1e-12)
        and abs(sharpness - bellman) <= 1e-8
    )
    return ExtremalProfileReport(
        K=g.K,
        c=g.c,
        mass=mass,
        mass_error=mass_error,
        power_integral=power_integral,
        power_rel_error=power_error,
        hardy_coefficient=coefficient,
        hardy_sharpness=sharpness,
        bellman=bellman,
        holds=holds,
    )


# === Цепочка верхней оценки ===

def _moments(q: float, phi: StepFunction) -> tuple[Number, float]:
    if phi.is_zero:
        raise ValueError("φ тождественно равна нулю")
    return integrate(phi, 1), float(integrate(phi, q))


def _point_for(q: float, mass: Number, h: float) -> BellmanPoint:
    f = float(mass)
    # h <= f^q по Гёльдеру; отрезаем только шум округления
    return make_point(q, f, min(h, f**q))


def upper_bound_check(
    q: float,
    phi: StepFunction,
    *,
    maximal: MaximalResult | None = None,
    tol: float | None = None,
) -> UpperBoundReport:
    """I = ∫(M_T φ)^q dμ <= B_q(∫φ, ∫φ^q)"""
    mass, h = _moments(q, phi)
    point = _point_for(q, mass, h)
    integral = maximal_integral(q, phi, maximal=maximal)
    bound = bellman_value(point)
    return UpperBoundReport(
        lhs=integral,
        rhs=bound,
        holds=leq(integral, bound, tol),
        q=q,
        f=point.f,
        h=point.h,
        z=point.z,
    )


def bellman_reduction_check(q: float, z: float, u: float, tol: float | None = None) -> ReductionReport:
    """(1-q)u + q·u^(1-1/q) <= z при u >= 1 влечёт u <= ω_q(z); при u < 1 вывод тривиален"""
    _check_q(q)
    premise = u < 1 or leq((1 - q) * u + q * u ** (1 - 1 / q), z, tol)
    omega = omega_q(q, z)
    holds = not premise or leq(u, omega, tol)
    return ReductionReport(lhs=u, rhs=omega, holds=holds, z=z, premise=premise)


def intermediate_chain_check(
    q: float,
    phi: StepFunction,
    *,
    maximal: MaximalResult | None = None,
    tol: float | None = None,
) -> ChainReport:
    """
    I <= f^q/(1-q) - q/(1-q)·IV,   IV >= h^(1/q)·I^(1-1/q),
    где IV = ∫ φ (M_T φ)^(q-1) dμ; затем редукция u = I/h <= ω_q(f^q/h).
    """
    mass, h = _moments(q, phi)
    result = maximal if maximal is not None else maximal_operator(phi)
    integral = maximal_integral(q, phi, maximal=result)
    iv = math.fsum(
        v * m * mu
        for v, m, mu in zip(phi.float_values, result.powered(q - 1), phi.tree.float_leaf_measures)
        if v > 0
    )
    f = float(mass)
    chain_bound = (f**q - q * iv) / (1 - q)
    holder_bound = h ** (1 / q) * integral ** (1 - 1 / q)
    point = _point_for(q, mass, h)
    reduction = bellman_reduction_check(q, point.z, integral / point.h, tol)
    return ChainReport(
        q=q,
        integral=integral,
        iv=iv,
        chain_bound=chain_bound,
        holder_bound=holder_bound,
        chain_holds=leq(integral, chain_bound, tol),
        holder_holds=leq(holder_bound, iv, tol),
        reduction_holds=reduction.holds,
    )


def holder_product_check(
    q: float,
    phi1: StepFunction,
    phi2: StepFunction,
    tol: float | None = None,
) -> CheckReport:
    """∫(φ₁φ₂)^q <= (∫φ₁)^q · (∫φ₂^(q/(1-q)))^(1-q)"""
    _check_q(q)
    if phi1.tree.leaf_measures != phi2.tree.leaf_measures:
        raise ValueError("φ₁ и φ₂ заданы на разных деревьях")
    measures = phi1.tree.float_leaf_measures
    lhs = math.fsum(
        (a * b) ** q * mu for a, b, mu in zip(phi1.float_values, phi2.float_values, measures) if a * b > 0
    )
    dual = q / (1 - q)
    second = math.fsum(b**dual * mu for b, mu in zip(phi2.float_values, measures) if b > 0)
    rhs = power(integrate(phi1, 1), q) * second ** (1 - q)
    return CheckReport(lhs=float(lhs), rhs=float(rhs), holds=leq(lhs, rhs, tol))

