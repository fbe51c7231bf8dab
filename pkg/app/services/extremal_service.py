"""
Почти экстремальные последовательности φ_m и невязки.

φ_m: средние степенного профиля g(t) = K·t^(-1+1/c) по ячейкам гребёнки:
хвост [0, ρ^N) и ячейки [ρ^(k+1), ρ^k). Усреднение по ячейкам сохраняет ∫φ_m = f,
а на ячейке C_k максимальная функция равна префиксному среднему (1/ρ^k)∫_0^(ρ^k) g.

Правила ячеек:
- DYADIC: ρ = 1/2, N = m (та же функция на двоичном дереве глубины m);
- GEOMETRIC: ρ_m = 1 - 2^(-m/2), N_m = ⌈m·ln2 / (-ln ρ_m)⌉, хвост <= 2^(-m).
"""
from fractions import Fraction
from typing import Callable, Sequence
import logging
import math

import numpy as np

from config import settings
from app.core.exceptions import DepthLimitError
from app.core.numeric import Number, close, leq, power
from app.core.quadrature import adaptive_integral, jacobi_integral
from app.models import (
    BellmanPoint,
    CellRule,
    MaximalResult,
    MonotoneProfile,
    PowerProfile,
    SpikeSequenceParams,
    StepFunction,
)
from app.schemas import (
    CheckReport,
    HolderSplitReport,
    PowerGapReport,
    RearrangedResidual,
    ResidualReport,
    SmallKReport,
    SmallKRow,
)
from app.services.bellman_service import (
    PowerHardy,
    bellman_value,
    extremal_profile,
    hardy_operator,
    make_point,
)
from app.services.maximal_service import maximal_integral, maximal_operator
from app.services.rearrange_service import decreasing_rearrangement, restricted_integral
from app.services.tree_service import dyadic_comb_tree, expand_to_dyadic, integrate

logger = logging.getLogger(__name__)


# === Построение последовательности ===

def spike_params(point: BellmanPoint, depth: int, rule: CellRule = CellRule.DYADIC) -> SpikeSequenceParams:
    """Параметры φ_m: c и K берутся из экстремального профиля точки"""
    if depth > settings.max_spike_depth:
        raise DepthLimitError(f"Глубина {depth} > MAX_SPIKE_DEPTH={settings.max_spike_depth}")
    g = extremal_profile(point)
    return SpikeSequenceParams(point=point, depth=depth, rule=rule, c=g.c, K=g.K)


def cell_layout(params: SpikeSequenceParams) -> tuple[Number, int]:
    """(ρ, N): отношение гребёнки и число ячеек"""
    m = params.depth
    if params.rule == CellRule.DYADIC:
        return Fraction(1, 2), m
    gap = 2.0 ** (-m / 2)
    ratio = 1.0 - gap
    cells = math.ceil(m * math.log(2) / -math.log1p(-gap))
    return ratio, cells


def build_spike_sequence(params: SpikeSequenceParams, expand: bool = False) -> StepFunction:
    """
    φ_m на гребёнке: хвост w_m = (1/ρ^N)∫_0^(ρ^N) g, на C_k: среднее g по ячейке.

    Для DYADIC гребёнка ρ = 1/2 огрубляет двоичное дерево глубины m: на каждом двоичном листе
    φ_m и M_T φ_m те же, что на содержащей его ячейке, но уровни argmax считаются по гребёнке.
    expand=True (только DYADIC) переносит φ_m на само двоичное дерево глубины m.
    """
    ratio, cells = cell_layout(params)
    tree = dyadic_comb_tree(cells, ratio)
    g = PowerProfile(K=params.K, c=params.c)

    if params.c == 1:
        values = [g.K] * tree.leaf_count
    else:
        rho = float(ratio)
        values = [g.cell_average(0.0, rho**cells)]
        values.extend(g.cell_average(rho ** (k + 1), rho**k) for k in range(cells - 1, -1, -1))
    phi = StepFunction(tree, tuple(values))

    if expand:
        if params.rule != CellRule.DYADIC:
            raise ValueError("Перенос на двоичное дерево возможен только для DYADIC")
        return expand_to_dyadic(phi)
    return phi


def closed_form_maximal(params: SpikeSequenceParams) -> tuple[float, ...]:
    """M_T φ_m по листьям гребёнки: H(ρ^N) на хвосте и H(ρ^k) на C_k, H(t) = cK·t^(1/c-1)"""
    ratio, cells = cell_layout(params)
    rho = float(ratio)
    scale = params.c * params.K

    def prefix_average(t: float) -> float:
        return scale * t ** (1 / params.c - 1)

    return (prefix_average(rho**cells), *(prefix_average(rho**k) for k in range(cells - 1, -1, -1)))


def _growth(q: float, c: float) -> float:
    """a = 1 - q + q/c"""
    return 1 - q + q / c


def closed_form_integral(params: SpikeSequenceParams) -> float:
    """
    I_m = (cK)^q · [(1-ρ)(1-ρ^(Na))/(1-ρ^a) + ρ^(Na)],   a = 1 - q + q/c.
    """
    q = params.point.q
    ratio, cells = cell_layout(params)
    rho = float(ratio)
    a = _growth(q, params.c)
    tail = rho ** (cells * a)
    return (params.c * params.K) ** q * ((1 - rho) * (1 - tail) / (1 - rho**a) + tail)


def limit_ratio(point: BellmanPoint, rule: CellRule) -> float:
    """lim I_m / B: для DYADIC a / (2(1 - 2^(-a))), для GEOMETRIC 1"""
    if rule == CellRule.GEOMETRIC:
        return 1.0
    a = _growth(point.q, extremal_profile(point).c)
    return a / (2 * (1 - 2.0 ** (-a)))


# === Невязки ===

def eigenfunction_residual(
    q: float,
    phi: StepFunction,
    c: float,
    *,
    maximal: MaximalResult | None = None,
) -> float:
    """Σ |M_T φ - c·φ|^q · μ(атома)"""
    inside, outside = eigenfunction_residual_split(q, phi, c, maximal=maximal)
    return inside + outside


def eigenfunction_residual_split(
    q: float,
    phi: StepFunction,
    c: float,
    *,
    maximal: MaximalResult | None = None,
) -> tuple[float, float]:
    """Вклады множеств {M_T φ >= cφ} и {M_T φ < cφ}"""
    if c <= 0:
        raise ValueError(f"c должно быть положительным: {c}")
    result = maximal if maximal is not None else maximal_operator(phi)
    inside = outside = 0.0
    for m, v, mu in zip(result.maximal.values, phi.values, phi.tree.leaf_measures):
        diff = float(m) - c * float(v)
        if diff >= 0:
            inside += diff**q * float(mu)
        else:
            outside += (-diff) ** q * float(mu)
    return inside, outside


# Отрезок интегрирования: (a, b, alpha, beta, параметры подынтегральной функции)
_Segment = tuple[float, float, float, float, tuple[float, ...]]


def _integrate_segments(segments: list[_Segment], integrand: Callable[..., np.ndarray]) -> float:
    """
    Сумма интегралов по отрезкам.

    До ADAPTIVE_PIECE_LIMIT отрезков: адаптивный quad на каждом,
    иначе правила Гаусса–Якоби, сгруппированные по показателям особенностей.
    """
    if len(segments) <= settings.adaptive_piece_limit:
        total = 0.0
        for a, b, _, _, args in segments:
            value, _ = adaptive_integral(lambda t: float(integrand(t, *args)), a, b, settings.residual_abs_tol)
            total += value
        return total

    groups: dict[tuple[float, float], list[_Segment]] = {}
    for segment in segments:
        groups.setdefault((segment[2], segment[3]), []).append(segment)
    total = 0.0
    for (alpha, beta), group in sorted(groups.items()):
        a = np.array([s[0] for s in group])
        b = np.array([s[1] for s in group])
        args = [np.array([s[4][i] for s in group])[:, None] for i in range(len(group[0][4]))]
        values = jacobi_integral(lambda t: integrand(t, *args), a, b, alpha, beta)
        total += float(values.sum())
    return total


def _split(a: float, b: float, cut: float, q: float, left: float, args: tuple[float, ...]) -> list[_Segment]:
    """
    Отрезок [a, b] с нулём разности в cut: слева от нуля особенность (b-t)^q, справа (t-a)^q.
    Ноль, совпадающий с концом с точностью округления, относится к концу.
    """
    if math.isclose(cut, b, rel_tol=1e-9):
        return [(a, b, q, left, args)]
    if a > 0 and math.isclose(cut, a, rel_tol=1e-9):
        return [(a, b, 0.0, q, args)]
    if a < cut < b:
        return [(a, cut, q, left, args), (cut, b, 0.0, q, args)]
    return [(a, b, 0.0, left, args)]


def _cut_point(log_value: float) -> float:
    if log_value > 700:
        return math.inf
    if log_value < -700:
        return 0.0
    return math.exp(log_value)


# При больших c замена t = u^c во float не различает концы кусков
_SUBSTITUTION_MAX_C = 1e6


def _power_residual_direct(q: float, pieces: list[tuple[float, float, float]], g: PowerProfile) -> float:
    """
    ∫|P(t) - cK·t^(1/c-1)|^q dt по t; у нуля особенность t^(-(1-1/c)q),
    ноль разности в t* = (cK/P)^(c/(c-1)).
    """
    c, scale = g.c, g.c * g.K
    exponent = 1 / c - 1

    def integrand(t, value):
        return np.abs(value - scale * t**exponent) ** q

    segments: list[_Segment] = []
    for lo, hi, value in pieces:
        left = exponent * q if lo == 0 else 0.0
        cut = _cut_point(math.log(scale / value) * c / (c - 1)) if value > 0 else math.inf
        segments.extend(_split(lo, hi, cut, q, left, (value,)))
    return _integrate_segments(segments, integrand)


def _power_residual(q: float, pieces: list[tuple[float, float, float]], g: PowerProfile) -> float:
    """
    ∫|P(t) - c·g(t)|^q dt после замены t = u^c:
    c·|C·u^(c-1) - cK|^q · u^((c-1)(1-q)) на каждом куске, разрез в нуле разности.

    При c > _SUBSTITUTION_MAX_C куски [lo^(1/c), hi^(1/c)] сливаются в точку,
    и интеграл берётся по t без замены.
    """
    c, scale = g.c, g.c * g.K
    if c == 1:
        return sum(abs(value - g.K) ** q * (hi - lo) for lo, hi, value in pieces)
    if c > _SUBSTITUTION_MAX_C:
        return _power_residual_direct(q, pieces, g)
    smooth_power = (c - 1) * (1 - q)

    def integrand(u, value):
        return c * np.abs(value * u ** (c - 1) - scale) ** q * u**smooth_power

    segments: list[_Segment] = []
    for lo, hi, value in pieces:
        ua, ub = lo ** (1 / c), hi ** (1 / c)
        left = smooth_power if lo == 0 else 0.0
        cut = _cut_point(math.log(scale / value) / (c - 1)) if value > 0 else math.inf
        segments.extend(_split(ua, ub, cut, q, left, (value,)))
    return _integrate_segments(segments, integrand)


def _step_residual(q: float, profile: MonotoneProfile, g: MonotoneProfile) -> float:
    """∫|P(t) - Харди g(t)|^q по объединению точек разбиения; Харди g = A + B/t на кусках"""
    hardy = hardy_operator(g)
    p_bounds = np.array([float(b) for b in profile.breakpoints])
    g_bounds = np.array([float(b) for b in g.breakpoints])
    bounds = np.union1d(p_bounds, g_bounds)
    mids = (bounds[:-1] + bounds[1:]) / 2
    p_values = np.array([float(v) for v in profile.values])
    p_index = np.clip(np.searchsorted(p_bounds, mids) - 1, 0, len(p_values) - 1)
    g_index = np.clip(np.searchsorted(g_bounds, mids) - 1, 0, len(hardy.coefficients) - 1)
    a_coef = np.array([float(a) for a, _ in hardy.coefficients])[g_index]
    b_coef = np.array([float(b) for _, b in hardy.coefficients])[g_index]
    values = p_values[p_index]

    def integrand(t, value, a, b):
        return np.abs(a + b / t - value) ** q

    total = 0.0
    segments: list[_Segment] = []
    for lo, hi, value, a, b in zip(bounds[:-1], bounds[1:], values, a_coef, b_coef):
        if b == 0:
            total += abs(value - a) ** q * (hi - lo)
            continue
        cut = b / (value - a) if value > a else math.inf
        segments.extend(_split(float(lo), float(hi), cut, q, 0.0, (float(value), float(a), float(b))))
    return total + _integrate_segments(segments, integrand)


def rearranged_residual(
    q: float,
    phi: StepFunction,
    g: PowerProfile | MonotoneProfile,
    *,
    maximal: MaximalResult | None = None,
) -> RearrangedResidual:
    """
    ∫_0^1 |(M_T φ)*(t) - Харди g(t)|^q dt.

    Для степенного профиля Харди g = c·g, поэтому вариант против c·g совпадает.
    """
    result = maximal if maximal is not None else maximal_operator(phi)
    profile = result.distribution.rearranged()
    if isinstance(g, PowerProfile):
        pieces = [(float(lo), float(hi), float(v)) for lo, hi, v in profile.pieces()]
        value = _power_residual(q, pieces, g)
        return RearrangedResidual(residual=value, scaled_residual=value)
    return RearrangedResidual(residual=_step_residual(q, profile, g))


# === Исследование сходимости ===

def convergence_study(
    point: BellmanPoint,
    depths: Sequence[int],
    rule: CellRule = CellRule.GEOMETRIC,
    expand_limit: int = 10,
) -> list[ResidualReport]:
    """
    Для каждой глубины m: I_m общим оператором и по замкнутой формуле,
    отношения к B(f, h) и B(f, h_m), обе невязки.

    Для DYADIC при m <= expand_limit I_m дополнительно считается на полном двоичном дереве.
    """
    if any(b <= a for a, b in zip(depths[:-1], depths[1:])):
        raise ValueError(f"Глубины должны возрастать: {list(depths)}")
    q = point.q
    target = bellman_value(point)
    g = extremal_profile(point)

    reports: list[ResidualReport] = []
    for depth in depths:
        params = spike_params(point, depth, rule)
        phi = build_spike_sequence(params)
        result = maximal_operator(phi)
        value = maximal_integral(q, phi, maximal=result)
        closed = closed_form_integral(params)
        if not close(value, closed, 1e-9):
            logger.error(f"m={depth}: I_m={value!r} расходится с замкнутой формой {closed!r}")
        if rule == CellRule.DYADIC and depth <= min(expand_limit, settings.max_tree_depth):
            expanded = maximal_integral(q, expand_to_dyadic(phi))
            if not close(value, expanded, 1e-9):
                logger.error(f"m={depth}: I_m на гребёнке {value!r} != на двоичном дереве {expanded!r}")

        h_m = float(integrate(phi, q))
        f_m = float(integrate(phi, 1))
        own_target = bellman_value(make_point(q, f_m, min(h_m, f_m**q)))
        report = ResidualReport(
            depth=depth,
            rule=rule.value,
            cells=phi.tree.leaf_count - 1,
            integral=value,
            closed_form=closed,
            target=target,
            h_m=h_m,
            own_target=own_target,
            eigen_residual=eigenfunction_residual(q, phi, g.c, maximal=result),
            rearranged_residual=rearranged_residual(q, phi, g, maximal=result).residual,
        )
        logger.info(
            f"m={depth} ({rule.value}, {report.cells} ячеек): ratio={report.ratio:.6f}, "
            f"eigen={report.eigen_residual:.3e}, rearranged={report.rearranged_residual:.3e}"
        )
        reports.append(report)
    return reports


def small_k_limit_check(
    point: BellmanPoint,
    depths: Sequence[int],
    k_values: Sequence[float],
    rule: CellRule = CellRule.GEOMETRIC,
) -> SmallKReport:
    """
    ∫_0^k [(M_T φ_m)*]^q по глубинам m для убывающих k;
    каждое значение не больше ∫_0^k (Харди g)^q, а супремум по m падает ниже SMALL_K_THRESHOLD·h.
    """
    if any(not 0 < k <= 1 for k in k_values):
        raise ValueError("k должны лежать в (0, 1]")
    if any(b >= a for a, b in zip(k_values[:-1], k_values[1:])):
        raise ValueError(f"k должны убывать: {list(k_values)}")
    q = point.q
    hardy = PowerHardy(extremal_profile(point))
    profiles = []
    for depth in depths:
        phi = build_spike_sequence(spike_params(point, depth, rule))
        profiles.append(decreasing_rearrangement(maximal_operator(phi).maximal))

    rows = []
    for k in k_values:
        values = [restricted_integral(profile, q, k) for profile in profiles]
        bound = hardy.power_integral(q, 0.0, k)
        rows.append(SmallKRow(
            k=k,
            values=values,
            hardy_bound=bound,
            sup_value=max(values),
            holds=all(leq(v, bound) for v in values),
        ))
    sups = [row.sup_value for row in rows]
    threshold = settings.small_k_threshold * point.h
    return SmallKReport(
        rows=rows,
        threshold=threshold,
        decreasing=all(b <= a for a, b in zip(sups[:-1], sups[1:])),
        below_threshold=sups[-1] <= threshold,
    )


# === Элементарные неравенства ===

def holder_split_check(t: Number, t2: Number, s: Number, s2: Number, q: float, tol: float | None = None) -> HolderSplitReport:
    """t^q s^(1-q) + t'^q s'^(1-q) <= a^q b^(1-q), a = t + t', b = s + s'"""
    if min(t, t2, s, s2) < 0:
        raise ValueError("Аргументы должны быть неотрицательными")
    a, b = t + t2, s + s2
    if a <= 0 or b <= 0:
        raise ValueError(f"Нужно a = t + t' > 0 и b = s + s' > 0: a={a}, b={b}")
    lhs = power(t, q) * power(s, 1 - q) + power(t2, q) * power(s2, 1 - q)
    rhs = power(a, q) * power(b, 1 - q)
    proportional = t * b == s * a
    return HolderSplitReport(
        lhs=float(lhs),
        rhs=float(rhs),
        holds=leq(lhs, rhs, tol),
        equality=close(lhs, rhs, tol),
        proportional=proportional,
    )


def elementary_power_check(x: float, y: float, q: float) -> CheckReport:
    """0 < x^q - y^q <= (x - y)^q при x > y > 0"""
    if not x > y > 0:
        raise ValueError(f"Нужно x > y > 0: x={x}, y={y}")
    lhs = power(x, q) - power(y, q)
    rhs = power(x - y, q)
    return CheckReport(lhs=float(lhs), rhs=float(rhs), holds=lhs > 0 and leq(lhs, rhs))


def mean_value_power_check(x: float, y: float, p: float) -> CheckReport:
    """x^p - y^p <= p·x^(p-1)·(x - y) при x > y > 0, p > 1"""
    if not x > y > 0 or p <= 1:
        raise ValueError(f"Нужно x > y > 0 и p > 1: x={x}, y={y}, p={p}")
    lhs = float(x) ** p - float(y) ** p
    rhs = p * float(x) ** (p - 1) * float(x - y)
    return CheckReport(lhs=lhs, rhs=rhs, holds=leq(lhs, rhs))


def primitive_holder_check(x: Number, y: Number, s: Number, t: Number, p: float) -> HolderSplitReport:
    """(x+y)^p/(s+t)^(p-1) <= x^p/s^(p-1) + y^p/t^(p-1); равенство при x/s = y/t"""
    if min(x, y) < 0 or min(s, t) <= 0 or p <= 1:
        raise ValueError("Нужно x, y >= 0, s, t > 0, p > 1")
    lhs = float(x + y) ** p / float(s + t) ** (p - 1)
    rhs = float(x) ** p / float(s) ** (p - 1) + float(y) ** p / float(t) ** (p - 1)
    return HolderSplitReport(
        lhs=lhs,
        rhs=rhs,
        holds=leq(lhs, rhs),
        equality=close(lhs, rhs),
        proportional=x * t == y * s,
    )


def shifted_sequence_gaps(q: float, w: StepFunction, deltas: Sequence[StepFunction]) -> list[PowerGapReport]:
    """
    Для w_n = w + δ_n: ∫(w_n - w)^q <= q^(-q)·(∫w_n^q - ∫w^q)^q·(∫w_n^q)^(1-q).

    Правая часть стремится к нулю, когда ∫w_n^q → ∫w^q.
    """
    base = float(integrate(w, q))
    reports = []
    for delta in deltas:
        if delta.tree.leaf_measures != w.tree.leaf_measures:
            raise ValueError("δ_n и w заданы на разных деревьях")
        shifted = StepFunction(w.tree, tuple(a + b for a, b in zip(w.values, delta.values)))
        moment = float(integrate(shifted, q))
        gap = max(moment - base, 0.0)
        lhs = float(integrate(delta, q))
        rhs = q ** (-q) * gap**q * moment ** (1 - q)
        reports.append(PowerGapReport(lhs=lhs, rhs=rhs, holds=leq(lhs, rhs), gap=gap))
    return reports
