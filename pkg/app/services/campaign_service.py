"""
Кампания случайных проверок.

Ячейка кампании: пара (q, глубина двоичного дерева). Поток случайных чисел ячейки
порождается SeedSequence(seed, spawn_key=(номер ячейки,)), поэтому порядок
и параллельность выполнения ячеек не меняют результат.

Случайные φ: каждый лист независимо
- с вероятностью 0.25: точный ноль;
- с вероятностью 0.375: равномерно из [0, 10);
- с вероятностью 0.375: тяжёлый хвост: Pareto(1.5) · U[0.1, 10) (режим h ≪ f^q).
В точном режиме значения округляются до кратных 2^(-10) (положительные: не меньше 2^(-10)).
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
import asyncio
import logging
import math

import numpy as np

from app.core.numeric import Number, close
from app.models import BellmanPoint, CellRule, StepFunction, Tree
from app.schemas import CampaignConfig, CheckReport, CheckRow
from app.services import bellman_service as bellman
from app.services import extremal_service as extremal
from app.services import maximal_service as maximal
from app.services import rearrange_service as rearrange
from app.services.tree_service import dyadic_tree, step_function
from config import settings

logger = logging.getLogger(__name__)

QUANTUM = 2**10
_SUITE_KEY_OFFSET = 10_000


@dataclass(frozen=True, slots=True)
class CampaignCell:
    index: int
    q: float
    depth: int


@dataclass(slots=True)
class CampaignResult:
    rows: list[CheckRow] = field(default_factory=list)

    @property
    def violations(self) -> list[CheckRow]:
        return [row for row in self.rows if not row.holds]

    @property
    def status(self) -> int:
        """0: нарушений нет, 1: есть хотя бы одно"""
        return 1 if self.violations else 0


def cell_rng(seed: int, key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(key,)))


def _quantize(value: float) -> Fraction:
    if value <= 0:
        return Fraction(0)
    return Fraction(max(round(value * QUANTUM), 1), QUANTUM)


def random_values(rng: np.random.Generator, size: int, exact: bool) -> list[Number]:
    """Значения на листьях: смесь нулей, равномерных и тяжелохвостых"""
    kind = rng.random(size)
    uniform = rng.uniform(0.0, 10.0, size)
    heavy = rng.pareto(1.5, size) * rng.uniform(0.1, 10.0, size)
    raw = np.where(kind < 0.25, 0.0, np.where(kind < 0.625, uniform, heavy))
    if not raw.any():
        raw[rng.integers(size)] = 1.0
    if exact:
        return [_quantize(float(x)) for x in raw]
    return [float(x) for x in raw]


def random_step_function(rng: np.random.Generator, tree: Tree, exact: bool) -> StepFunction:
    return step_function(tree, random_values(rng, tree.leaf_count, exact), exact=exact)


def _row(check: str, report: CheckReport, **keys) -> CheckRow:
    return CheckRow(check=check, lhs=report.lhs, rhs=report.rhs, holds=report.holds, **keys)


def run_trial(
    config: CampaignConfig,
    cell: CampaignCell,
    trial: int,
    tree: Tree,
    rng: np.random.Generator,
) -> list[CheckRow]:
    """Все проверки для одной случайной φ"""
    q, tol = cell.q, config.compare_tol
    keys = {"q": q, "depth": cell.depth, "cell": cell.index, "trial": trial}
    phi = random_step_function(rng, tree, config.exact)
    result = maximal.maximal_operator(phi)
    top = float(max(result.maximal.values))
    rows: list[CheckRow] = []

    for case in range(config.lambdas):
        if case % 4 == 3:
            # λ на одном из уровней M_T φ: граница множества {M > λ}
            lam: Number = result.maximal.values[int(rng.integers(tree.leaf_count))]
        else:
            lam = float(rng.uniform(0.0, 1.2 * top)) or top / 2
        report = maximal.weak_type_check(phi, lam, strict=case % 2 == 0, maximal=result, tol=tol)
        rows.append(_row("weak_type", report, case=case, **keys))

    for case in range(config.subsets):
        mask = rng.random(tree.leaf_count) < rng.uniform(0.1, 1.0)
        subset = np.flatnonzero(mask).tolist() or [int(rng.integers(tree.leaf_count))]
        report = maximal.kolmogorov_check(q, phi, subset, maximal=result, tol=tol)
        rows.append(_row("kolmogorov", report, case=case, **keys))

    upper = bellman.upper_bound_check(q, phi, maximal=result, tol=tol)
    rows.append(_row("upper_bound", upper, **keys))

    chain = bellman.intermediate_chain_check(q, phi, maximal=result, tol=tol)
    rows.append(CheckRow(check="distribution_chain", lhs=chain.integral, rhs=chain.chain_bound,
                         holds=chain.chain_holds, **keys))
    rows.append(CheckRow(check="holder_chain", lhs=chain.holder_bound, rhs=chain.iv,
                         holds=chain.holder_holds, **keys))
    reduction = bellman.bellman_reduction_check(q, upper.z, upper.lhs / upper.h, tol)
    rows.append(_row("bellman_reduction", reduction, **keys))

    layer_cake = maximal.layer_cake_integral(q, phi, maximal=result)
    rows.append(CheckRow(check="layer_cake", lhs=upper.lhs, rhs=layer_cake,
                         holds=close(upper.lhs, layer_cake, 1e-10), **keys))

    symmetrization = rearrange.pointwise_symmetrization_check(phi, maximal=result, tol=tol)
    rows.append(_row("symmetrization", symmetrization, **keys))

    other = random_step_function(rng, tree, config.exact)
    rows.append(_row("holder_product", bellman.holder_product_check(q, phi, other, tol), **keys))

    quadruple = random_values(rng, 4, config.exact)
    if quadruple[0] + quadruple[1] == 0:
        quadruple[0] = Fraction(1) if config.exact else 1.0
    if quadruple[2] + quadruple[3] == 0:
        quadruple[2] = Fraction(1) if config.exact else 1.0
    split = extremal.holder_split_check(*quadruple, q=q, tol=tol)
    rows.append(_row("holder_split", split, **keys))
    return rows


def run_cell(config: CampaignConfig, cell: CampaignCell) -> list[CheckRow]:
    """Все испытания одной ячейки (q, глубина); функция верхнего уровня: передаётся в пул процессов"""
    rng = cell_rng(config.seed, cell.index)
    tree = dyadic_tree(cell.depth)
    rows: list[CheckRow] = []
    for trial in range(config.trials):
        trial_rows = run_trial(config, cell, trial, tree, rng)
        for row in trial_rows:
            if not row.holds:
                logger.error(
                    f"Нарушение {row.check}: seed={config.seed}, cell={cell.index}, q={cell.q}, "
                    f"depth={cell.depth}, trial={trial}, case={row.case}, lhs={row.lhs!r}, rhs={row.rhs!r}"
                )
        rows.extend(trial_rows)
    logger.info(f"Ячейка {cell.index} (q={cell.q}, глубина {cell.depth}): {len(rows)} проверок")
    return rows


# === Наборы тождеств ===

def special_function_suite() -> list[CheckRow]:
    """ω_q(1/2, 1.25) = 2 и H_q(ω_q(z)^(1/q)) = z на сетке 10×10 из [0.05, 0.95]×[1, 100]"""
    rows = [CheckRow(check="omega_closed_form", q=0.5, lhs=bellman.omega_q(0.5, 1.25), rhs=2.0,
                     holds=abs(bellman.omega_q(0.5, 1.25) - 2.0) <= 1e-10)]
    case = 0
    for q in np.linspace(0.05, 0.95, 10):
        for z in np.linspace(1.0, 100.0, 10):
            q, z = float(q), float(z)
            restored = bellman.hq_eval(q, bellman.omega_q(q, z) ** (1 / q))
            rows.append(CheckRow(check="omega_round_trip", q=q, case=case, lhs=restored, rhs=z,
                                 holds=abs(restored - z) <= 1e-10 * max(1.0, z)))
            case += 1
    return rows


def random_point(rng: np.random.Generator) -> BellmanPoint:
    q = float(rng.uniform(0.05, 0.95))
    f = float(rng.uniform(0.1, 10.0))
    h = f**q * float(rng.uniform(0.05, 1.0))
    return bellman.make_point(q, f, h)


def extremal_profile_suite(rng: np.random.Generator, points: int = 50) -> list[CheckRow]:
    """∫g = f, ∫g^q = h, Харди g = c·g и ∫(Харди g)^q = h·ω_q(f^q/h)"""
    rows = []
    for case in range(points):
        point = random_point(rng)
        report = bellman.extremal_profile_check(point)
        rows.append(CheckRow(check="extremal_profile", q=point.q, case=case, lhs=report.power_integral,
                             rhs=point.h, holds=report.holds))
        rows.append(CheckRow(check="hardy_sharpness", q=point.q, case=case, lhs=report.hardy_sharpness,
                             rhs=report.bellman, holds=abs(report.hardy_sharpness - report.bellman) <= 1e-8))
    return rows


def oracle_suite(rng: np.random.Generator, multisets: int = 200, q: float = 0.5) -> list[CheckRow]:
    """Полный перебор на дереве глубины 3: максимум <= граница Харди, левая расстановка <= максимум"""
    tree = dyadic_tree(3)
    rows = []
    for case in range(multisets):
        values = random_values(rng, tree.leaf_count, exact=False)
        report = rearrange.rearrangement_search(tree, values, q)
        rows.append(CheckRow(check="rearrangement_oracle", q=q, depth=3, case=case,
                             lhs=report.best_value, rhs=report.hardy_bound, holds=report.holds))
        rows.append(CheckRow(check="left_arranged", q=q, depth=3, case=case,
                             lhs=report.left_value, rhs=report.best_value, holds=report.holds))
    return rows


def convergence_suite(q: float = 0.5, f: float = 1.0, h: float = 0.8) -> list[CheckRow]:
    """
    Последовательность GEOMETRIC на глубинах 2..24: I_m/B не убывает и в конце >= CONVERGED_RATIO,
    невязки не растут на последних 10 глубинах и в конце <= CONVERGED_RESIDUAL·h.
    """
    point = bellman.make_point(q, f, h)
    reports = extremal.convergence_study(point, list(range(2, 25)), CellRule.GEOMETRIC)
    rows = []
    for previous, current in zip(reports[:-1], reports[1:]):
        rows.append(CheckRow(check="ratio_step", q=q, depth=current.depth,
                             lhs=previous.ratio, rhs=current.ratio, holds=previous.ratio <= current.ratio))
    for report in reports:
        rows.append(CheckRow(check="own_bound", q=q, depth=report.depth, lhs=report.integral,
                             rhs=report.own_target, holds=report.integral <= report.own_target * (1 + 1e-12)))
        rows.append(CheckRow(check="closed_form", q=q, depth=report.depth, lhs=report.integral,
                             rhs=report.closed_form, holds=math.isclose(report.integral, report.closed_form, rel_tol=1e-9)))
    for previous, current in zip(reports[-11:-1], reports[-10:]):
        rows.append(CheckRow(check="eigen_residual_step", q=q, depth=current.depth,
                             lhs=current.eigen_residual, rhs=previous.eigen_residual,
                             holds=current.eigen_residual <= previous.eigen_residual))
        rows.append(CheckRow(check="rearranged_residual_step", q=q, depth=current.depth,
                             lhs=current.rearranged_residual, rhs=previous.rearranged_residual,
                             holds=current.rearranged_residual <= previous.rearranged_residual))
    final = reports[-1]
    limit = settings.converged_residual * h
    rows.append(CheckRow(check="final_ratio", q=q, depth=final.depth, lhs=settings.converged_ratio,
                         rhs=final.ratio, holds=final.ratio >= settings.converged_ratio))
    rows.append(CheckRow(check="final_eigen_residual", q=q, depth=final.depth, lhs=final.eigen_residual,
                         rhs=limit, holds=final.eigen_residual <= limit))
    rows.append(CheckRow(check="final_rearranged_residual", q=q, depth=final.depth,
                         lhs=final.rearranged_residual, rhs=limit, holds=final.rearranged_residual <= limit))
    return rows


def elementary_suite(rng: np.random.Generator, pairs: int = 10_000) -> list[CheckRow]:
    """0 < x^q - y^q <= (x - y)^q и разбиение Гёльдера с равенством ровно на пропорциональных входах"""
    rows = []
    for case in range(pairs):
        q = float(rng.uniform(0.01, 0.99))
        y = float(rng.uniform(0.001, 10.0))
        x = y + float(rng.uniform(0.001, 10.0))
        rows.append(_row("elementary_power", extremal.elementary_power_check(x, y, q), q=q, case=case))
    for case in range(pairs):
        q = float(rng.uniform(0.01, 0.99))
        t, t2, s = (_quantize(float(v)) + Fraction(1, QUANTUM) for v in rng.uniform(0.0, 10.0, 3))
        if case % 2 == 0:
            # пропорциональный случай: t'/t = s'/s
            s2 = s * t2 / t
        else:
            s2 = _quantize(float(rng.uniform(0.0, 10.0))) + Fraction(1, QUANTUM)
        report = extremal.holder_split_check(t, t2, s, s2, q)
        rows.append(CheckRow(check="holder_split_equality", q=q, case=case, lhs=report.lhs, rhs=report.rhs,
                             holds=report.holds and report.equality == report.proportional))
    return rows


class CampaignService:
    """Запуск кампании: ячейки (q, глубина) и, по флагу, наборы тождеств"""

    def cells(self, config: CampaignConfig) -> list[CampaignCell]:
        cells = []
        for q in config.q_values:
            for depth in range(config.min_depth, config.max_depth + 1):
                cells.append(CampaignCell(index=len(cells), q=q, depth=depth))
        return cells

    def run_suites(self, config: CampaignConfig) -> list[CheckRow]:
        rows: list[CheckRow] = []
        rows += special_function_suite()
        rows += extremal_profile_suite(cell_rng(config.seed, _SUITE_KEY_OFFSET))
        rows += oracle_suite(cell_rng(config.seed, _SUITE_KEY_OFFSET + 1))
        rows += convergence_suite()
        rows += elementary_suite(cell_rng(config.seed, _SUITE_KEY_OFFSET + 2))
        logger.info(f"Наборы тождеств: {len(rows)} проверок")
        return rows

    async def run_async(self, config: CampaignConfig) -> CampaignResult:
        """Ячейки выполняются параллельно в пуле процессов; результаты склеиваются по номеру ячейки"""
        cells = self.cells(config)
        logger.info(f"Кампания: seed={config.seed}, {len(cells)} ячеек по {config.trials} испытаний")
        if config.trials == 0:
            per_cell: list[list[CheckRow]] = [[] for _ in cells]
        elif config.workers == 1:
            per_cell = [run_cell(config, cell) for cell in cells]
        else:
            loop = asyncio.get_running_loop()
            with ProcessPoolExecutor(max_workers=config.workers) as pool:
                per_cell = await asyncio.gather(
                    *(loop.run_in_executor(pool, run_cell, config, cell) for cell in cells)
                )
        result = CampaignResult()
        for rows in per_cell:
            result.rows.extend(rows)
        if config.suites:
            result.rows.extend(self.run_suites(config))
        logger.info(f"Кампания завершена: {len(result.rows)} проверок, нарушений {len(result.violations)}")
        return result

    def run(self, config: CampaignConfig) -> CampaignResult:
        return asyncio.run(self.run_async(config))


# Singleton
campaign_service = CampaignService()
