"""
extremal sweep: исследование сходимости φ_m к значению Беллмана по глубинам.
"""
import argparse
import logging

from config import settings
from app.models import CellRule
from app.services import bellman_service, extremal_service
from app.services.export_service import export_service
from cli.handlers.common import add_out, emit

logger = logging.getLogger(__name__)


def cmd_sweep(args: argparse.Namespace) -> int:
    point = bellman_service.make_point(args.q, args.f, args.h)
    rule = CellRule(args.rule)
    reports = extremal_service.convergence_study(point, list(range(args.min_depth, args.max_depth + 1)), rule)
    emit(export_service.render_models(reports), args)

    final = reports[-1]
    limit = extremal_service.limit_ratio(point, rule)
    logger.info(f"Итог: ratio={final.ratio:.6f}, предел правила {rule.value}: {limit:.6f}")
    converged = (
        final.ratio >= settings.converged_ratio * limit
        and final.eigen_residual <= settings.converged_residual * point.h
    )
    if not converged:
        logger.warning("Пороги сходимости не достигнуты на последней глубине")
    return 0


def register(groups: argparse._SubParsersAction) -> None:
    group = groups.add_parser("extremal", help="Почти экстремальные последовательности")
    commands = group.add_subparsers(dest="command", required=True)

    sweep = commands.add_parser("sweep", help="CSV: depth, I_m, B, ratio, невязки")
    sweep.add_argument("--q", type=float, required=True)
    sweep.add_argument("--f", type=float, required=True)
    sweep.add_argument("--h", type=float, required=True)
    sweep.add_argument("--min-depth", type=int, default=2)
    sweep.add_argument("--max-depth", type=int, default=20)
    sweep.add_argument("--rule", choices=[r.value for r in CellRule], default=CellRule.GEOMETRIC.value)
    add_out(sweep)
    sweep.set_defaults(handler=cmd_sweep)
