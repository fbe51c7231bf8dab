"""
verify all: кампания случайных проверок и наборы тождеств.

Приоритет настроек: значения по умолчанию < .env/окружение < флаги < файл --config (KEY=VALUE).
"""
import argparse
from pathlib import Path
import logging

from dotenv import dotenv_values

from config import settings
from app.schemas import CampaignConfig
from app.services.campaign_service import campaign_service
from app.services.export_service import export_service
from cli.handlers.common import parse_floats

logger = logging.getLogger(__name__)

# Ключ файла конфигурации -> поле CampaignConfig
CONFIG_KEYS = {
    "SEED": "seed",
    "TRIALS": "trials",
    "Q": "q_values",
    "MIN_DEPTH": "min_depth",
    "MAX_DEPTH": "max_depth",
    "LAMBDAS": "lambdas",
    "SUBSETS": "subsets",
    "COMPARE_TOL": "compare_tol",
    "OUT": "output",
    "EXACT": "exact",
    "WORKERS": "workers",
    "SUITES": "suites",
}


def read_config_file(path: str) -> dict:
    """Файл KEY=VALUE; неизвестные ключи: ошибка"""
    if not Path(path).is_file():
        raise OSError(f"Файл конфигурации не найден: {path}")
    overrides = {}
    for key, value in dotenv_values(path).items():
        field = CONFIG_KEYS.get(key.upper())
        if field is None:
            raise ValueError(f"{path}: неизвестный ключ {key}")
        if value is None:
            continue
        overrides[field] = parse_floats(value) if field == "q_values" else value
    return overrides


def build_config(args: argparse.Namespace) -> CampaignConfig:
    overrides = {
        "seed": args.seed,
        "trials": args.trials,
        "q_values": parse_floats(args.q) if args.q else None,
        "min_depth": args.min_depth,
        "max_depth": args.max_depth,
        "lambdas": args.lambdas,
        "subsets": args.subsets,
        "compare_tol": args.compare_tol,
        "output": args.out,
        "exact": args.exact,
        "workers": args.workers,
        "suites": args.suites,
    }
    if args.config:
        overrides.update(read_config_file(args.config))
    return CampaignConfig.from_settings(**overrides)


def cmd_all(args: argparse.Namespace) -> int:
    config = build_config(args)
    result = campaign_service.run(config)
    output = config.output or str(Path(settings.output_dir) / "campaign.csv")
    export_service.write(export_service.render_checks(result.rows), output)

    violations = result.violations
    if violations:
        logger.error(f"Нарушений: {len(violations)} из {len(result.rows)} (seed={config.seed})")
        for row in violations[:20]:
            logger.error(
                f"  {row.check}: q={row.q}, depth={row.depth}, cell={row.cell}, "
                f"trial={row.trial}, case={row.case}, slack={row.slack!r}"
            )
    else:
        logger.info(f"Нарушений нет: {len(result.rows)} проверок")
    return result.status


def register(groups: argparse._SubParsersAction) -> None:
    group = groups.add_parser("verify", help="Кампании проверок")
    commands = group.add_subparsers(dest="command", required=True)

    run_all = commands.add_parser("all", help="Все проверки; код выхода 1 при нарушении")
    run_all.add_argument("--seed", type=int, default=None)
    run_all.add_argument("--trials", type=int, default=None)
    run_all.add_argument("--q", default=None, help='Список q: "0.25,0.5,0.75"')
    run_all.add_argument("--min-depth", type=int, default=None)
    run_all.add_argument("--max-depth", "--depth", type=int, default=None)
    run_all.add_argument("--lambdas", type=int, default=None)
    run_all.add_argument("--subsets", type=int, default=None)
    run_all.add_argument("--compare-tol", type=float, default=None)
    run_all.add_argument("--exact", action=argparse.BooleanOptionalAction, default=None)
    run_all.add_argument("--workers", type=int, default=None)
    run_all.add_argument("--suites", action=argparse.BooleanOptionalAction, default=True,
                         help="Наборы тождеств (по умолчанию включены)")
    run_all.add_argument("--out", default=None, help="Путь к CSV (по умолчанию OUTPUT_DIR/campaign.csv)")
    run_all.add_argument("--config", default=None, help="Файл KEY=VALUE, перекрывает флаги")
    run_all.set_defaults(handler=cmd_all)
