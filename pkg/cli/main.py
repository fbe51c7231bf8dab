"""
Командная строка: python -m cli <группа> <команда> [флаги].

Группы:
- bellman: eval, curve
- extremal: sweep
- verify: all (кампания проверок)
- oracle: search (полный перебор перестановок)
- tree: show
- maximal: eval

Коды выхода: 0 при успехе, 1 при найденном нарушении, 2 при ошибке ввода или записи.
"""
import argparse
import logging
import sys

from config import settings
from app.core.logging import setup_logging
from cli.handlers import (
    register_bellman,
    register_extremal,
    register_maximal,
    register_oracle,
    register_tree,
    register_verify,
)

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="python -m cli",
        description="Функция Беллмана двоичного максимального оператора при неравенстве Колмогорова",
    )
    parser.add_argument("--log-level", default=None, help=f"Уровень логирования (по умолчанию {settings.log_level})")
    groups = parser.add_subparsers(dest="group", required=True)

    # Порядок групп совпадает с порядком в справке
    register_bellman(groups)
    register_extremal(groups)
    register_verify(groups)
    register_oracle(groups)
    register_tree(groups)
    register_maximal(groups)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level)
    try:
        return args.handler(args)
    except OSError as e:
        logger.error(f"Ошибка ввода-вывода: {e}")
        return 2
    except ValueError as e:
        # pydantic.ValidationError тоже ValueError
        logger.error(f"Некорректные параметры: {e}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
