"""
Настройка логирования для CLI и скриптов.

Логи пишутся в stderr, чтобы CSV в stdout оставался чистым.
"""
import logging
import sys

from config import settings

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def setup_logging(level: str | None = None) -> None:
    """Единая настройка корневого логгера"""
    logging.basicConfig(
        level=(level or settings.log_level).upper(),
        format=LOG_FORMAT,
        stream=sys.stderr,
        force=True,
    )
