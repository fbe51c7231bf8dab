"""
Общие помощники обработчиков: разбор списков и вывод результата.
"""
import argparse
import sys

from app.services.export_service import export_service


def parse_values(text: str) -> list[str]:
    """"4,0,0,0" или "1/2, 3/8" -> список строк-чисел"""
    values = [item.strip() for item in text.split(",") if item.strip()]
    if not values:
        raise ValueError("Пустой список значений")
    return values


def parse_floats(text: str) -> list[float]:
    return [float(item) for item in parse_values(text)]


def emit(text: str, args: argparse.Namespace) -> None:
    """В файл --out, если задан, иначе в stdout"""
    out = getattr(args, "out", None)
    if out:
        export_service.write(text, out)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def add_out(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", default=None, help="Путь к файлу отчёта (по умолчанию stdout)")
