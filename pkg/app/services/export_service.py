"""
Выгрузка отчётов в CSV и JSON.

Числа пишутся с 17 значащими цифрами, перевод строки: "\\n",
поэтому одинаковые строки дают побайтно одинаковый файл.
"""
from pathlib import Path
from typing import Iterable, Sequence
import csv
import io
import logging

from pydantic import BaseModel

from app.core.numeric import render_float
from app.schemas import CheckRow, ProfilePoint

logger = logging.getLogger(__name__)

CHECK_COLUMNS = ["check", "q", "depth", "cell", "trial", "case", "lhs", "rhs", "slack", "holds"]
PROFILE_COLUMNS = ["breakpoint", "value"]


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return render_float(value)
    return str(value)


class ExportService:
    """CSV/JSON представление отчётов"""

    def render_table(self, headers: Sequence[str], rows: Iterable[Sequence]) -> str:
        """Произвольная таблица в CSV"""
        output = io.StringIO()
        writer = csv.writer(output, lineterminator="\n")
        writer.writerow(headers)
        for row in rows:
            writer.writerow([_cell(value) for value in row])
        return output.getvalue()

    def render_checks(self, rows: Iterable[CheckRow]) -> str:
        """Строки кампании: check, q, depth, cell, trial, case, lhs, rhs, slack, holds"""
        return self.render_table(
            CHECK_COLUMNS,
            ([getattr(row, column) for column in CHECK_COLUMNS] for row in rows),
        )

    def render_models(self, models: Sequence[BaseModel]) -> str:
        """Список однотипных моделей в CSV; колонки: поля первой модели (по псевдонимам)"""
        if not models:
            return ""
        dumped = [model.model_dump(by_alias=True) for model in models]
        headers = [key for key, value in dumped[0].items() if not isinstance(value, (list, dict))]
        return self.render_table(headers, ([item[key] for key in headers] for item in dumped))

    def render_profile(self, points: Sequence[ProfilePoint]) -> str:
        """Профиль как упорядоченные пары breakpoint,value"""
        return self.render_table(PROFILE_COLUMNS, ([p.breakpoint, p.value] for p in points))

    def parse_profile(self, text: str) -> list[ProfilePoint]:
        """
        Обратное к render_profile.

        Raises:
            ValueError: неверный заголовок или пустой профиль
        """
        reader = csv.reader(io.StringIO(text))
        header = next(reader, None)
        if header != PROFILE_COLUMNS:
            raise ValueError(f"Ожидался заголовок {PROFILE_COLUMNS}, получено {header}")
        points = []
        for row in reader:
            if not row:
                continue
            if len(row) != 2:
                raise ValueError(f"Строка профиля {row}: ожидалось 2 поля")
            points.append(ProfilePoint(breakpoint=row[0], value=row[1]))
        if not points:
            raise ValueError("Профиль без кусков")
        return points

    def render_json(self, model: BaseModel) -> str:
        return model.model_dump_json(indent=2)

    def write(self, text: str, path: str | Path) -> Path:
        """
        Записать текст в файл, создав каталоги.

        Raises:
            OSError: с путём файла в сообщении лога
        """
        target = Path(path)
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(text, encoding="utf-8", newline="")
        except OSError as e:
            logger.error(f"Не удалось записать отчёт {target}: {e}")
            raise
        logger.info(f"Отчёт записан: {target}")
        return target


# Singleton
export_service = ExportService()
