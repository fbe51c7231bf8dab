"""
Текстовое представление деревьев и ступенчатых функций:
вложенные записи узлов с мерами (точные дроби "1/4" или десятичные) и значениями на листьях.
"""
from typing import List, Optional

from pydantic import BaseModel, Field


class TreeNodeSchema(BaseModel):
    """Узел дерева"""
    measure: str = Field(description="Мера узла: \"1/4\" или \"0.25\"")
    value: Optional[str] = Field(default=None, description="Значение функции (только у листьев)")
    children: List["TreeNodeSchema"] = Field(default_factory=list)


class ProfilePoint(BaseModel):
    """Правый конец куска (t_(i-1), t_i] убывающего профиля и значение на нём"""
    breakpoint: str = Field(description="t_i: \"3/4\" или 17 значащих цифр")
    value: str = Field(description="Значение на (t_(i-1), t_i]")


TreeNodeSchema.model_rebuild()
