"""
Параметры функции Беллмана и экстремальных последовательностей.
"""
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config import settings


class BellmanPoint(BaseModel):
    """Допустимая тройка (q, f, h): 0 < h <= f^q"""
    model_config = ConfigDict(frozen=True)

    q: float = Field(description="Показатель q из (0, 1)")
    f: float = Field(gt=0, description="∫φ dμ")
    h: float = Field(gt=0, description="∫φ^q dμ")

    @field_validator("q")
    @classmethod
    def _check_q(cls, value: float) -> float:
        if not settings.q_min <= value <= settings.q_max:
            raise ValueError(f"q={value} вне [{settings.q_min}, {settings.q_max}]")
        return value

    @model_validator(mode="after")
    def _check_admissible(self) -> "BellmanPoint":
        # Неравенство Гёльдера: h <= f^q; допуск только на ошибку округления
        if self.h > self.f ** self.q * (1.0 + settings.compare_tol):
            raise ValueError(f"Недопустимая точка: h={self.h} > f^q={self.f ** self.q}")
        return self

    @property
    def z(self) -> float:
        """Отношение f^q / h >= 1"""
        return max(self.f ** self.q / self.h, 1.0)


class CellRule(str, Enum):
    """Правило разбиения на ячейки для экстремальных последовательностей"""
    DYADIC = "dyadic"        # ячейки [2^-(k+1), 2^-k), отношение 1/2
    GEOMETRIC = "geometric"  # отношение ρ_m = 1 - 2^(-m/2), хвост <= 2^-m


class SpikeSequenceParams(BaseModel):
    """
    Параметры члена φ_m экстремальной последовательности.

    c и K: параметры профиля g(t) = K·t^(-1+1/c) из extremal_profile;
    собираются через extremal_service.spike_params.
    """
    model_config = ConfigDict(frozen=True)

    point: BellmanPoint
    depth: int = Field(ge=2, description="Глубина m")
    rule: CellRule = CellRule.DYADIC
    c: float = Field(ge=1)
    K: float = Field(gt=0)

    @model_validator(mode="after")
    def _check_mass(self) -> "SpikeSequenceParams":
        if abs(self.K * self.c - self.point.f) > settings.compare_tol * 10 * self.point.f:
            raise ValueError(f"K·c={self.K * self.c} != f={self.point.f}")
        return self
