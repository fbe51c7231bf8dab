"""
Конфигурация кампании случайных проверок.
"""
from typing import List, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from config import settings


class CampaignConfig(BaseModel):
    """Параметры кампании; одинаковая конфигурация даёт побайтно одинаковый CSV"""
    seed: int = Field(ge=0, lt=2**64, description="64-битный seed")
    trials: int = Field(ge=0, description="Случайных функций на ячейку (q, глубина)")
    q_values: List[float] = Field(min_length=1)
    min_depth: int = Field(ge=1)
    max_depth: int = Field(ge=1)
    lambdas: int = Field(default=20, ge=0, description="Случайных λ на функцию")
    subsets: int = Field(default=10, ge=0, description="Случайных множеств E на функцию")
    compare_tol: float = Field(default=1e-12, gt=0, description="Относительный допуск")
    output: Optional[str] = Field(default=None, description="Путь к CSV")
    exact: bool = Field(default=True, description="Точный режим (Fraction)")
    workers: int = Field(default=1, ge=1)
    suites: bool = Field(default=False, description="Добавить наборы тождеств")

    @field_validator("q_values")
    @classmethod
    def _check_q(cls, values: List[float]) -> List[float]:
        for q in values:
            if not 0 < q < 1:
                raise ValueError(f"q={q} вне (0, 1)")
        return values

    @model_validator(mode="after")
    def _check_depths(self) -> "CampaignConfig":
        if self.min_depth > self.max_depth:
            raise ValueError(f"min_depth={self.min_depth} > max_depth={self.max_depth}")
        if self.max_depth > settings.max_tree_depth:
            raise ValueError(f"max_depth={self.max_depth} > MAX_TREE_DEPTH={settings.max_tree_depth}")
        return self

    @classmethod
    def from_settings(cls, **overrides) -> "CampaignConfig":
        """Значения по умолчанию из Settings, поверх: явные параметры"""
        data = {
            "seed": settings.campaign_seed,
            "trials": settings.campaign_trials,
            "q_values": settings.campaign_q_values,
            "min_depth": settings.campaign_min_depth,
            "max_depth": settings.campaign_max_depth,
            "lambdas": settings.campaign_lambdas,
            "subsets": settings.campaign_subsets,
            "compare_tol": settings.compare_tol,
            "exact": settings.exact_mode,
            "workers": settings.campaign_workers,
        }
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**data)
