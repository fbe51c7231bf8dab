"""
Схемы отчётов проверок.

Каждая проверка неравенства сводится к паре lhs <= rhs; slack = rhs - lhs.
"""
from typing import List, Optional

from pydantic import BaseModel, Field, computed_field


# === Базовый отчёт ===

class CheckReport(BaseModel):
    """Проверка неравенства lhs <= rhs"""
    lhs: float = Field(description="Левая часть")
    rhs: float = Field(description="Правая часть")
    holds: bool = Field(description="Выполнено ли неравенство (с допуском)")

    @computed_field
    @property
    def slack(self) -> float:
        return self.rhs - self.lhs


# === Максимальный оператор ===

class WeakTypeReport(CheckReport):
    """μ({M_T φ > λ}) <= (1/λ) ∫_{M_T φ > λ} φ dμ"""
    lam: float = Field(description="Уровень λ")
    strict: bool = Field(description="Множество {M > λ} (True) или {M >= λ}")


class KolmogorovReport(CheckReport):
    """∫_E (M_T φ)^q <= (1/(1-q)) μ(E)^(1-q) (∫φ)^q"""
    q: float
    subset_measure: float = Field(description="μ(E)")

    @computed_field
    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs if self.rhs > 0 else 0.0


# === Функция Беллмана ===

class UpperBoundReport(CheckReport):
    """I = ∫(M_T φ)^q <= B_q(f, h); lhs = I, rhs = bound"""
    q: float
    f: float
    h: float
    z: float = Field(description="f^q / h")

    @property
    def integral(self) -> float:
        return self.lhs

    @property
    def bound(self) -> float:
        return self.rhs


class ChainReport(BaseModel):
    """Два шага цепочки верхней оценки и финальная редукция к ω_q"""
    q: float
    integral: float = Field(description="I = ∫(M_T φ)^q")
    iv: float = Field(description="IV = ∫ φ (M_T φ)^(q-1)")
    chain_bound: float = Field(description="f^q/(1-q) - q/(1-q)·IV")
    holder_bound: float = Field(description="h^(1/q) · I^(1-1/q)")
    chain_holds: bool
    holder_holds: bool
    reduction_holds: bool

    @computed_field
    @property
    def chain_slack(self) -> float:
        return self.chain_bound - self.integral

    @computed_field
    @property
    def holder_slack(self) -> float:
        return self.iv - self.holder_bound

    @property
    def holds(self) -> bool:
        return self.chain_holds and self.holder_holds and self.reduction_holds


class ReductionReport(CheckReport):
    """(1-q)u + q·u^(1-1/q) <= z  ⇒  u <= ω_q(z); lhs = u, rhs = ω_q(z)"""
    z: float
    premise: bool = Field(description="Выполнена ли посылка")


class HardyIdentityReport(BaseModel):
    """Тождество для оператора Харди: lhs == rhs с точностью квадратуры"""
    lhs: float
    rhs: float
    abs_error: float
    tolerance: float
    holds: bool


class ExtremalProfileReport(BaseModel):
    """Проверка профиля g = K·t^(-1+1/c): ∫g = f, ∫g^q = h, Харди g = c·g"""
    K: float
    c: float
    mass: float
    mass_error: float
    power_integral: float
    power_rel_error: float
    hardy_coefficient: float = Field(description="Отношение Харди g к g")
    hardy_sharpness: float = Field(description="∫(Харди g)^q")
    bellman: float = Field(description="h · ω_q(f^q/h)")
    holds: bool


class HolderSplitReport(CheckReport):
    """t^q s^(1-q) + t'^q s'^(1-q) <= a^q b^(1-q)"""
    equality: bool = Field(description="Достигнуто равенство")
    proportional: bool = Field(description="t/a == s/b")


class BellmanEvalResponse(BaseModel):
    """Ответ `bellman eval`"""
    q: float
    f: float
    h: float
    z: float
    c: float
    omega: float
    B: float
    K: float


# === Перестановки ===

class SymmetrizationReport(CheckReport):
    """(M_T φ)*(t) <= Харди(φ*)(t) в худшей точке сетки"""
    worst_t: float
    points: int


class SearchReport(BaseModel):
    """Результат полного перебора перестановок"""
    q: float
    best_value: float
    best_permutation: List[float]
    left_value: float = Field(description="Значение для убывающей расстановки")
    hardy_bound: float
    permutations: int = Field(description="Число различных перестановок")
    holds: bool


# === Экстремальные последовательности ===

class RearrangedResidual(BaseModel):
    """∫|(M_T φ)* - Харди g|^q и (для степенного профиля) вариант против c·g"""
    residual: float
    scaled_residual: Optional[float] = None


class ResidualReport(BaseModel):
    """Строка исследования сходимости для глубины m"""
    depth: int
    rule: str
    cells: int
    integral: float = Field(serialization_alias="I_m", description="I_m = ∫(M_T φ_m)^q")
    closed_form: float = Field(description="I_m по формуле префиксных средних")
    target: float = Field(serialization_alias="B", description="B = h·ω_q(f^q/h)")
    h_m: float = Field(description="∫ φ_m^q")
    own_target: float = Field(description="B(f, h_m)")
    eigen_residual: float
    rearranged_residual: float

    @computed_field
    @property
    def ratio(self) -> float:
        return self.integral / self.target

    @computed_field
    @property
    def own_ratio(self) -> float:
        return self.integral / self.own_target


class SmallKRow(BaseModel):
    """Значения ∫_0^k [(M_T φ_m)*]^q по глубинам для одного k"""
    k: float
    values: List[float]
    hardy_bound: float = Field(description="∫_0^k (Харди g)^q")
    sup_value: float
    holds: bool


class SmallKReport(BaseModel):
    rows: List[SmallKRow]
    threshold: float
    decreasing: bool
    below_threshold: bool

    @property
    def holds(self) -> bool:
        return self.decreasing and self.below_threshold and all(r.holds for r in self.rows)


class PowerGapReport(CheckReport):
    """∫(w_n - w)^q <= q^(-q) (∫w_n^q - ∫w^q)^q (∫w_n^q)^(1-q)"""
    gap: float = Field(description="∫w_n^q - ∫w^q")


# === CSV ===

class CheckRow(BaseModel):
    """Одна строка CSV кампании"""
    check: str
    q: Optional[float] = None
    depth: Optional[int] = None
    cell: Optional[int] = None
    trial: Optional[int] = None
    case: Optional[int] = None
    lhs: float
    rhs: float
    holds: bool

    @computed_field
    @property
    def slack(self) -> float:
        return self.rhs - self.lhs
