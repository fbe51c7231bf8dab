from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import Field


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",  # Игнорировать лишние переменные из .env
        case_sensitive=False,  # Читать LOG_LEVEL и log_level как одно и то же
        populate_by_name=True  # Разрешить использовать и alias, и имя поля
    )

    log_level: str = Field(default="INFO", alias="LOG_LEVEL")

    # Каталог для CSV/JSON отчётов по умолчанию
    output_dir: str = Field(default="reports", alias="OUTPUT_DIR")

    # === Деревья ===
    max_tree_depth: int = Field(default=16, ge=1, alias="MAX_TREE_DEPTH")
    max_spike_depth: int = Field(default=28, ge=2, alias="MAX_SPIKE_DEPTH")
    enumeration_cap: int = Field(default=8, ge=1, alias="ENUMERATION_CAP")
    measure_tol: float = Field(default=1e-12, gt=0, alias="MEASURE_TOL")

    # === Численные допуски ===
    compare_tol: float = Field(default=1e-12, gt=0, alias="COMPARE_TOL")
    root_rtol: float = Field(default=1e-14, gt=0, alias="ROOT_RTOL")
    root_xtol: float = Field(default=1e-300, gt=0, alias="ROOT_XTOL")
    quad_abs_tol: float = Field(default=1e-10, gt=0, alias="QUAD_ABS_TOL")
    residual_abs_tol: float = Field(default=1e-9, gt=0, alias="RESIDUAL_ABS_TOL")
    quad_limit: int = Field(default=200, ge=10, alias="QUAD_LIMIT")
    adaptive_piece_limit: int = Field(default=2000, ge=1, alias="ADAPTIVE_PIECE_LIMIT")
    jacobi_order: int = Field(default=12, ge=2, alias="JACOBI_ORDER")

    # Допустимый диапазон q (концы 0 и 1 не рассматриваются)
    q_min: float = Field(default=0.01, gt=0, lt=1, alias="Q_MIN")
    q_max: float = Field(default=0.99, gt=0, lt=1, alias="Q_MAX")

    # === Пороги "сошлось" для экстремальных последовательностей ===
    converged_ratio: float = Field(default=0.98, gt=0, le=1, alias="CONVERGED_RATIO")
    converged_residual: float = Field(default=0.05, gt=0, alias="CONVERGED_RESIDUAL")  # доля от h
    small_k_threshold: float = Field(default=0.05, gt=0, alias="SMALL_K_THRESHOLD")

    # === Кампания проверок ===
    campaign_seed: int = Field(default=20240521, ge=0, lt=2**64, alias="CAMPAIGN_SEED")
    campaign_trials: int = Field(default=1000, ge=0, alias="CAMPAIGN_TRIALS")
    campaign_q: str = Field(default="0.25,0.5,0.75", alias="CAMPAIGN_Q")
    campaign_min_depth: int = Field(default=1, ge=1, alias="CAMPAIGN_MIN_DEPTH")
    campaign_max_depth: int = Field(default=8, ge=1, alias="CAMPAIGN_MAX_DEPTH")
    campaign_lambdas: int = Field(default=20, ge=0, alias="CAMPAIGN_LAMBDAS")
    campaign_subsets: int = Field(default=10, ge=0, alias="CAMPAIGN_SUBSETS")
    campaign_workers: int = Field(default=1, ge=1, alias="CAMPAIGN_WORKERS")
    exact_mode: bool = Field(default=True, alias="EXACT_MODE")

    @property
    def campaign_q_values(self) -> list[float]:
        """Список q для кампании: "0.25,0.5,0.75" -> [0.25, 0.5, 0.75]"""
        if not self.campaign_q:
            return []
        return [float(x.strip()) for x in self.campaign_q.split(",") if x.strip()]


settings = Settings()
