# app/db/schemas/experiment.py

from pathlib import Path
try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self

from pydantic import Field, model_validator
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict

from app.core.config import Settings
from app.core.exceptions import BaseTraceMarkException, ConfigInvalidException
from app.db.models.enums import EmbeddingStrategyEnum
from app.db.schemas.base_schemas import _BaseSchema
from app.db.schemas.channel import ChannelSpec
from app.db.schemas.codec import EmbeddingParams, ModelKey
from app.db.schemas.latent import LatentShape, Seed


class ExperimentConfig(Settings):
    """
    Конфиг прогона (sweep): плоский key=value файл в формате .env.

    Пример (`descriptions/sweep_config.md`):
        SWEEP_SHAPE=4x64x64
        SWEEP_K_VALUES=[128, 256]
        SWEEP_CHANNEL_GRID=["identity", "gauss:0.3", "flip:0.30,0.45,0.675"]
        SWEEP_TRIALS=1000
    """

    model_config = SettingsConfigDict(
        env_prefix="SWEEP_",
        env_file=None,
        env_file_encoding="utf-8",
        extra="ignore",
    )

    shape: str = Field(default="4x64x64", description="Форма латента CxHxW")
    k_values: list[int] = Field(default_factory=lambda: [256], description="Длины водяного знака")
    channel_grid: list[str] = Field(default_factory=lambda: ["identity"], description="Каналы в грамматике channel")
    trials: int = Field(default=100, description="Испытаний на ячейку (k, канал)")
    base_seed: Seed = Field(default=0, description="Базовый seed для счётной схемы")
    fpr: float = Field(default=1e-6, description="Целевой FPR для τ")
    output_path: Path = Field(default=Path("sweep.csv"), description="Куда писать CSV")
    strategy: EmbeddingStrategyEnum = Field(default=EmbeddingStrategyEnum.GROUP)

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        # только аргументы и файл конфига: окружение процесса не влияет на прогон
        return init_settings, dotenv_settings

    @model_validator(mode="after")
    def check_constraints(self) -> Self:
        from app.services.channel.grammar import parse_channel

        if self.trials < 1:
            raise ConfigInvalidException(f"trials ≥ 1 (получено {self.trials})")
        if not (0.0 < self.fpr < 1.0):
            raise ConfigInvalidException(f"0 < fpr < 1 (получено {self.fpr})")
        if not self.k_values:
            raise ConfigInvalidException("k_values пуст")
        if not self.channel_grid:
            raise ConfigInvalidException("channel_grid пуст")
        try:
            shape = LatentShape.parse(self.shape)
            for k in self.k_values:
                EmbeddingParams(shape=shape, k=k, strategy=self.strategy)
            for text in self.channel_grid:
                parse_channel(text)
        except BaseTraceMarkException as exc:
            raise ConfigInvalidException(exc.detail) from exc
        return self

    @property
    def latent_shape(self) -> LatentShape:
        return LatentShape.parse(self.shape)

    @property
    def channel_specs(self) -> list[ChannelSpec]:
        from app.services.channel.grammar import parse_channel

        return [parse_channel(text) for text in self.channel_grid]


class SweepRow(_BaseSchema):
    k: int
    tau: int
    fpr: float
    channel: str
    trials: int
    bit_acc_mean: float
    bit_acc_std: float
    tpr: float = Field(..., ge=0.0, le=1.0)
    w1_acc_mean: float
    w2_acc_mean: float | None = None
    small_elem_acc_mean: float | None = None
    strategy: EmbeddingStrategyEnum
    wall_time_s: float


class SweepReport(_BaseSchema):
    rows: list[SweepRow] = Field(default_factory=list)

    def row(self, k: int, channel: str) -> SweepRow:
        for row in self.rows:
            if row.k == k and row.channel == channel:
                return row
        raise KeyError((k, channel))


class TrialSeeds(_BaseSchema):
    """Независимые seed одного испытания, выведенные из base_seed"""

    latent: Seed
    watermark: Seed
    channel: Seed
    key: ModelKey


class TrialOutcome(_BaseSchema):
    """Точные счётчики одного испытания: агрегируются без потери точности"""

    trial_index: int
    matches: int
    w1_matches: int
    w1_total: int
    w2_matches: int = 0
    w2_total: int = 0
    small_matches: int = 0
    small_total: int = 0


class SelfTestCheck(_BaseSchema):
    name: str
    passed: bool
    detail: str = ""


class SweepTask(_BaseSchema):
    """Единица работы для процесса: отрезок испытаний одной ячейки (k, канал)"""

    cell_index: int
    shape: LatentShape
    k: int
    strategy: EmbeddingStrategyEnum
    channel_index: int
    channel: str
    base_seed: Seed
    start: int
    stop: int
