# app/db/schemas/codec.py

import re
try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self

import numpy as np
from pydantic import Field, field_serializer, field_validator, model_validator

from app.core.exceptions import (
    ImbalancedSampleException,
    InvalidEmbeddingParamsException,
    InvalidKeyException,
    SizeMismatchException,
    UnbalancedWatermarkException,
)
from app.db.models.enums import EmbeddingStrategyEnum
from app.db.schemas.base_schemas import _BaseSchema, _ArraySchema
from app.db.schemas.latent import LatentShape

_HEX_KEY = re.compile(r"^[0-9a-fA-F]{64}$")


def _bits_to_string(bits: np.ndarray) -> str:
    return "".join("1" if bit else "0" for bit in np.asarray(bits).tolist())


class Watermark(_BaseSchema):
    """Сбалансированный водяной знак m: k бит, ровно k/2 нулей и k/2 единиц"""

    bits: tuple[int, ...] = Field(..., description="Биты водяного знака")

    @field_validator("bits", mode="before")
    @classmethod
    def parse_bits(cls, value):
        if isinstance(value, str):
            text = value.strip()
            if not text or set(text) - {"0", "1"}:
                raise UnbalancedWatermarkException("Водяной знак должен состоять только из '0' и '1'")
            return tuple(int(char) for char in text)
        return tuple(int(bit) for bit in np.asarray(value).reshape(-1).tolist())

    @model_validator(mode="after")
    def check_balance(self) -> Self:
        k = len(self.bits)
        if k < 2 or k % 2:
            raise UnbalancedWatermarkException(f"Длина водяного знака должна быть чётной и ≥ 2, получено {k}")
        if any(bit not in (0, 1) for bit in self.bits):
            raise UnbalancedWatermarkException("Биты водяного знака должны быть 0 или 1")
        ones = sum(self.bits)
        if ones * 2 != k:
            raise UnbalancedWatermarkException(f"Единиц {ones}, нулей {k - ones} — требуется по {k // 2}")
        return self

    @property
    def k(self) -> int:
        return len(self.bits)

    def as_array(self) -> np.ndarray:
        return np.fromiter(self.bits, dtype=np.uint8, count=len(self.bits))

    def __str__(self) -> str:
        return "".join(str(bit) for bit in self.bits)


class ModelKey(_BaseSchema):
    """Секретный 256-битный ключ модели s"""

    key: bytes = Field(..., description="32 байта ключа")

    @field_validator("key", mode="before")
    @classmethod
    def parse_key(cls, value):
        if isinstance(value, str):
            text = value.strip()
            if not _HEX_KEY.match(text):
                raise InvalidKeyException()
            return bytes.fromhex(text)
        if isinstance(value, (bytes, bytearray)) and len(value) != 32:
            raise InvalidKeyException(f"Ключ должен быть 32 байта, получено {len(value)}")
        return bytes(value)

    @property
    def hex(self) -> str:
        return self.key.hex()

    @property
    def as_int(self) -> int:
        return int.from_bytes(self.key, "big")

    def __str__(self) -> str:
        return self.hex


class EmbeddingParams(_BaseSchema):
    shape: LatentShape
    k: int = Field(..., description="Длина водяного знака")
    strategy: EmbeddingStrategyEnum = Field(
        default=EmbeddingStrategyEnum.GROUP, description="Обработка элементов с малым |value|"
    )

    @model_validator(mode="after")
    def check_divisibility(self) -> Self:
        r = self.shape.r
        if self.k < 2 or self.k % 2:
            raise InvalidEmbeddingParamsException(f"k должно быть чётным и ≥ 2, получено {self.k}")
        if r % (2 * self.k):
            raise InvalidEmbeddingParamsException(f"2k = {2 * self.k} не делит r = {r}")
        if self.k > r // 2:
            raise InvalidEmbeddingParamsException(f"k = {self.k} больше r/2 = {r // 2}")
        return self

    @property
    def r(self) -> int:
        return self.shape.r

    @property
    def repetitions(self) -> int:
        """Сколько раз m повторяется в z_l (и размер группы в z_s): r/(2k)"""
        return self.r // (2 * self.k)

    @property
    def group_size(self) -> int:
        return self.r // (2 * self.k)

    @property
    def vote_count(self) -> int:
        """Число голосов на бит при извлечении"""
        if self.strategy == EmbeddingStrategyEnum.GROUP:
            return self.repetitions + 1
        if self.strategy == EmbeddingStrategyEnum.SINGLE:
            return 2 * self.repetitions
        return self.repetitions


class SignPartition(_ArraySchema):
    """
    Разбиение X по знаку (N: x < 0, P: x ≥ 0) и по рангу модуля.

    large_neg / large_pos идут в порядке убывания |value| (порядок расхода при построении z_l),
    residual — в порядке исходных индексов.
    """

    negatives: np.ndarray = Field(..., description="Индексы N")
    nonnegatives: np.ndarray = Field(..., description="Индексы P")
    large_neg: np.ndarray = Field(..., description="Значения N₁")
    large_neg_index: np.ndarray
    large_pos: np.ndarray = Field(..., description="Значения P₁")
    large_pos_index: np.ndarray
    residual: np.ndarray = Field(..., description="Значения R")
    residual_index: np.ndarray

    @model_validator(mode="after")
    def check_cardinality(self) -> Self:
        r = self.negatives.size + self.nonnegatives.size
        if self.large_neg.size != r // 4 or self.large_pos.size != r // 4 or self.residual.size != r // 2:
            raise SizeMismatchException("|N₁| = |P₁| = r/4 и |R| = r/2 нарушено")
        return self


class GroupPlan(_ArraySchema):
    """Группы G_n и G_p: по k/2 строк одинаковой длины r/(2k); суммы G_n < 0, суммы G_p ≥ 0"""

    neg_groups: np.ndarray = Field(..., description="G_n, форма (k/2, r/(2k))")
    pos_groups: np.ndarray = Field(..., description="G_p, форма (k/2, r/(2k))")

    @model_validator(mode="after")
    def check_groups(self) -> Self:
        if self.neg_groups.ndim != 2 or self.neg_groups.shape != self.pos_groups.shape:
            raise SizeMismatchException("G_n и G_p должны иметь одинаковую форму (k/2, r/(2k))")
        neg_sums = self.neg_groups.astype(np.float64).sum(axis=1)
        pos_sums = self.pos_groups.astype(np.float64).sum(axis=1)
        # сумма 0 декодируется как 1, поэтому для G_n нужен строгий минус
        if np.any(neg_sums >= 0) or np.any(pos_sums < 0):
            raise ImbalancedSampleException(
                f"Знак суммы группы не совпадает с её битом "
                f"(G_n ≥ 0: {int(np.sum(neg_sums >= 0))}, G_p < 0: {int(np.sum(pos_sums < 0))})"
            )
        return self

    @property
    def group_count(self) -> int:
        return int(self.neg_groups.shape[0])

    @property
    def group_size(self) -> int:
        return int(self.neg_groups.shape[1])


class ExtractionResult(_ArraySchema):
    """Результат извлечения: m′, голоса по битам и промежуточные потоки w₁, w₂"""

    bits: np.ndarray = Field(..., description="Восстановленный m′ (k бит)")
    votes: np.ndarray = Field(..., description="Пары (число единиц, всего голосов) по каждому биту")
    stream_large: np.ndarray = Field(..., description="w₁: r/2 бит по знаку z′_l")
    stream_groups: np.ndarray = Field(..., description="w₂: биты z′_s")
    strategy: EmbeddingStrategyEnum = EmbeddingStrategyEnum.GROUP

    @property
    def k(self) -> int:
        return int(self.bits.size)

    @property
    def bit_string(self) -> str:
        return _bits_to_string(self.bits)

    @field_serializer("bits", "stream_large", "stream_groups")
    def serialize_stream(self, value: np.ndarray) -> str:
        return _bits_to_string(value)

    @field_serializer("votes")
    def serialize_votes(self, value: np.ndarray) -> list[list[int]]:
        return [[int(ones), int(total)] for ones, total in value.tolist()]


class ExtractionReport(_BaseSchema):
    """Запись отчёта команды extract (JSON)"""

    k: int
    strategy: EmbeddingStrategyEnum
    bits: str
    votes: list[list[int]]
    stream_large: str
    stream_groups: str
    reference: str | None = None
    bit_accuracy: float | None = None
    match_count: int | None = None
    tau: int | None = None
    detected: bool | None = None
