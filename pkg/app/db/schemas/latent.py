# app/db/schemas/latent.py

import re
from typing import Annotated
try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self

import numpy as np
from pydantic import Field, field_validator, model_validator

from app.core.exceptions import (
    InvalidShapeException,
    LatentLengthException,
    NonFiniteLatentException,
)
from app.db.schemas.base_schemas import _BaseSchema, _ArraySchema

SEED_LIMIT = 2**64

# 64-битный беззнаковый seed: любое значение допустимо
Seed = Annotated[int, Field(ge=0, lt=SEED_LIMIT, description="64-битный seed")]

_SHAPE_PATTERN = re.compile(r"^\s*(\d+)\s*[xX×,]\s*(\d+)\s*[xX×,]\s*(\d+)\s*$")


class LatentShape(_BaseSchema):
    c: int = Field(..., description="Число каналов")
    h: int = Field(..., description="Высота")
    w: int = Field(..., description="Ширина")

    @model_validator(mode="after")
    def check_dimensions(self) -> Self:
        if min(self.c, self.h, self.w) < 1:
            raise InvalidShapeException(
                f"Все размерности должны быть ≥ 1, получено {self.c}x{self.h}x{self.w}"
            )
        return self

    @property
    def r(self) -> int:
        """Полная длина латента r = c·h·w"""
        return self.c * self.h * self.w

    @classmethod
    def parse(cls, text: str) -> "LatentShape":
        """
        Разбирает форму из строки вида "4x64x64".

        :param text: Строка формы.
        :return: LatentShape.
        """
        match = _SHAPE_PATTERN.match(text)
        if not match:
            raise InvalidShapeException(f"Форма '{text}' не в формате CxHxW")
        c, h, w = (int(group) for group in match.groups())
        return cls(c=c, h=h, w=w)

    def __str__(self) -> str:
        return f"{self.c}x{self.h}x{self.w}"


class GaussianLatent(_ArraySchema):
    """
    Латентный вектор X (он же z_wt после встраивания и z′_wt после канала).

    Значения хранятся плоско в порядке (c, h, w) как float32.
    """

    values: np.ndarray = Field(..., description="r значений float32")
    shape: LatentShape

    @field_validator("values", mode="before")
    @classmethod
    def to_float32(cls, value) -> np.ndarray:
        array = np.ascontiguousarray(np.asarray(value, dtype=np.float32).reshape(-1))
        return array

    @model_validator(mode="after")
    def check_values(self) -> Self:
        if self.values.size != self.shape.r:
            raise LatentLengthException(expected=self.shape.r, actual=int(self.values.size))
        if not np.all(np.isfinite(self.values)):
            raise NonFiniteLatentException()
        return self

    @property
    def r(self) -> int:
        return self.shape.r

    def as_tensor(self) -> np.ndarray:
        """Представление (c, h, w) без копирования"""
        return self.values.reshape(self.shape.c, self.shape.h, self.shape.w)
