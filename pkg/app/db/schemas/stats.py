# app/db/schemas/stats.py

try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self

from pydantic import Field, model_validator

from app.core.exceptions import EmptyDirectoryException, UnbalancedWatermarkException
from app.db.schemas.base_schemas import _BaseSchema
from app.db.schemas.codec import Watermark


class DetectionThreshold(_BaseSchema):
    k_bits: int = Field(..., description="Длина водяного знака K")
    tau: int = Field(..., description="Порог совпадений τ")
    fpr_bound: float = Field(..., description="Целевая граница FPR")
    tail_at_tau: float = Field(..., description="P(Bin(K, ½) ≥ τ)")
    false_positive_rate: float = Field(..., description="P(Bin(K, ½) > τ) — фактический FPR детектора")


class AttributionDirectory(_BaseSchema):
    signatures: list[Watermark] = Field(..., description="Подписи пользователей m⁽¹⁾…m⁽ᴺ⁾")
    tau_attr: int | None = Field(default=None, description="Порог атрибуции; None — по union bound")
    fpr: float = Field(default=1e-6, description="FPR на весь справочник")

    @model_validator(mode="after")
    def check_signatures(self) -> Self:
        if not self.signatures:
            raise EmptyDirectoryException()
        lengths = {signature.k for signature in self.signatures}
        if len(lengths) != 1:
            raise UnbalancedWatermarkException(f"Подписи разной длины: {sorted(lengths)}")
        if len({signature.bits for signature in self.signatures}) != len(self.signatures):
            raise UnbalancedWatermarkException("Подписи пользователей должны быть попарно различны")
        return self

    @property
    def n_users(self) -> int:
        return len(self.signatures)

    @property
    def k_bits(self) -> int:
        return self.signatures[0].k


class AttributionResult(_BaseSchema):
    user: int | None = Field(default=None, description="Индекс пользователя или None")
    match_count: int
    tau_attr: int


class TTestResult(_BaseSchema):
    t_value: float
    df: float
    p_value: float
    significant: bool


class KSResult(_BaseSchema):
    statistic: float
    p_value: float
    passed: bool


class ProportionTestResult(_BaseSchema):
    rate_a: float
    rate_b: float
    z_value: float
    p_value: float
