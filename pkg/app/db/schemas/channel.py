# app/db/schemas/channel.py

import math
from typing import Annotated, Literal, Union
try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self

from pydantic import Field, model_validator

from app.core.exceptions import NonpositiveSigmaException, OutOfRangeException
from app.db.schemas.base_schemas import _BaseSchema
from app.db.schemas.latent import Seed


class IdentityChannel(_BaseSchema):
    kind: Literal["identity"] = "identity"


class AdditiveGaussian(_BaseSchema):
    """Ошибка инверсии как i.i.d. N(0, σ²) на каждом элементе"""

    kind: Literal["gauss"] = "gauss"
    sigma: float = Field(..., description="Стандартное отклонение шума")

    @model_validator(mode="after")
    def check_sigma(self) -> Self:
        if not math.isfinite(self.sigma) or self.sigma <= 0:
            raise NonpositiveSigmaException(self.sigma)
        return self


class SignFlip(_BaseSchema):
    """Независимая смена знака: p_large для |value| ≥ abs_threshold, иначе p_small"""

    kind: Literal["flip"] = "flip"
    p_large: float = Field(..., description="Вероятность смены знака у больших элементов")
    p_small: float = Field(..., description="Вероятность смены знака у малых элементов")
    abs_threshold: float = Field(default=0.675, description="Граница по модулю")

    @model_validator(mode="after")
    def check_probabilities(self) -> Self:
        for name, value in (("p_large", self.p_large), ("p_small", self.p_small)):
            if not (0.0 <= value <= 1.0):
                raise OutOfRangeException(f"{name} = {value} вне [0, 1]")
        if not math.isfinite(self.abs_threshold) or self.abs_threshold < 0:
            raise OutOfRangeException(f"abs_threshold = {self.abs_threshold} должен быть ≥ 0")
        return self


class Compose(_BaseSchema):
    """Последовательное применение каналов"""

    kind: Literal["compose"] = "compose"
    stages: list["ChannelSpec"] = Field(default_factory=list)


ChannelSpec = Annotated[
    Union[IdentityChannel, AdditiveGaussian, SignFlip, Compose],
    Field(discriminator="kind"),
]

Compose.model_rebuild()


class ChannelRun(_BaseSchema):
    """Канал плюс seed испытания: результат детерминирован парой (spec, trial_seed)"""

    spec: ChannelSpec
    trial_seed: Seed = 0
