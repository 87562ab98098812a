from pydantic import BaseModel, ConfigDict


class _BaseSchema(BaseModel):

    model_config = ConfigDict(
        use_enum_values=True,
        from_attributes=True,
        extra="ignore",
    )


class _ArraySchema(_BaseSchema):
    """База для схем, которые хранят numpy-массивы как есть (без копирования в списки)"""

    model_config = ConfigDict(
        use_enum_values=True,
        from_attributes=True,
        extra="ignore",
        arbitrary_types_allowed=True,
    )
