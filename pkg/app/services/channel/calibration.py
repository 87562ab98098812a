# app/services/channel/calibration.py

from app.core.config import get_codec_settings
from app.core.exceptions import OutOfRangeException
from app.db.schemas.channel import SignFlip


def calibrate_signflip(target_large: float, target_small: float, abs_threshold: float | None = None) -> SignFlip:
    """
    Строит SignFlip по целевой согласованности знаков.

    :param target_large: Доля больших (|value| ≥ порога) элементов, сохраняющих знак.
    :param target_small: То же для малых элементов.
    :param abs_threshold: Граница по модулю; по умолчанию TMARK_ABS_THRESHOLD (0.675).
    :return: SignFlip(1 − target_large, 1 − target_small, abs_threshold).
    :raises OutOfRangeException: цели вне (0, 1).
    """
    for name, target in (("target_large", target_large), ("target_small", target_small)):
        if not (0.0 < target < 1.0):
            raise OutOfRangeException(f"{name} = {target} должна лежать в (0, 1)")
    if abs_threshold is None:
        abs_threshold = get_codec_settings().TMARK_ABS_THRESHOLD
    return SignFlip(
        p_large=round(1.0 - target_large, 12),
        p_small=round(1.0 - target_small, 12),
        abs_threshold=abs_threshold,
    )
