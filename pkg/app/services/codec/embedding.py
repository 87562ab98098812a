# app/services/codec/embedding.py

"""
🖋️ Встраивание водяного знака перестановкой значений латента

Цепочка: sample_latent → partition_and_rank → z_l → (R_n, R_p) → z_s → interleave → keyed_shuffle.
Результат — перестановка исходного X: распределение значений не меняется.
"""

import numpy as np

from app.core.config import get_codec_settings
from app.core.exceptions import (
    ImbalancedSampleException,
    SizeMismatchException,
    UnbalancedWatermarkException,
)
from app.db.models.enums import EmbeddingStrategyEnum
from app.db.schemas.codec import EmbeddingParams, ModelKey, Watermark
from app.db.schemas.latent import GaussianLatent, SEED_LIMIT
from app.services.codec.grouping import build_group_plan
from app.services.codec.partition import partition_and_rank, split_residual
from app.services.codec.sequences import (
    build_group_sequence,
    build_large_sequence,
    build_single_sequence,
    interleave,
)
from app.services.codec.shuffle import keyed_shuffle
from app.services.latent.sampler import sample_latent
from app.utils.logger import logger


def _small_sequence(m: Watermark, residual: np.ndarray, params: EmbeddingParams) -> np.ndarray:
    if params.strategy == EmbeddingStrategyEnum.LARGE_ONLY:
        return residual.copy()
    neg_half, pos_half = split_residual(residual)
    if params.strategy == EmbeddingStrategyEnum.SINGLE:
        return build_single_sequence(m, neg_half, pos_half, params)
    return build_group_sequence(m, build_group_plan(neg_half, pos_half, params.k))


def embed_latent(m: Watermark, latent: GaussianLatent, key: ModelKey, params: EmbeddingParams) -> GaussianLatent:
    """
    Встраивает m в уже сэмплированный латент.

    :param m: Сбалансированный водяной знак длины params.k.
    :param latent: Исходный X формы params.shape.
    :param key: Ключ модели.
    :param params: Параметры встраивания.
    :return: z_wt — перестановка значений latent.
    :raises ImbalancedSampleException: при знаковом дисбалансе X.
    """
    if m.k != params.k:
        raise SizeMismatchException(f"Длина водяного знака {m.k} ≠ k = {params.k}")
    if latent.shape != params.shape:
        raise SizeMismatchException(f"Форма латента {latent.shape} ≠ {params.shape}")

    part = partition_and_rank(latent)
    z_l = build_large_sequence(m, part, params)
    z_s = _small_sequence(m, part.residual, params)
    return keyed_shuffle(interleave(z_l, z_s, params.k), key, params.shape)


def embed(m: Watermark, seed: int, key: ModelKey, params: EmbeddingParams) -> GaussianLatent:
    """
    Алгоритм встраивания целиком: сэмплирование по seed, затем embed_latent.

    :param m: Водяной знак.
    :param seed: 64-битный seed латента.
    :param key: Ключ модели.
    :param params: Параметры встраивания.
    :return: z_wt.
    """
    latent = sample_latent(params.shape, seed)
    z_wt = embed_latent(m, latent, key, params)
    logger.debug(f"Встроен водяной знак k={params.k} ({params.strategy}) в латент {params.shape}, seed={seed}")
    return z_wt


def embed_with_retry(
    m: Watermark,
    seed: int,
    key: ModelKey,
    params: EmbeddingParams,
    attempts: int | None = None,
) -> tuple[GaussianLatent, int]:
    """
    embed с пересэмплированием: при знаковом дисбалансе пробует seed+1, seed+2, … (по модулю 2⁶⁴).

    :param attempts: Максимум попыток; по умолчанию TMARK_RESAMPLE_ATTEMPTS.
    :return: (z_wt, seed, на котором встраивание удалось).
    :raises ImbalancedSampleException: если все попытки исчерпаны.
    """
    attempts = attempts or get_codec_settings().TMARK_RESAMPLE_ATTEMPTS
    for attempt in range(attempts):
        current = (seed + attempt) % SEED_LIMIT
        try:
            return embed(m, current, key, params), current
        except ImbalancedSampleException as exc:
            logger.warning(f"Попытка {attempt + 1}/{attempts}, seed={current}: {exc.detail}")
    logger.error(f"Не удалось встроить водяной знак за {attempts} попыток начиная с seed={seed}")
    raise ImbalancedSampleException(f"Знаковый дисбаланс на всех {attempts} seed начиная с {seed}")


def random_watermark(k: int, seed: int) -> Watermark:
    """
    Случайный сбалансированный водяной знак: перестановка k/2 нулей и k/2 единиц (Philox, ключ = seed).
    """
    if k < 2 or k % 2:
        raise UnbalancedWatermarkException(f"Длина водяного знака должна быть чётной и ≥ 2, получено {k}")
    generator = np.random.Generator(np.random.Philox(key=seed))
    return Watermark(bits=generator.permutation(np.repeat(np.array([0, 1], dtype=np.uint8), k // 2)))
