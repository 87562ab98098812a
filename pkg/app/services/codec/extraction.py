# app/services/codec/extraction.py

"""
🔍 Извлечение водяного знака: unshuffle → deinterleave → знаки z′_l и суммы групп z′_s → голосование
"""

from typing import Sequence

import numpy as np

from app.core.exceptions import (
    EmptyInputException,
    InvalidEmbeddingParamsException,
    ShapeMismatchException,
    SizeMismatchException,
)
from app.db.models.enums import EmbeddingStrategyEnum
from app.db.schemas.codec import EmbeddingParams, ExtractionResult, ModelKey, Watermark
from app.db.schemas.latent import GaussianLatent
from app.services.codec.sequences import deinterleave
from app.services.codec.shuffle import keyed_unshuffle
from app.utils.logger import logger


def majority_vote(substreams: Sequence[np.ndarray] | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Побитное голосование по подпотокам одинаковой длины k.

    Бит равен 1, если единиц не меньше половины голосов (ничья → 1).

    :param substreams: Список подпотоков или двумерный массив (число подпотоков, k).
    :return: (bits uint8 длины k, tallies (k, 2): число единиц и всего голосов).
    :raises EmptyInputException: нет подпотоков или они пусты.
    :raises SizeMismatchException: подпотоки разной длины.
    """
    if len(substreams) == 0:
        raise EmptyInputException("Нет подпотоков для голосования")
    lengths = {len(stream) for stream in substreams}
    if len(lengths) != 1:
        raise SizeMismatchException(f"Подпотоки разной длины: {sorted(lengths)}")
    if lengths == {0}:
        raise EmptyInputException("Подпотоки пусты")

    matrix = np.asarray(substreams, dtype=np.int64)
    total = matrix.shape[0]
    ones = matrix.sum(axis=0)
    bits = (2 * ones >= total).astype(np.uint8)
    tallies = np.stack([ones, np.full_like(ones, total)], axis=1)
    return bits, tallies


def _split_streams(latent: GaussianLatent, key: ModelKey, params: EmbeddingParams) -> tuple[np.ndarray, np.ndarray]:
    if latent.shape != params.shape:
        raise ShapeMismatchException(f"Латент {latent.shape}, ожидалось {params.shape}")
    return deinterleave(keyed_unshuffle(latent.values, key), params.k)


def extract(latent: GaussianLatent, key: ModelKey, params: EmbeddingParams) -> ExtractionResult:
    """
    Восстанавливает m′ из z′_wt.

    - w₁[j] = [z′_l[j] ≥ 0], r/2 бит.
    - group: w₂[g] = [Σ группы g ≥ 0], k бит; голосов на бит r/(2k) + 1.
    - single: w₂ — знаки каждого элемента z′_s, голосов 2·r/(2k).
    - large_only: z′_s не читается, голосов r/(2k).

    :param latent: z′_wt.
    :param key: Ключ модели.
    :param params: Параметры, с которыми встраивали.
    :return: ExtractionResult.
    :raises ShapeMismatchException: форма латента не совпадает с params.shape.
    """
    z_l, z_s = _split_streams(latent, key, params)
    k = params.k
    w1 = (z_l >= 0).astype(np.uint8)

    if params.strategy == EmbeddingStrategyEnum.GROUP:
        sums = z_s.astype(np.float64).reshape(k, params.group_size).sum(axis=1)
        w2 = (sums >= 0).astype(np.uint8)
    elif params.strategy == EmbeddingStrategyEnum.SINGLE:
        w2 = (z_s >= 0).astype(np.uint8)
    else:
        w2 = np.zeros(0, dtype=np.uint8)

    bits, tallies = majority_vote(np.concatenate([w1, w2]).reshape(-1, k))
    logger.debug(f"Извлечено k={k} бит ({params.strategy}), голосов на бит: {int(tallies[0, 1])}")
    return ExtractionResult(
        bits=bits,
        votes=tallies,
        stream_large=w1,
        stream_groups=w2,
        strategy=params.strategy,
    )


def small_element_bits(
    latent: GaussianLatent,
    m: Watermark,
    key: ModelKey,
    params: EmbeddingParams,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Знаки отдельных элементов z′_s и бит, который несёт каждый элемент.

    Нужны для сравнения декодирования по сумме группы с поэлементным декодированием
    тех же элементов R.

    :return: (наблюдаемые биты [z′_s ≥ 0], ожидаемые биты), оба длины r/2.
    :raises InvalidEmbeddingParamsException: для large_only элементы R битов не несут.
    """
    if params.strategy == EmbeddingStrategyEnum.LARGE_ONLY:
        raise InvalidEmbeddingParamsException("В стратегии large_only малые элементы не несут битов")
    if m.k != params.k:
        raise SizeMismatchException(f"Длина водяного знака {m.k} ≠ k = {params.k}")
    _, z_s = _split_streams(latent, key, params)
    observed = (z_s >= 0).astype(np.uint8)
    if params.strategy == EmbeddingStrategyEnum.GROUP:
        intended = np.repeat(m.as_array(), params.group_size)
    else:
        intended = np.tile(m.as_array(), params.repetitions)
    return observed, intended
