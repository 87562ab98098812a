# app/services/codec/partition.py

import numpy as np

from app.core.exceptions import ImbalancedSampleException, SizeMismatchException
from app.db.schemas.codec import SignPartition
from app.db.schemas.latent import GaussianLatent
from app.utils.logger import logger


def _top_by_magnitude(values: np.ndarray, index: np.ndarray, count: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Порядок по убыванию |value|, при равенстве — меньший исходный индекс раньше.

    `index` отсортирован по возрастанию, поэтому устойчивая сортировка по -|value|
    сохраняет нужный порядок среди равных.
    """
    order = np.argsort(-np.abs(values[index]), kind="stable")
    return index[order[:count]], index[order[count:]]


def partition_and_rank(latent: GaussianLatent) -> SignPartition:
    """
    Делит X на N (x < 0) и P (x ≥ 0), выделяет четверти N₁, P₁ с наибольшим |value| и остаток R.

    - N₁ (P₁) — r/4 элементов N (P) с наибольшим модулем, в порядке убывания |value|.
    - R — все прочие элементы (r/2), в порядке исходных индексов.
    - Ноль относится к P.

    :param latent: Латент X.
    :return: SignPartition.
    :raises ImbalancedSampleException: если |N| < r/4 или |P| < r/4.
    """
    values = latent.values
    r = values.size
    if r % 4:
        raise SizeMismatchException(f"r = {r} должно делиться на 4")
    quarter = r // 4

    negatives = np.flatnonzero(values < 0)
    nonnegatives = np.flatnonzero(values >= 0)
    if negatives.size < quarter or nonnegatives.size < quarter:
        logger.warning(f"Знаковый дисбаланс: |N| = {negatives.size}, |P| = {nonnegatives.size}, r/4 = {quarter}")
        raise ImbalancedSampleException(
            f"|N| = {negatives.size}, |P| = {nonnegatives.size}, требуется не меньше r/4 = {quarter}"
        )

    large_neg_index, rest_neg = _top_by_magnitude(values, negatives, quarter)
    large_pos_index, rest_pos = _top_by_magnitude(values, nonnegatives, quarter)
    residual_index = np.sort(np.concatenate([rest_neg, rest_pos]))

    return SignPartition(
        negatives=negatives,
        nonnegatives=nonnegatives,
        large_neg=values[large_neg_index],
        large_neg_index=large_neg_index,
        large_pos=values[large_pos_index],
        large_pos_index=large_pos_index,
        residual=values[residual_index],
        residual_index=residual_index,
    )


def split_residual(residual: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Сортирует R по возрастанию и делит пополам по позиции: R_n = первые r/4, R_p = остальные.

    Деление позиционное, даже если знаки по границе не сходятся.

    :param residual: Значения R (r/2 штук).
    :return: (R_n, R_p), обе половины отсортированы по возрастанию.
    """
    if residual.size % 2:
        raise SizeMismatchException(f"|R| = {residual.size} должно быть чётным")
    ordered = np.sort(residual, kind="stable")
    half = ordered.size // 2
    return ordered[:half], ordered[half:]
