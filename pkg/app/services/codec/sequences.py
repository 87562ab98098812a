# app/services/codec/sequences.py

import numpy as np

from app.core.exceptions import ExhaustedPoolException, SizeMismatchException
from app.db.schemas.codec import EmbeddingParams, GroupPlan, SignPartition, Watermark


def _fill_by_bits(pattern: np.ndarray, zeros_pool: np.ndarray, ones_pool: np.ndarray) -> np.ndarray:
    """Позиции с битом 0 по порядку забирают zeros_pool, с битом 1 — ones_pool"""
    is_zero = pattern == 0
    if int(is_zero.sum()) != zeros_pool.shape[0]:
        raise ExhaustedPoolException("отрицательных элементов")
    if int((~is_zero).sum()) != ones_pool.shape[0]:
        raise ExhaustedPoolException("неотрицательных элементов")
    out = np.empty((pattern.size,) + zeros_pool.shape[1:], dtype=zeros_pool.dtype)
    out[is_zero] = zeros_pool
    out[~is_zero] = ones_pool
    return out


def build_large_sequence(m: Watermark, part: SignPartition, params: EmbeddingParams) -> np.ndarray:
    """
    Строит z_l: m проходится r/(2k) раз, бит 0 берёт очередной элемент N₁, бит 1 — P₁.

    Элементы расходуются по убыванию |value|, каждый ровно один раз, так что знак
    z_l[j] кодирует бит m[j mod k].

    :return: r/2 значений.
    """
    pattern = np.tile(m.as_array(), params.repetitions)
    return _fill_by_bits(pattern, part.large_neg, part.large_pos)


def build_group_sequence(m: Watermark, plan: GroupPlan) -> np.ndarray:
    """
    Строит z_s: за один проход по m бит 0 добавляет очередную группу G_n целиком, бит 1 — G_p.

    :return: r/2 значений; знак суммы каждого блока из r/(2k) элементов кодирует бит.
    """
    if plan.group_count * 2 != m.k:
        raise SizeMismatchException(f"План на {plan.group_count * 2} бит, водяной знак на {m.k}")
    return _fill_by_bits(m.as_array(), plan.neg_groups, plan.pos_groups).reshape(-1)


def build_single_sequence(m: Watermark, neg_half: np.ndarray, pos_half: np.ndarray, params: EmbeddingParams) -> np.ndarray:
    """
    Поэлементная перестановка R (без групп): как z_l, но из R_n (самые отрицательные первыми)
    и R_p (самые большие первыми).
    """
    pattern = np.tile(m.as_array(), params.repetitions)
    return _fill_by_bits(pattern, neg_half, pos_half[::-1])


def interleave(z_l: np.ndarray, z_s: np.ndarray, k: int) -> np.ndarray:
    """
    Блочное чередование: k элементов z_l, затем k элементов z_s, и так r/(2k) раз.

    :return: z_m длины r.
    """
    if z_l.size != z_s.size:
        raise SizeMismatchException(f"|z_l| = {z_l.size} ≠ |z_s| = {z_s.size}")
    if k < 1 or z_l.size % k:
        raise SizeMismatchException(f"k = {k} не делит длину {z_l.size}")
    blocks = z_l.size // k
    return np.stack([z_l.reshape(blocks, k), z_s.reshape(blocks, k)], axis=1).reshape(-1)


def deinterleave(z_m: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Обратное к interleave: (z_l, z_s)"""
    if k < 1 or z_m.size % (2 * k):
        raise SizeMismatchException(f"2k = {2 * k} не делит длину {z_m.size}")
    blocks = z_m.reshape(-1, 2, k)
    return blocks[:, 0, :].reshape(-1), blocks[:, 1, :].reshape(-1)
