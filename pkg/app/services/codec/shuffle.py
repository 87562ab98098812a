# app/services/codec/shuffle.py

"""
🔑 Перестановка позиций по ключу модели s

π(s, r) — равномерная перестановка numpy `Generator.permutation` (Fisher–Yates) над
Philox4x64-10, засеянным `SeedSequence(entropy=int(s), spawn_key=(r,))`.
π отображает новый индекс в старый: z_wt[i] = z_m[π[i]].
"""

from functools import lru_cache

import numpy as np

from app.core.exceptions import SizeMismatchException
from app.db.schemas.codec import ModelKey
from app.db.schemas.latent import GaussianLatent, LatentShape


@lru_cache(maxsize=32)
def permutation_for_key(key_int: int, r: int) -> np.ndarray:
    """
    Перестановка π(s, r); результат кэшируется и доступен только для чтения.

    :param key_int: Ключ как целое (big-endian).
    :param r: Длина латента.
    :return: int64-массив длины r.
    """
    sequence = np.random.SeedSequence(entropy=key_int, spawn_key=(r,))
    perm = np.random.Generator(np.random.Philox(sequence)).permutation(r)
    perm.setflags(write=False)
    return perm


def keyed_shuffle(z_m: np.ndarray, key: ModelKey, shape: LatentShape) -> GaussianLatent:
    """
    Перемешивает z_m по ключу и собирает латент нужной формы.

    :param z_m: Последовательность длины r.
    :param key: Ключ модели.
    :param shape: Форма результата.
    :return: z_wt.
    """
    values = np.asarray(z_m).reshape(-1)
    if values.size != shape.r:
        raise SizeMismatchException(f"|z_m| = {values.size} ≠ r = {shape.r}")
    perm = permutation_for_key(key.as_int, shape.r)
    return GaussianLatent(values=values[perm], shape=shape)


def keyed_unshuffle(values: np.ndarray, key: ModelKey) -> np.ndarray:
    """Обратная перестановка: keyed_unshuffle(keyed_shuffle(v, s).values, s) == v"""
    flat = np.asarray(values).reshape(-1)
    perm = permutation_for_key(key.as_int, flat.size)
    out = np.empty_like(flat)
    out[perm] = flat
    return out
