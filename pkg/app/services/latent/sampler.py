# app/services/latent/sampler.py

"""
🎲 Детерминированная генерация латентов X ~ N(0, 1)

Алгоритм зафиксирован и должен совпадать во всех реализациях:

1. Генератор Philox4x64-10, ключ = seed (64 бита), счётчик с нуля.
2. Каждое сырое 64-битное слово u превращается в равномерное
   ((u >> 11) + 0.5) · 2⁻⁵³ ∈ (0, 1) — концы интервала недостижимы.
3. Нормальное значение — обратная функция распределения (`scipy.special.ndtri`).
4. Результат хранится как float32 в порядке (c, h, w).

Одинаковая пара (shape, seed) даёт побитно одинаковый вектор на любой платформе.
"""

import numpy as np
from scipy.special import ndtri

from app.core.exceptions import LatentException
from app.db.schemas.latent import GaussianLatent, LatentShape, SEED_LIMIT

_MANTISSA_SHIFT = np.uint64(11)
_UNIT = 2.0**-53


def uniform_stream(seed: int, size: int) -> np.ndarray:
    """
    Поток равномерных чисел из (0, 1) по счётчику Philox.

    :param seed: 64-битный seed (ключ Philox).
    :param size: Сколько значений нужно.
    :return: float64-массив длины size.
    """
    if not (0 <= seed < SEED_LIMIT):
        raise LatentException(f"seed {seed} вне диапазона [0, 2⁶⁴)", error_code="1004")
    generator = np.random.Philox(key=seed)
    raw = generator.random_raw(size)
    return ((raw >> _MANTISSA_SHIFT).astype(np.float64) + 0.5) * _UNIT


def sample_latent(shape: LatentShape, seed: int) -> GaussianLatent:
    """
    Сэмплирует r = c·h·w независимых значений N(0, 1).

    :param shape: Форма латента.
    :param seed: 64-битный seed.
    :return: GaussianLatent длины shape.r.
    """
    values = ndtri(uniform_stream(seed, shape.r)).astype(np.float32)
    return GaussianLatent(values=values, shape=shape)
