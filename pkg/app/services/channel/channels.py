# app/services/channel/channels.py

"""
📡 Модель канала «денойзинг → атака → инверсия» как возмущение латента

Случайность: `SeedSequence(trial_seed)` → Philox4x64-10; Compose порождает по дочерней
последовательности на каждую стадию (`SeedSequence.spawn`). Вычисления в float64,
результат приводится к float32.
"""

import math

import numpy as np
from scipy.special import ndtr

from app.core.exceptions import NonpositiveSigmaException
from app.db.schemas.channel import (
    AdditiveGaussian,
    ChannelRun,
    ChannelSpec,
    Compose,
    IdentityChannel,
    SignFlip,
)
from app.db.schemas.latent import GaussianLatent
from app.utils.logger import logger


def _generator(sequence: np.random.SeedSequence) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(sequence))


def perturb(values: np.ndarray, spec: ChannelSpec, sequence: np.random.SeedSequence) -> np.ndarray:
    """
    Применяет канал к массиву float64 любой формы.

    :param values: Входные значения (не изменяются).
    :param spec: Описание канала.
    :param sequence: Источник случайности стадии.
    :return: Новый массив той же формы.
    """
    match spec:
        case IdentityChannel():
            return values.copy()
        case AdditiveGaussian(sigma=sigma):
            return values + _generator(sequence).normal(0.0, sigma, size=values.shape)
        case SignFlip(p_large=p_large, p_small=p_small, abs_threshold=threshold):
            flip_chance = np.where(np.abs(values) >= threshold, p_large, p_small)
            flipped = _generator(sequence).random(size=values.shape) < flip_chance
            return np.where(flipped, -values, values)
        case Compose(stages=stages):
            out = values.copy()
            for stage, child in zip(stages, sequence.spawn(len(stages))):
                out = perturb(out, stage, child)
            return out
    raise TypeError(f"Неизвестный канал {spec!r}")


def apply_channel(z: GaussianLatent, run: ChannelRun) -> GaussianLatent:
    """
    Пропускает латент через канал.

    :param z: Латент z_wt.
    :param run: Канал и seed испытания; одинаковые (z, run) дают одинаковый результат.
    :return: z′_wt той же формы.
    """
    values = perturb(z.values.astype(np.float64), run.spec, np.random.SeedSequence(run.trial_seed))
    return GaussianLatent(values=values, shape=z.shape)


def flip_probability(value: float | np.ndarray, sigma: float) -> float | np.ndarray:
    """
    Вероятность смены знака значения под AdditiveGaussian(σ): Φ(−|value|/σ).

    Φ считается через `scipy.special.ndtr` (абсолютная погрешность порядка машинного эпсилон).

    :raises NonpositiveSigmaException: σ ≤ 0 или не конечна.
    """
    if not math.isfinite(sigma) or sigma <= 0:
        raise NonpositiveSigmaException(sigma)
    result = ndtr(-np.abs(np.asarray(value, dtype=np.float64)) / sigma)
    return float(result) if np.ndim(result) == 0 else result


def empirical_flip_rate(values: np.ndarray, spec: ChannelSpec, trials: int, seed: int) -> np.ndarray:
    """
    Эмпирическая доля смен знака для каждого значения за trials независимых прогонов канала.

    Знак считается по правилу «≥ 0 → неотрицательный».

    :param values: Значения v.
    :param spec: Канал.
    :param trials: Число прогонов.
    :param seed: Seed серии.
    :return: Доли смен знака, по одной на значение.
    """
    base = np.asarray(values, dtype=np.float64).reshape(-1)
    batch = np.broadcast_to(base, (trials, base.size))
    out = perturb(np.array(batch), spec, np.random.SeedSequence(seed))
    changed = (out >= 0) != (batch >= 0)
    rates = changed.mean(axis=0)
    logger.debug(f"Эмпирические доли смены знака ({trials} прогонов): {np.round(rates, 5).tolist()}")
    return rates
