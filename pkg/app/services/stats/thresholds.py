# app/services/stats/thresholds.py

"""
📐 Пороги детекции и атрибуции по биномиальному хвосту Bin(K, ½)

Соглашение: τ — минимальное целое, для которого P(Bin(K, ½) ≥ τ) ≤ fpr; детектор
срабатывает при числе совпадений строго больше τ. Это правило даёт τ = 30, 41, 167
для K = 32, 48, 256 при fpr = 10⁻⁶.

До TMARK_EXACT_TAIL_MAX_K хвосты считаются точно на больших целых (`fractions.Fraction`),
дальше через `scipy.stats.binom.logsf`.
"""

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.stats import binom

from app.core.config import get_stats_settings
from app.core.exceptions import InvalidThresholdRequestException
from app.db.schemas.stats import DetectionThreshold
from app.utils.logger import logger


def _check_k(k_bits: int) -> None:
    if k_bits < 1:
        raise InvalidThresholdRequestException(f"K должно быть ≥ 1, получено {k_bits}")


def binomial_tail(k_bits: int, tau: int) -> Fraction:
    """
    Точный хвост P(Bin(K, ½) ≥ τ).

    :param k_bits: K.
    :param tau: Граница (τ ≤ 0 → 1, τ > K → 0).
    :return: Fraction.
    """
    _check_k(k_bits)
    if tau <= 0:
        return Fraction(1)
    if tau > k_bits:
        return Fraction(0)
    return Fraction(sum(math.comb(k_bits, j) for j in range(tau, k_bits + 1)), 1 << k_bits)


@lru_cache(maxsize=256)
def _exact_threshold(k_bits: int, fpr: float) -> int:
    bound = Fraction(fpr) * (1 << k_bits)
    tau = k_bits + 1
    running = 0
    # идём сверху вниз, пока хвост P(X ≥ j) остаётся в пределах fpr
    for j in range(k_bits, -1, -1):
        running += math.comb(k_bits, j)
        if running > bound:
            break
        tau = j
    return tau


def _log_threshold(k_bits: int, fpr: float) -> int:
    taus = np.arange(0, k_bits + 2)
    log_tails = binom.logsf(taus - 1, k_bits, 0.5)
    admissible = np.flatnonzero(log_tails <= math.log(fpr))
    return int(taus[admissible[0]]) if admissible.size else k_bits + 1


def _tail_float(k_bits: int, tau: int) -> float:
    if k_bits <= get_stats_settings().TMARK_EXACT_TAIL_MAX_K:
        return float(binomial_tail(k_bits, tau))
    return float(binom.sf(tau - 1, k_bits, 0.5))


def detection_threshold(k_bits: int, fpr: float | None = None) -> DetectionThreshold:
    """
    Минимальный порог τ для длины K и целевого FPR.

    :param k_bits: Длина водяного знака K ≥ 1.
    :param fpr: Граница FPR в (0, 1); по умолчанию TMARK_DEFAULT_FPR.
    :return: DetectionThreshold с фактическими хвостами при τ и τ + 1.
    :raises InvalidThresholdRequestException: K < 1 или fpr вне (0, 1).
    """
    settings = get_stats_settings()
    fpr = settings.TMARK_DEFAULT_FPR if fpr is None else fpr
    _check_k(k_bits)
    if not (0.0 < fpr < 1.0):
        raise InvalidThresholdRequestException(f"fpr должен лежать в (0, 1), получено {fpr}")

    if k_bits <= settings.TMARK_EXACT_TAIL_MAX_K:
        tau = _exact_threshold(k_bits, fpr)
    else:
        tau = _log_threshold(k_bits, fpr)
    logger.debug(f"Порог детекции K={k_bits}, fpr={fpr}: τ={tau}")
    return DetectionThreshold(
        k_bits=k_bits,
        tau=tau,
        fpr_bound=fpr,
        tail_at_tau=_tail_float(k_bits, tau),
        false_positive_rate=_tail_float(k_bits, tau + 1),
    )


def attribution_threshold(k_bits: int, n_users: int, fpr: float | None = None) -> int:
    """
    Порог атрибуции по union bound: detection_threshold(K, fpr / n_users).tau.
    """
    if n_users < 1:
        raise InvalidThresholdRequestException(f"Число пользователей должно быть ≥ 1, получено {n_users}")
    fpr = get_stats_settings().TMARK_DEFAULT_FPR if fpr is None else fpr
    return detection_threshold(k_bits, fpr / n_users).tau


def predict_vote_accuracy(n_large: int, q_large: float, q_group: float | None = None) -> float:
    """
    Точная вероятность верного бита после голосования.

    Голоса независимы: n_large голосов верны с вероятностью q_large, плюс один голос
    группы с вероятностью q_group (None — без него). Ничья даёт 1, поэтому для
    сбалансированного знака точность = P(C > n/2) + ½·P(C = n/2).

    :return: Средняя по битам точность.
    """
    for name, q in (("q_large", q_large), ("q_group", q_group)):
        if q is not None and not (0.0 <= q <= 1.0):
            raise InvalidThresholdRequestException(f"{name} = {q} вне [0, 1]")
    pmf = binom.pmf(np.arange(n_large + 1), n_large, q_large)
    if q_group is not None:
        pmf = np.convolve(pmf, [1.0 - q_group, q_group])
    total = pmf.size - 1
    correct = np.arange(total + 1)
    accuracy = pmf[2 * correct > total].sum()
    if total % 2 == 0:
        accuracy += 0.5 * pmf[total // 2]
    return float(accuracy)
