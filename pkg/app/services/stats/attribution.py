# app/services/stats/attribution.py

import numpy as np

from app.core.exceptions import LengthMismatchException
from app.db.schemas.stats import AttributionDirectory, AttributionResult
from app.services.stats.metrics import BitsLike, as_bits
from app.services.stats.thresholds import attribution_threshold
from app.utils.logger import logger


def attribute(m_prime: BitsLike, directory: AttributionDirectory) -> AttributionResult:
    """
    Сопоставляет извлечённый m′ со справочником подписей пользователей.

    - Порог: directory.tau_attr, а если он не задан — detection_threshold(K, fpr / n_users).tau.
    - Пользователь возвращается, только если его совпадений строго больше порога.
    - Ничья за первое место над порогом — None: неоднозначная атрибуция никого не обвиняет.

    :param m_prime: Извлечённый водяной знак.
    :param directory: Справочник подписей.
    :return: AttributionResult (user = None, если атрибуции нет).
    """
    bits = as_bits(m_prime)
    if bits.size != directory.k_bits:
        raise LengthMismatchException(bits.size, directory.k_bits)

    tau = directory.tau_attr
    if tau is None:
        tau = attribution_threshold(directory.k_bits, directory.n_users, directory.fpr)

    signatures = np.stack([signature.as_array() for signature in directory.signatures])
    matches = np.count_nonzero(signatures == bits, axis=1)
    best = int(matches.max())
    leaders = np.flatnonzero(matches == best)

    user = None
    if best > tau and leaders.size == 1:
        user = int(leaders[0])
    elif best > tau:
        logger.warning(f"Ничья при атрибуции: пользователи {leaders.tolist()} с {best} совпадениями")
    logger.info(f"Атрибуция: лучший {best}/{directory.k_bits} совпадений, τ_attr={tau}, пользователь={user}")
    return AttributionResult(user=user, match_count=best, tau_attr=tau)
