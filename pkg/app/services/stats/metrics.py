# app/services/stats/metrics.py

from typing import Iterable, Sequence

import numpy as np

from app.core.exceptions import EmptyInputException, InvalidBitsException, LengthMismatchException
from app.db.schemas.codec import Watermark
from app.db.schemas.stats import DetectionThreshold

BitsLike = Watermark | Sequence[int] | np.ndarray | str


def as_bits(value: BitsLike) -> np.ndarray:
    """
    Приводит водяной знак, строку '0101' или массив к uint8-вектору.

    :raises InvalidBitsException: встретилось что-то кроме 0 и 1.
    """
    if isinstance(value, Watermark):
        return value.as_array()
    if isinstance(value, str):
        text = value.strip()
        if set(text) - {"0", "1"}:
            raise InvalidBitsException(f"Недопустимые символы в '{text[:32]}'")
        return np.frombuffer(text.encode("ascii"), dtype=np.uint8) - ord("0")
    raw = np.asarray(value).reshape(-1)
    if raw.size and not np.isin(raw, (0, 1)).all():
        raise InvalidBitsException()
    return raw.astype(np.uint8)


def match_count(m: BitsLike, m_prime: BitsLike) -> int:
    """
    Число совпадающих позиций.

    :raises LengthMismatchException: длины различаются.
    :raises EmptyInputException: пустые последовательности.
    """
    left, right = as_bits(m), as_bits(m_prime)
    if left.size != right.size:
        raise LengthMismatchException(left.size, right.size)
    if left.size == 0:
        raise EmptyInputException("Пустые последовательности бит")
    return int(np.count_nonzero(left == right))


def bit_accuracy(m: BitsLike, m_prime: BitsLike) -> float:
    """Доля совпавших бит, ∈ [0, 1]"""
    return match_count(m, m_prime) / as_bits(m).size


def detect(m: BitsLike, m_prime: BitsLike, thresh: DetectionThreshold) -> bool:
    """
    Решение детектора: совпадений строго больше τ.

    :raises LengthMismatchException: длина не равна K порога.
    """
    matches = match_count(m, m_prime)
    if as_bits(m).size != thresh.k_bits:
        raise LengthMismatchException(as_bits(m).size, thresh.k_bits)
    return matches > thresh.tau


def tpr_over_samples(pairs: Iterable[tuple[BitsLike, BitsLike]], thresh: DetectionThreshold) -> float:
    """
    TPR: доля пар (m, m′), на которых детектор срабатывает.

    :raises EmptyInputException: пар нет.
    """
    hits = total = 0
    for m, m_prime in pairs:
        hits += detect(m, m_prime, thresh)
        total += 1
    if not total:
        raise EmptyInputException("Нет пар для TPR")
    return hits / total
