# app/services/codec/payload.py

"""
📦 Адаптер полезной нагрузки: произвольные биты ↔ сбалансированный водяной знак

Перечислительное кодирование: сообщение читается как целое (старший бит первый) и
становится номером слова в лексикографическом порядке сбалансированных слов длины k.
Ёмкость ⌊log₂ C(k, k/2)⌋ бит.
"""

from math import comb
from typing import Sequence

import numpy as np

from app.core.exceptions import PayloadException
from app.db.schemas.codec import Watermark


def payload_capacity(k: int) -> int:
    """Сколько бит сообщения помещается в сбалансированное слово длины k"""
    if k < 2 or k % 2:
        raise PayloadException(f"k должно быть чётным и ≥ 2, получено {k}")
    return comb(k, k // 2).bit_length() - 1


def _bits_to_int(bits: Sequence[int]) -> int:
    value = 0
    for bit in bits:
        if bit not in (0, 1):
            raise PayloadException(f"Бит сообщения {bit!r} не 0/1")
        value = (value << 1) | int(bit)
    return value


def encode_payload(bits: Sequence[int] | str, k: int) -> Watermark:
    """
    Кодирует сообщение в сбалансированный водяной знак.

    :param bits: Биты сообщения (не длиннее ёмкости; короткие дополняются нулями слева).
    :param k: Длина водяного знака.
    :return: Watermark.
    """
    capacity = payload_capacity(k)
    if isinstance(bits, str):
        message = [{"0": 0, "1": 1}.get(char, char) for char in bits.strip()]
    else:
        message = np.asarray(bits).reshape(-1).tolist()
    if len(message) > capacity:
        raise PayloadException(f"Сообщение {len(message)} бит больше ёмкости {capacity} для k={k}")
    index = _bits_to_int(message)

    word = []
    ones_left = k // 2
    for position in range(k):
        remaining = k - position - 1
        # сколько слов начинается с 0 в этой позиции
        with_zero = comb(remaining, ones_left)
        if index < with_zero:
            word.append(0)
        else:
            index -= with_zero
            word.append(1)
            ones_left -= 1
    return Watermark(bits=word)


def decode_payload(m: Watermark, length: int | None = None) -> list[int]:
    """
    Обратное к encode_payload.

    :param m: Водяной знак.
    :param length: Длина сообщения; по умолчанию полная ёмкость.
    :return: Биты сообщения.
    :raises PayloadException: номер слова вне ёмкости (слово не получено из encode_payload).
    """
    capacity = payload_capacity(m.k)
    length = capacity if length is None else length
    if not (0 <= length <= capacity):
        raise PayloadException(f"Длина сообщения {length} вне [0, {capacity}]")

    index = 0
    ones_left = m.k // 2
    for position, bit in enumerate(m.bits):
        if bit:
            index += comb(m.k - position - 1, ones_left)
            ones_left -= 1
    if index >= 1 << length:
        raise PayloadException(f"Номер слова {index} не помещается в {length} бит")
    return [(index >> shift) & 1 for shift in range(length - 1, -1, -1)]
