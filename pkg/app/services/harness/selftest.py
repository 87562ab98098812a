# app/services/harness/selftest.py

"""
✅ Быстрая самопроверка инвариантов кодека (команда `selftest`)

Каждая проверка — функция без аргументов, которая бросает AssertionError при нарушении.
"""

from itertools import combinations
from typing import Callable

import numpy as np

from app.core.exceptions import BaseTraceMarkException
from app.db.dao.latent import LatentDAO
from app.db.schemas.codec import EmbeddingParams, ModelKey, Watermark
from app.db.schemas.experiment import SelfTestCheck
from app.db.schemas.latent import LatentShape
from app.services.channel.channels import flip_probability
from app.services.codec.embedding import embed_with_retry, random_watermark
from app.services.codec.extraction import extract, majority_vote
from app.services.codec.payload import decode_payload, encode_payload, payload_capacity
from app.services.latent.sampler import sample_latent
from app.services.stats.thresholds import detection_threshold
from app.utils.logger import logger

_KEY = ModelKey(key=bytes(range(32)))


def _check_thresholds() -> None:
    for k_bits, expected in ((32, 30), (48, 41), (256, 167)):
        tau = detection_threshold(k_bits, 1e-6).tau
        assert tau == expected, f"K={k_bits}: τ={tau}, ожидалось {expected}"


def _check_small_round_trip() -> None:
    for k in (2, 4, 8):
        params = EmbeddingParams(shape=LatentShape(c=1, h=1, w=4 * k), k=k)
        for ones in combinations(range(k), k // 2):
            bits = np.zeros(k, dtype=np.uint8)
            bits[list(ones)] = 1
            m = Watermark(bits=bits)
            z_wt, _ = embed_with_retry(m, 11, _KEY, params, attempts=64)
            recovered = extract(z_wt, _KEY, params).bits
            assert np.array_equal(recovered, bits), f"k={k}: {m} → {recovered.tolist()}"


def _check_rearrangement_only() -> None:
    params = EmbeddingParams(shape=LatentShape(c=4, h=16, w=16), k=64)
    m = random_watermark(64, 5)
    z_wt, used_seed = embed_with_retry(m, 5, _KEY, params)
    raw = sample_latent(params.shape, used_seed)
    assert np.array_equal(np.sort(z_wt.values), np.sort(raw.values)), "мультимножество значений изменилось"
    assert np.array_equal(extract(z_wt, _KEY, params).bits, m.as_array()), "потеря без шума"


def _check_lwm1() -> None:
    latent = sample_latent(LatentShape(c=2, h=3, w=4), 7)
    restored = LatentDAO.decode(LatentDAO.encode(latent))
    assert restored.values.tobytes() == latent.values.tobytes(), "LWM1 не побитно"


def _check_vote_and_channel() -> None:
    bits, tallies = majority_vote([[0, 1], [0, 1], [1, 1]])
    assert bits.tolist() == [0, 1] and tallies.tolist() == [[1, 3], [3, 3]]
    assert abs(flip_probability(0.675, 0.675) - 0.158655) < 1e-6


def _check_payload() -> None:
    message = [1, 0, 1, 1, 0, 0, 1]
    assert payload_capacity(12) == 9
    assert decode_payload(encode_payload(message, 12), len(message)) == message


CHECKS: dict[str, Callable[[], None]] = {
    "detection thresholds 30/41/167": _check_thresholds,
    "lossless round trip k∈{2,4,8}, r=4k": _check_small_round_trip,
    "rearrangement only": _check_rearrangement_only,
    "LWM1 bit-exact": _check_lwm1,
    "majority vote and flip probability": _check_vote_and_channel,
    "payload adapter": _check_payload,
}


def run_selftest() -> list[SelfTestCheck]:
    """
    Выполняет все проверки.

    :return: Результат по каждой проверке; упавшие содержат текст нарушения.
    """
    results = []
    for name, check in CHECKS.items():
        try:
            check()
            results.append(SelfTestCheck(name=name, passed=True))
        except (AssertionError, BaseTraceMarkException) as exc:
            logger.error(f"Самопроверка '{name}' не пройдена: {exc}")
            results.append(SelfTestCheck(name=name, passed=False, detail=str(exc)))
    return results
