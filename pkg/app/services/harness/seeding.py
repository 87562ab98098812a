# app/services/harness/seeding.py

"""
🌱 Счётная схема seed для испытаний

seed(purpose) = первые 8 байт blake2b (big-endian) от строки
"{base_seed}:{k}:{channel_index}:{trial_index}:{purpose}", purpose ∈ {latent, watermark, channel};
ключ модели — 32-байтный blake2b той же строки с purpose = key.

Каждое испытание получает независимые потоки без координации между процессами.
"""

import hashlib

from app.db.schemas.codec import ModelKey
from app.db.schemas.experiment import TrialSeeds

_SEED_BYTES = 8
_KEY_BYTES = 32


def _digest(base_seed: int, k: int, channel_index: int, trial_index: int, purpose: str, size: int) -> bytes:
    label = f"{base_seed}:{k}:{channel_index}:{trial_index}:{purpose}"
    return hashlib.blake2b(label.encode("ascii"), digest_size=size).digest()


def derive_seed(base_seed: int, k: int, channel_index: int, trial_index: int, purpose: str) -> int:
    return int.from_bytes(_digest(base_seed, k, channel_index, trial_index, purpose, _SEED_BYTES), "big")


def derive_trial_seeds(base_seed: int, k: int, channel_index: int, trial_index: int) -> TrialSeeds:
    """
    Все seed испытания (k, channel_index, trial_index).

    :return: TrialSeeds с seed латента, водяного знака, канала и ключом модели.
    """
    coords = (base_seed, k, channel_index, trial_index)
    return TrialSeeds(
        latent=derive_seed(*coords, "latent"),
        watermark=derive_seed(*coords, "watermark"),
        channel=derive_seed(*coords, "channel"),
        key=ModelKey(key=_digest(*coords, "key", _KEY_BYTES)),
    )
