# tests/conftest.py

import os

# до импорта app: без файловых логов, тихая консоль
os.environ.setdefault("APP_MODE", "testing")
os.environ.setdefault("TMARK_LOG_TO_FILES", "false")
os.environ.setdefault("TMARK_LOG_LEVEL", "WARNING")

import pytest

from app.db.schemas.codec import EmbeddingParams, ModelKey
from app.db.schemas.latent import LatentShape


@pytest.fixture
def key() -> ModelKey:
    return ModelKey(key="a5" * 32)


@pytest.fixture
def other_key() -> ModelKey:
    return ModelKey(key="3c" * 32)


@pytest.fixture
def small_params() -> EmbeddingParams:
    """r = 1024, k = 64: восемь повторов"""
    return EmbeddingParams(shape=LatentShape(c=4, h=16, w=16), k=64)


@pytest.fixture
def full_params() -> EmbeddingParams:
    """Рабочий размер: 4×64×64, k = 256"""
    return EmbeddingParams(shape=LatentShape(c=4, h=64, w=64), k=256)
