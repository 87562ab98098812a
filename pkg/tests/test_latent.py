# tests/test_latent.py

import struct

import numpy as np
import pytest

from app.core.exceptions import (
    DataFileException,
    InvalidShapeException,
    LatentException,
    LatentFormatException,
    LatentLengthException,
    NonFiniteLatentException,
)
from app.db.dao.latent import LatentDAO
from app.db.schemas.latent import GaussianLatent, LatentShape
from app.services.latent.sampler import sample_latent, uniform_stream
from app.services.stats.significance import normality_test


def test_shape_r_and_parse():
    shape = LatentShape.parse("4x64x64")
    assert (shape.c, shape.h, shape.w) == (4, 64, 64)
    assert shape.r == 16384
    assert str(shape) == "4x64x64"


@pytest.mark.parametrize("dims", [(0, 1, 1), (1, 0, 1), (1, 1, -2)])
def test_shape_rejects_nonpositive(dims):
    c, h, w = dims
    with pytest.raises(InvalidShapeException):
        LatentShape(c=c, h=h, w=w)


def test_shape_parse_rejects_garbage():
    with pytest.raises(InvalidShapeException):
        LatentShape.parse("4 by 64")


def test_sample_is_deterministic():
    shape = LatentShape(c=4, h=64, w=64)
    first = sample_latent(shape, 7)
    second = sample_latent(shape, 7)
    assert first.values.size == 16384
    assert first.values.tobytes() == second.values.tobytes()


def test_sample_differs_between_seeds():
    shape = LatentShape(c=1, h=1, w=64)
    assert not np.array_equal(sample_latent(shape, 1).values, sample_latent(shape, 2).values)


def test_tiny_shape_length():
    latent = sample_latent(LatentShape(c=1, h=1, w=4), 123)
    assert latent.values.shape == (4,)
    assert latent.values.dtype == np.float32
    assert latent.as_tensor().shape == (1, 1, 4)


def test_uniform_stream_is_open_interval():
    u = uniform_stream(99, 100_000)
    assert u.min() > 0.0 and u.max() < 1.0


@pytest.mark.parametrize("seed", [0, 7, 2**63, 2**64 - 1])
def test_moments_of_standard_normal(seed):
    values = sample_latent(LatentShape(c=4, h=64, w=64), seed).values.astype(np.float64)
    # σ(mean) ≈ 0.0078, σ(var) ≈ 0.011: границы дальше пяти сигм
    assert -0.05 < values.mean() < 0.05
    assert 0.9 < values.var() < 1.1


def test_sample_passes_normality():
    assert normality_test(sample_latent(LatentShape(c=4, h=64, w=64), 11).values).passed


def test_seed_out_of_range():
    with pytest.raises(LatentException):
        sample_latent(LatentShape(c=1, h=1, w=4), 2**64)


def test_latent_rejects_wrong_length_and_nan():
    shape = LatentShape(c=1, h=2, w=2)
    with pytest.raises(LatentLengthException):
        GaussianLatent(values=[0.0, 1.0, 2.0], shape=shape)
    with pytest.raises(NonFiniteLatentException):
        GaussianLatent(values=[0.0, np.nan, 1.0, 2.0], shape=shape)


def test_lwm1_round_trip_is_bit_exact(tmp_path):
    latent = sample_latent(LatentShape(c=2, h=3, w=5), 42)
    path = LatentDAO.write_latent(tmp_path / "nested" / "z.lwm", latent)
    restored = LatentDAO.read_latent(path)
    assert restored.shape == latent.shape
    assert restored.values.tobytes() == latent.values.tobytes()


def test_lwm1_layout(tmp_path):
    latent = sample_latent(LatentShape(c=2, h=3, w=5), 42)
    payload = LatentDAO.write_latent(tmp_path / "z.lwm", latent).read_bytes()
    assert payload[:4] == b"LWM1"
    assert struct.unpack("<III", payload[4:16]) == (2, 3, 5)
    assert len(payload) == 16 + 4 * 30
    assert np.array_equal(np.frombuffer(payload[16:], dtype="<f4"), latent.values)


def test_lwm1_rejects_bad_magic_and_truncation():
    payload = LatentDAO.encode(sample_latent(LatentShape(c=1, h=2, w=2), 1))
    with pytest.raises(LatentFormatException):
        LatentDAO.decode(b"XXXX" + payload[4:])
    with pytest.raises(LatentFormatException):
        LatentDAO.decode(payload[:-1])
    with pytest.raises(LatentFormatException):
        LatentDAO.decode(payload[:10])


def test_lwm1_rejects_zero_dimension():
    with pytest.raises(LatentFormatException):
        LatentDAO.decode(struct.pack("<4sIII", b"LWM1", 0, 1, 1))


def test_missing_file_is_data_error(tmp_path):
    with pytest.raises(DataFileException):
        LatentDAO.read_latent(tmp_path / "absent.lwm")


def test_sign_balance_over_many_seeds():
    shape = LatentShape(c=4, h=64, w=64)
    bound = 4 * np.sqrt(shape.r / 4)
    misses = sum(
        abs(int(np.count_nonzero(sample_latent(shape, seed).values < 0)) - shape.r // 2) >= bound
        for seed in range(500)
    )
    assert misses <= 1
