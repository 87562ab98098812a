# app/db/dao/latent.py

import struct
from pathlib import Path

import numpy as np

from app.core.exceptions import BaseTraceMarkException, LatentFormatException
from app.db.dao.base_dao import BaseFileDAO
from app.db.schemas.latent import GaussianLatent, LatentShape
from app.utils.logger import logger

LWM1_MAGIC = b"LWM1"
# magic, затем c, h, w как uint32 little-endian
_HEADER = struct.Struct("<4sIII")
_VALUE_DTYPE = np.dtype("<f4")


class LatentDAO(BaseFileDAO):
    """
    Формат LWM1: 4 байта `LWM1`, три uint32 LE (c, h, w), затем r значений binary32 LE.
    """

    @classmethod
    def encode(cls, latent: GaussianLatent) -> bytes:
        shape = latent.shape
        header = _HEADER.pack(LWM1_MAGIC, shape.c, shape.h, shape.w)
        return header + latent.values.astype(_VALUE_DTYPE, copy=False).tobytes()

    @classmethod
    def decode(cls, payload: bytes) -> GaussianLatent:
        if len(payload) < _HEADER.size:
            raise LatentFormatException(f"Файл короче заголовка LWM1 ({len(payload)} байт)")
        magic, c, h, w = _HEADER.unpack_from(payload, 0)
        if magic != LWM1_MAGIC:
            raise LatentFormatException(f"Неверная сигнатура {magic!r}, ожидалось {LWM1_MAGIC!r}")
        try:
            shape = LatentShape(c=c, h=h, w=w)
        except BaseTraceMarkException as exc:
            raise LatentFormatException(f"Некорректная форма в заголовке: {exc.detail}") from exc
        body = payload[_HEADER.size:]
        expected = shape.r * _VALUE_DTYPE.itemsize
        if len(body) != expected:
            raise LatentFormatException(f"Ожидалось {expected} байт значений для {shape}, получено {len(body)}")
        values = np.frombuffer(body, dtype=_VALUE_DTYPE).astype(np.float32)
        try:
            return GaussianLatent(values=values, shape=shape)
        except BaseTraceMarkException as exc:
            raise LatentFormatException(exc.detail) from exc

    @classmethod
    def write_latent(cls, path: Path | str, latent: GaussianLatent) -> Path:
        """
        Сохраняет латент в LWM1.

        :param path: Путь к файлу.
        :param latent: Латент.
        :return: Путь к записанному файлу.
        """
        logger.debug(f"Сохранение латента {latent.shape} в {path}")
        return cls.write_bytes(path, cls.encode(latent))

    @classmethod
    def read_latent(cls, path: Path | str) -> GaussianLatent:
        """
        Загружает латент из LWM1 (побитно тот же, что был записан).

        :param path: Путь к файлу.
        :return: GaussianLatent.
        """
        latent = cls.decode(cls.read_bytes(path))
        logger.debug(f"Загружен латент {latent.shape} из {path}")
        return latent
