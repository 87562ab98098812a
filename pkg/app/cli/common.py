# app/cli/common.py

import argparse
import re
from pathlib import Path

from app.core.config import get_codec_settings
from app.db.dao.watermark import KeyDAO, WatermarkDAO
from app.db.models.enums import EmbeddingStrategyEnum
from app.db.schemas.codec import ModelKey, Watermark
from app.db.schemas.latent import SEED_LIMIT, LatentShape

_HEX_KEY = re.compile(r"^[0-9a-fA-F]{64}$")
_BITS = re.compile(r"^[01]+$")


def seed_type(text: str) -> int:
    """argparse-тип для 64-битного seed"""
    try:
        value = int(text, 0)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"'{text}' не целое") from exc
    if not (0 <= value < SEED_LIMIT):
        raise argparse.ArgumentTypeError(f"seed {value} вне [0, 2⁶⁴)")
    return value


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"'{text}' не целое") from exc
    if value < 1:
        raise argparse.ArgumentTypeError(f"ожидалось ≥ 1, получено {value}")
    return value


def probability(text: str) -> float:
    try:
        value = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"'{text}' не число") from exc
    if not (0.0 < value < 1.0):
        raise argparse.ArgumentTypeError(f"ожидалось значение в (0, 1), получено {value}")
    return value


def shape_type(text: str) -> LatentShape:
    try:
        return LatentShape.parse(text)
    except Exception as exc:
        raise argparse.ArgumentTypeError(f"форма '{text}' не в формате CxHxW с размерностями ≥ 1") from exc


def add_strategy_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--strategy",
        choices=[item.value for item in EmbeddingStrategyEnum],
        default=EmbeddingStrategyEnum.GROUP.value,
        help="обработка элементов с малым |value| (по умолчанию group)",
    )


def add_shape_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--shape",
        type=shape_type,
        default=get_codec_settings().TMARK_DEFAULT_SHAPE,
        help="форма латента CxHxW",
    )


def resolve_key(value: str) -> ModelKey:
    """Ключ из 64 hex-символов в аргументе или из файла ключа"""
    if _HEX_KEY.match(value.strip()):
        return ModelKey(key=value)
    return KeyDAO.read_key(Path(value))


def resolve_watermark(value: str) -> Watermark:
    """Водяной знак строкой '0101…' или путём к файлу водяного знака"""
    if _BITS.match(value.strip()):
        return Watermark(bits=value)
    return WatermarkDAO.read_watermark(Path(value))
