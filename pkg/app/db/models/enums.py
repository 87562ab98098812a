from enum import Enum


class EmbeddingStrategyEnum(str, Enum):
    """Как используются элементы с малым |value| (множество R)"""

    GROUP = "group"  # знак суммы группы (по умолчанию)
    LARGE_ONLY = "large_only"  # R расставлен, но бит не несёт
    SINGLE = "single"  # каждый элемент R несёт бит своим знаком


class ChannelPresetEnum(str, Enum):
    CLEAN = "clean"
    DISTORTED = "distorted"
    INVERSION = "inversion"
