# app/core/exceptions.py

from typing import Optional

# Коды завершения CLI
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class BaseTraceMarkException(Exception):
    """Базовый класс для всех кастомных исключений"""

    def __init__(
        self,
        detail: str,
        error_code: str,
        exit_code: int = EXIT_DATA,
        context: Optional[dict] = None,
    ):
        self.detail = detail
        self.error_code = error_code
        self.exit_code = exit_code
        self.context = context or {}
        super().__init__(detail)

    def __str__(self) -> str:
        return f"[{self.error_code}] {self.detail}"


# --------------------------------------------------
# Латент (1xxx)
# --------------------------------------------------
class LatentException(BaseTraceMarkException):
    """Ошибки латентного вектора и его формы"""

    def __init__(self, detail: str, error_code: str = "1000"):
        super().__init__(detail=detail, error_code=error_code)


class InvalidShapeException(LatentException):
    def __init__(self, detail: str = "Все размерности c, h, w должны быть ≥ 1"):
        super().__init__(detail, error_code="1001")


class NonFiniteLatentException(LatentException):
    def __init__(self):
        super().__init__("Латент содержит NaN или бесконечность", error_code="1002")


class LatentLengthException(LatentException):
    def __init__(self, expected: int, actual: int):
        super().__init__(
            f"Длина латента {actual} не совпадает с c·h·w = {expected}",
            error_code="1003",
        )


class LatentFormatException(LatentException):
    def __init__(self, detail: str = "Файл не является корректным LWM1"):
        super().__init__(detail, error_code="1010")


# --------------------------------------------------
# Кодек (2xxx)
# --------------------------------------------------
class CodecException(BaseTraceMarkException):
    """Базовый класс для ошибок встраивания/извлечения"""

    def __init__(self, detail: str, error_code: str = "2000"):
        super().__init__(detail=detail, error_code=error_code)


class ImbalancedSampleException(CodecException):
    """Знаковый дисбаланс выборки — вызывающий может пересэмплировать с новым seed"""

    def __init__(self, detail: str = "Недостаточно отрицательных или неотрицательных элементов"):
        super().__init__(detail, error_code="2001")


class SizeMismatchException(CodecException):
    def __init__(self, detail: str = "Несогласованные размеры последовательностей"):
        super().__init__(detail, error_code="2002")


class ShapeMismatchException(CodecException):
    def __init__(self, detail: str = "Форма латента не совпадает с параметрами встраивания"):
        super().__init__(detail, error_code="2003")


class UnbalancedWatermarkException(CodecException):
    def __init__(self, detail: str = "Водяной знак должен содержать поровну нулей и единиц"):
        super().__init__(detail, error_code="2004")


class ExhaustedPoolException(CodecException):
    def __init__(self, pool: str):
        super().__init__(f"Пул {pool} исчерпан раньше времени", error_code="2005")


class InvalidEmbeddingParamsException(CodecException):
    def __init__(self, detail: str):
        super().__init__(detail, error_code="2006")


class EmptyInputException(CodecException):
    def __init__(self, detail: str = "Пустой вход"):
        super().__init__(detail, error_code="2007")


class InvalidKeyException(CodecException):
    def __init__(self, detail: str = "Ключ модели должен состоять из 64 hex-символов"):
        super().__init__(detail, error_code="2008")


class PayloadException(CodecException):
    def __init__(self, detail: str):
        super().__init__(detail, error_code="2010")


# --------------------------------------------------
# Канал (3xxx)
# --------------------------------------------------
class ChannelException(BaseTraceMarkException):
    def __init__(self, detail: str, error_code: str = "3000"):
        super().__init__(detail=detail, error_code=error_code)


class NonpositiveSigmaException(ChannelException):
    def __init__(self, sigma: float):
        super().__init__(f"σ должна быть конечной и положительной, получено {sigma}", error_code="3001")


class OutOfRangeException(ChannelException):
    def __init__(self, detail: str = "Вероятность вне допустимого диапазона"):
        super().__init__(detail, error_code="3002")


class ChannelGrammarException(ChannelException):
    def __init__(self, text: str, reason: str = "неизвестная конструкция"):
        super().__init__(f"Не удалось разобрать канал '{text}': {reason}", error_code="3003")


# --------------------------------------------------
# Статистика (4xxx)
# --------------------------------------------------
class StatsException(BaseTraceMarkException):
    def __init__(self, detail: str, error_code: str = "4000"):
        super().__init__(detail=detail, error_code=error_code)


class LengthMismatchException(StatsException):
    def __init__(self, left: int, right: int):
        super().__init__(f"Длины последовательностей различаются: {left} ≠ {right}", error_code="4001")


class EmptyDirectoryException(StatsException):
    def __init__(self):
        super().__init__("Справочник подписей пользователей пуст", error_code="4002")


class DegenerateSampleException(StatsException):
    def __init__(self, detail: str = "Выборка вырождена для t-теста"):
        super().__init__(detail, error_code="4003")


class InvalidThresholdRequestException(StatsException):
    def __init__(self, detail: str):
        super().__init__(detail, error_code="4004")


class InvalidBitsException(StatsException):
    def __init__(self, detail: str = "Последовательность бит должна состоять только из 0 и 1"):
        super().__init__(detail, error_code="4005")


# --------------------------------------------------
# Конфигурация, CLI и файлы (5xxx)
# --------------------------------------------------
class ConfigInvalidException(BaseTraceMarkException):
    def __init__(self, detail: str):
        super().__init__(detail=f"Некорректная конфигурация: {detail}", error_code="5001")


class UsageException(BaseTraceMarkException):
    """Ошибка использования командной строки (код выхода 1)"""

    def __init__(self, detail: str, flag: Optional[str] = None):
        message = f"{flag}: {detail}" if flag else detail
        super().__init__(detail=message, error_code="5002", exit_code=EXIT_USAGE)
        self.flag = flag


class DataFileException(BaseTraceMarkException):
    def __init__(self, detail: str):
        super().__init__(detail=detail, error_code="5003")
