# app/core/error_handlers.py
from functools import wraps
from typing import Callable

from pydantic import BaseModel, ValidationError

from app.core.exceptions import BaseTraceMarkException, EXIT_DATA
from app.utils.logger import logger


class ErrorResponse(BaseModel):
    detail: str
    code: str
    exit_code: int


def build_error_response(exc: Exception) -> ErrorResponse:
    """
    Переводит исключение в единый ответ для CLI.

    - Доменные исключения несут свой `error_code` и `exit_code`.
    - `ValidationError` pydantic (неверные типы в записях/конфигах) — ошибка данных.
    - Всё остальное — внутренняя ошибка с кодом выхода 2.
    """
    if isinstance(exc, BaseTraceMarkException):
        return ErrorResponse(detail=exc.detail, code=exc.error_code, exit_code=exc.exit_code)
    if isinstance(exc, ValidationError):
        return ErrorResponse(detail=str(exc), code="validation_error", exit_code=EXIT_DATA)
    if isinstance(exc, (FileNotFoundError, PermissionError, IsADirectoryError)):
        return ErrorResponse(detail=str(exc), code="io_error", exit_code=EXIT_DATA)
    return ErrorResponse(detail="Internal error", code="internal_error", exit_code=EXIT_DATA)


def setup_exception_handlers(command: Callable[..., int]) -> Callable[..., int]:
    """Оборачивает команду CLI: исключение → сообщение в stderr-лог и код выхода."""

    @wraps(command)
    def wrapper(*args, **kwargs) -> int:
        try:
            return command(*args, **kwargs)
        except Exception as exc:
            response = build_error_response(exc)
            if response.code == "internal_error":
                logger.exception(f"Необработанная ошибка в {command.__name__}: {exc}")
            else:
                logger.error(f"{response.code} | {response.detail}")
            return response.exit_code

    return wrapper
