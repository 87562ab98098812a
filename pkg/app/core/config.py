# app/core/config.py

"""
📦 Конфигурация проекта: зачем и как всё устроено

✅ Почему используется `pydantic_settings.BaseSettings`?
---------------------------------------------------------
- Все переменные окружения строго типизированы и валидируются.
- .env-файл подключается автоматически (через model_config).
- Один и тот же механизм читает и настройки приложения, и конфиги прогонов
  (`ExperimentConfig` в `app/db/schemas/experiment.py` — тоже наследник `Settings`).
- Ошибки конфигурации ловятся сразу при старте команды.

✅ Зачем нужны lazy-обёртки с `@lru_cache`?
------------------------------------------
- Настройки и .env загружаются один раз.
- Нет глобальных переменных — вызов в любом месте через `get_*_settings()`.
- В тестах кэш сбрасывается через `get_*_settings.cache_clear()`.

📚 Где какой конфиг и зачем он нужен?
--------------------------------------

🔹 `AppMetaSettings`
    - `APP_MODE`: текущий режим работы (development/production/testing).
    - `VERSION_TAG`: версия кодека.

🔹 `LoggingSettings`
    - `TMARK_LOG_DIR`: папка с логами.
    - `TMARK_LOG_LEVEL`: минимальный уровень для консоли (stderr).
    - `TMARK_LOG_TO_FILES`: писать ли debug/info/error файлы.

🔹 `CodecSettings`
    - `TMARK_DEFAULT_SHAPE`: форма латента по умолчанию ("4x64x64").
    - `TMARK_DEFAULT_K`: длина водяного знака по умолчанию.
    - `TMARK_ABS_THRESHOLD`: граница «больших» элементов (квартиль N(0,1)).
    - `TMARK_RESAMPLE_ATTEMPTS`: сколько раз пересэмплировать латент (seed+1).

🔹 `StatsSettings`
    - `TMARK_DEFAULT_FPR`: целевая вероятность ложного срабатывания.
    - `TMARK_T_CRITICAL`: порог значимости t-теста.
    - `TMARK_EXACT_TAIL_MAX_K`: до какого K хвосты считаются точно (big int).
    - `TMARK_KS_ALPHA`: уровень для KS-проверки нормальности.

🔹 `HarnessSettings`
    - `TMARK_WORKERS`: число процессов для sweep.
    - `TMARK_PROGRESS`: показывать ли прогресс-бар tqdm.

🧠 Использование (в любом месте проекта):
-----------------------------------------
    from app.core.config import get_codec_settings
    k = get_codec_settings().TMARK_DEFAULT_K
"""

# ================================
# 📁 Импорты и базовая инициализация
# ================================
from enum import Enum
from pathlib import Path
from functools import lru_cache
from dotenv import load_dotenv
from pydantic_settings import BaseSettings, SettingsConfigDict

# 📍 Базовая директория проекта
BASE_PATH = Path(__file__).resolve().parent.parent.parent

# 🧪 Загрузка .env-файла
load_dotenv(dotenv_path=BASE_PATH / ".env")


# 🔄 Режимы приложения
class ModeEnum(str, Enum):
    development = "development"
    production = "production"
    testing = "testing"


# 🛠️ Базовый класс всех настроек
class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=BASE_PATH / ".env",
        env_file_encoding="utf-8",
        extra="ignore",  # игнорировать лишние переменные
    )


# ===============================
# 🔧 Конкретные классы настроек
# ===============================


class AppMetaSettings(Settings):
    APP_MODE: ModeEnum = ModeEnum.development
    VERSION_TAG: str = "v1.0.0"


class LoggingSettings(Settings):
    TMARK_LOG_DIR: Path = BASE_PATH / "logs"
    TMARK_LOG_LEVEL: str = "INFO"
    TMARK_LOG_TO_FILES: bool = True

    @property
    def log_dir(self) -> Path:
        self.TMARK_LOG_DIR.mkdir(parents=True, exist_ok=True)
        return self.TMARK_LOG_DIR


class CodecSettings(Settings):
    TMARK_DEFAULT_SHAPE: str = "4x64x64"
    TMARK_DEFAULT_K: int = 256
    TMARK_ABS_THRESHOLD: float = 0.675
    TMARK_RESAMPLE_ATTEMPTS: int = 8


class StatsSettings(Settings):
    TMARK_DEFAULT_FPR: float = 1e-6
    TMARK_T_CRITICAL: float = 2.101
    TMARK_EXACT_TAIL_MAX_K: int = 4096
    TMARK_KS_ALPHA: float = 0.001


class HarnessSettings(Settings):
    TMARK_WORKERS: int = 1
    TMARK_PROGRESS: bool = False


# ================================
# 🧠 Lazy-обёртки для импорта
# ================================


@lru_cache()
def get_app_settings() -> AppMetaSettings:
    return AppMetaSettings()


@lru_cache()
def get_logging_settings() -> LoggingSettings:
    return LoggingSettings()


@lru_cache()
def get_codec_settings() -> CodecSettings:
    return CodecSettings()


@lru_cache()
def get_stats_settings() -> StatsSettings:
    return StatsSettings()


@lru_cache()
def get_harness_settings() -> HarnessSettings:
    return HarnessSettings()
