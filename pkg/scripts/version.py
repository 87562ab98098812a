# scripts/version.py

import sys

from app.core.config import BASE_PATH
from app.utils.logger import logger

version_file = BASE_PATH / "version.txt"


def update_version(new_version: str) -> None:
    version_file.write_text(new_version.strip() + "\n", encoding="utf-8")
    logger.info(f"Version updated to: {new_version}")


def get_app_version() -> str:
    """Версия из version.txt (пишется setuptools_scm); '0.0.1', если файла нет"""
    try:
        return version_file.read_text(encoding="utf-8").strip() or "0.0.1"
    except FileNotFoundError:
        logger.warning("Version file not found. Returning default version '0.0.1'.")
        return "0.0.1"


if __name__ == "__main__":
    update_version(sys.argv[1])
