# app/db/dao/base_dao.py

"""
📂 Базовый DAO для файловых записей (латенты LWM1, водяные знаки, ключи, отчёты).

Все DAO — классы с classmethod'ами: общая обработка ошибок ввода-вывода и логирование
живут здесь, наследники описывают только формат своей записи.
"""

from pathlib import Path

from app.core.exceptions import DataFileException
from app.utils.logger import logger


class BaseFileDAO:
    """
    Базовый класс DAO (объекта доступа к данным) поверх файловой системы.
    """

    name_object_model: str
    encoding: str = "utf-8"

    def __init_subclass__(cls, **kwargs):
        """
        Автоматически вызывается при создании подкласса.

        - Определяет имя записи (`name_object_model`) как имя класса без "DAO" в конце.
        - Используется в сообщениях лога.
        """
        super().__init_subclass__(**kwargs)
        if issubclass(cls, BaseFileDAO) and cls is not BaseFileDAO:
            cls.name_object_model = cls.__name__[:-3].lower()
            logger.debug(f"{cls.__name__} инициализирован")

    @classmethod
    def read_bytes(cls, path: Path | str) -> bytes:
        """
        Читает запись целиком в байтах.

        :param path: Путь к файлу.
        :return: Содержимое файла.
        """
        path = Path(path)
        logger.info(f"Чтение {cls.name_object_model} из {path}")
        try:
            return path.read_bytes()
        except OSError as e:
            logger.error(f"Ошибка при чтении {cls.name_object_model} из {path}: {e}")
            raise DataFileException(f"Не удалось прочитать {path}: {e.strerror or e}") from e

    @classmethod
    def write_bytes(cls, path: Path | str, payload: bytes) -> Path:
        """
        Записывает запись, создавая родительские директории.

        :param path: Путь к файлу.
        :param payload: Байты записи.
        :return: Путь, куда записано.
        """
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_bytes(payload)
        except OSError as e:
            logger.error(f"Ошибка при записи {cls.name_object_model} в {path}: {e}")
            raise DataFileException(f"Не удалось записать {path}: {e.strerror or e}") from e
        logger.info(f"{cls.name_object_model} записан в {path} ({len(payload)} байт)")
        return path

    @classmethod
    def read_text(cls, path: Path | str) -> str:
        return cls.read_bytes(path).decode(cls.encoding)

    @classmethod
    def write_text(cls, path: Path | str, text: str) -> Path:
        return cls.write_bytes(path, text.encode(cls.encoding))
