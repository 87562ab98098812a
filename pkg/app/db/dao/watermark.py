# app/db/dao/watermark.py

from pathlib import Path

from app.core.exceptions import BaseTraceMarkException, DataFileException
from app.db.dao.base_dao import BaseFileDAO
from app.db.schemas.codec import ModelKey, Watermark
from app.db.schemas.stats import AttributionDirectory


class WatermarkDAO(BaseFileDAO):
    """Файл водяного знака: одна строка из '0'/'1' с переводом строки в конце"""

    @classmethod
    def read_watermark(cls, path: Path | str) -> Watermark:
        lines = [line for line in cls.read_text(path).splitlines() if line.strip()]
        if len(lines) != 1:
            raise DataFileException(f"{path}: ожидалась одна строка бит, найдено {len(lines)}")
        return Watermark(bits=lines[0])

    @classmethod
    def write_watermark(cls, path: Path | str, m: Watermark) -> Path:
        return cls.write_text(path, f"{m}\n")


class KeyDAO(BaseFileDAO):
    """Файл ключа модели: 64 hex-символа"""

    @classmethod
    def read_key(cls, path: Path | str) -> ModelKey:
        return ModelKey(key=cls.read_text(path).strip())

    @classmethod
    def write_key(cls, path: Path | str, key: ModelKey) -> Path:
        return cls.write_text(path, f"{key.hex}\n")


class SignatureDirectoryDAO(BaseFileDAO):
    """
    Справочник подписей пользователей: по строке '0'/'1' на пользователя, номер строки — индекс.

    Пустые строки и строки с '#' в начале пропускаются.
    """

    @classmethod
    def read_directory(cls, path: Path | str, tau_attr: int | None = None, fpr: float = 1e-6) -> AttributionDirectory:
        signatures = []
        for number, line in enumerate(cls.read_text(path).splitlines(), start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            try:
                signatures.append(Watermark(bits=text))
            except BaseTraceMarkException as exc:
                raise DataFileException(f"{path}:{number}: {exc.detail}") from exc
        return AttributionDirectory(signatures=signatures, tau_attr=tau_attr, fpr=fpr)

    @classmethod
    def write_directory(cls, path: Path | str, directory: AttributionDirectory) -> Path:
        return cls.write_text(path, "".join(f"{signature}\n" for signature in directory.signatures))
