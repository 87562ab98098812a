"""
📘 generate_config_doc.py

Генерирует документацию по настройкам из классов `Settings` в `app/core/config.py`
и конфигу прогона `ExperimentConfig`.

📦 Что делает:
- Формирует Markdown (`descriptions/config_settings.md`): переменные, типы, значения по умолчанию.
- Генерирует шаблон `.env.example` по группам настроек.

🚀 Как использовать:
```bash
python scripts/generate_config_doc.py
```
"""

from inspect import getmembers, isclass

from pydantic_core import PydanticUndefined

from app.core import config
from app.db.schemas.experiment import ExperimentConfig

OUTPUT_DIR = config.BASE_PATH / "descriptions"
OUTPUT_FILE_CONFIG = OUTPUT_DIR / "config_settings.md"
OUTPUT_FILE_ENV = config.BASE_PATH / ".env.example"


def _settings_classes() -> list[tuple[str, type, str]]:
    """(имя класса, класс, префикс переменных)"""
    found = [
        (name, cls, "")
        for name, cls in getmembers(config)
        if isclass(cls) and issubclass(cls, config.Settings) and cls is not config.Settings
    ]
    found.append(("ExperimentConfig", ExperimentConfig, ExperimentConfig.model_config.get("env_prefix", "")))
    return found


def _default(field_info) -> str:
    if field_info.default is not PydanticUndefined:
        value = field_info.default
    elif field_info.default_factory is not None:
        value = field_info.default_factory()
    else:
        return "(required)"
    return getattr(value, "value", value)


def generate_config_doc() -> str:
    output = ["# 📦 Документация настроек конфигурации\n"]
    for name, cls, prefix in _settings_classes():
        section = [f"## 🔹 {name}"]
        for field, field_info in cls.model_fields.items():
            field_type = getattr(field_info.annotation, "__name__", str(field_info.annotation))
            section.append(f"- **{prefix}{field.upper()}**: `{field_type}` = `{_default(field_info)}`")
        output.append("\n".join(section) + "\n")
    return "\n".join(output)


def generate_env_example() -> str:
    output = ["# 🔧 .env.example — сгенерирован автоматически\n"]
    for name, cls, prefix in _settings_classes():
        if prefix:
            # конфиг прогона живёт в отдельном файле, не в .env
            continue
        output.append(f"# ▶️ {name}")
        for field, field_info in cls.model_fields.items():
            output.append(f"{field.upper()}={_default(field_info)}")
        output.append("")
    return "\n".join(output)


INTRO_MD = """# 📘 Конфигурация проекта: автогенерация

Этот файл создан автоматически скриптом `scripts/generate_config_doc.py`.

## 📍 Где находится
- Конфиг: `app/core/config.py`
- Пример .env: `.env.example`
- Грамматика конфига прогона: `descriptions/sweep_config.md`

## 🔍 Как пользоваться конфигами

```python
from app.core.config import get_stats_settings

fpr = get_stats_settings().TMARK_DEFAULT_FPR
```

## 🛠 Список настроек:
"""


def main() -> None:
    OUTPUT_DIR.mkdir(exist_ok=True)
    OUTPUT_FILE_CONFIG.write_text(INTRO_MD + "\n" + generate_config_doc(), encoding="utf-8")
    OUTPUT_FILE_ENV.write_text(generate_env_example(), encoding="utf-8")
    print(f"✅ Документация: {OUTPUT_FILE_CONFIG}")
    print(f"✅ Пример .env: {OUTPUT_FILE_ENV}")


if __name__ == "__main__":
    main()
