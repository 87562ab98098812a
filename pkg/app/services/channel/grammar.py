# app/services/channel/grammar.py

"""
🧾 Компактная строковая грамматика каналов

    identity | none
    gauss:<σ>
    flip:<p_large>,<p_small>[,<abs_threshold>]
    compose(<канал>|<канал>|...)
    preset:clean | preset:distorted | preset:inversion

Пробелы вокруг токенов игнорируются. format_channel даёт каноническую запись
(числа через repr), parse_channel(format_channel(spec)) == spec.
"""

from app.core.config import get_codec_settings
from app.core.exceptions import ChannelGrammarException
from app.db.models.enums import ChannelPresetEnum
from app.db.schemas.channel import (
    AdditiveGaussian,
    ChannelSpec,
    Compose,
    IdentityChannel,
    SignFlip,
)
from app.services.channel.calibration import calibrate_signflip

# целевая согласованность знаков (большие, малые) для пресетов flip
_PRESET_TARGETS = {
    ChannelPresetEnum.CLEAN: (0.95, 0.75),
    ChannelPresetEnum.DISTORTED: (0.70, 0.55),
}
_INVERSION_SIGMA = 0.3


def preset_channel(preset: ChannelPresetEnum) -> ChannelSpec:
    """
    Канал именованного пресета.

    clean и distorted калибруются по целевой согласованности знаков,
    inversion: аддитивный шум σ = 0.3.
    """
    if preset == ChannelPresetEnum.INVERSION:
        return AdditiveGaussian(sigma=_INVERSION_SIGMA)
    return calibrate_signflip(*_PRESET_TARGETS[preset])


def _split_top_level(body: str, text: str) -> list[str]:
    """Делит тело compose по '|' только на нулевой глубине скобок"""
    parts, depth, current = [], 0, []
    for char in body:
        if char == "(":
            depth += 1
        elif char == ")":
            depth -= 1
            if depth < 0:
                raise ChannelGrammarException(text, "лишняя закрывающая скобка")
        if char == "|" and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(char)
    if depth:
        raise ChannelGrammarException(text, "незакрытая скобка")
    parts.append("".join(current))
    return parts


def _numbers(raw: str, text: str) -> list[float]:
    try:
        return [float(item) for item in raw.split(",")]
    except ValueError as exc:
        raise ChannelGrammarException(text, f"не число в '{raw}'") from exc


def parse_channel(text: str) -> ChannelSpec:
    """
    Разбирает описание канала.

    :param text: Строка грамматики.
    :return: ChannelSpec.
    :raises ChannelGrammarException: синтаксическая ошибка.
    """
    token = text.strip()
    lowered = token.lower()
    if lowered in ("identity", "none"):
        return IdentityChannel()

    if lowered.startswith("compose(") and token.endswith(")"):
        body = token[len("compose("):-1]
        if not body.strip():
            raise ChannelGrammarException(text, "пустой compose")
        return Compose(stages=[parse_channel(part) for part in _split_top_level(body, text)])

    head, sep, tail = token.partition(":")
    head = head.strip().lower()
    if not sep:
        raise ChannelGrammarException(text, "ожидалось 'вид:параметры'")

    if head == "gauss":
        values = _numbers(tail, text)
        if len(values) != 1:
            raise ChannelGrammarException(text, "gauss принимает ровно один параметр σ")
        return AdditiveGaussian(sigma=values[0])

    if head == "flip":
        values = _numbers(tail, text)
        if len(values) == 2:
            values.append(get_codec_settings().TMARK_ABS_THRESHOLD)
        if len(values) != 3:
            raise ChannelGrammarException(text, "flip принимает p_large,p_small[,abs_threshold]")
        return SignFlip(p_large=values[0], p_small=values[1], abs_threshold=values[2])

    if head == "preset":
        name = tail.strip().lower()
        try:
            preset = ChannelPresetEnum(name)
        except ValueError as exc:
            known = ", ".join(item.value for item in ChannelPresetEnum)
            raise ChannelGrammarException(text, f"неизвестный пресет '{name}' (есть: {known})") from exc
        return preset_channel(preset)

    raise ChannelGrammarException(text, f"неизвестный вид канала '{head}'")


def format_channel(spec: ChannelSpec) -> str:
    """Каноническая строка канала (колонка `channel` в CSV)"""
    match spec:
        case IdentityChannel():
            return "identity"
        case AdditiveGaussian(sigma=sigma):
            return f"gauss:{sigma!r}"
        case SignFlip(p_large=p_large, p_small=p_small, abs_threshold=threshold):
            return f"flip:{p_large!r},{p_small!r},{threshold!r}"
        case Compose(stages=stages):
            return "compose(" + "|".join(format_channel(stage) for stage in stages) + ")"
    raise TypeError(f"Неизвестный канал {spec!r}")
