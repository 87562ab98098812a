from .enums import ChannelPresetEnum, EmbeddingStrategyEnum
