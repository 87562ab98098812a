# tests/test_scripts.py

from scripts.generate_config_doc import generate_config_doc, generate_env_example
from scripts.version import get_app_version


def test_config_doc_lists_every_group():
    doc = generate_config_doc()
    for name in ("CodecSettings", "StatsSettings", "HarnessSettings", "LoggingSettings", "ExperimentConfig"):
        assert f"## 🔹 {name}" in doc
    assert "**TMARK_DEFAULT_FPR**: `float` = `1e-06`" in doc
    assert "**SWEEP_TRIALS**: `int` = `100`" in doc


def test_env_example_skips_sweep_keys():
    example = generate_env_example()
    assert "TMARK_ABS_THRESHOLD=0.675" in example
    assert "SWEEP_" not in example


def test_version_is_read_from_file():
    assert get_app_version()
