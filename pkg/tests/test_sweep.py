# tests/test_sweep.py

import hashlib

import pytest

from app.core.exceptions import ConfigInvalidException, DataFileException
from app.db.dao.report import REPORT_COLUMNS, ReportDAO
from app.db.schemas.codec import EmbeddingParams
from app.db.schemas.latent import LatentShape
from app.services.harness.seeding import derive_seed, derive_trial_seeds
from app.services.harness.selftest import run_selftest
from app.services.harness.sweep import load_experiment_config, plan_tasks, run_sweep, run_trial

CONFIG = """\
# маленький прогон
SWEEP_SHAPE=4x16x16
SWEEP_K_VALUES=[64]
SWEEP_CHANNEL_GRID=["identity", "preset:distorted"]
SWEEP_TRIALS=6
SWEEP_BASE_SEED=3
"""


@pytest.fixture
def config_path(tmp_path):
    path = tmp_path / "sweep.env"
    path.write_text(CONFIG, encoding="utf-8")
    return path


def _without_wall_time(report):
    return [row.model_dump(exclude={"wall_time_s"}) for row in report.rows]


# --- seeding ---


def test_seed_derivation_formula():
    digest = hashlib.blake2b(b"0:256:1:7:latent", digest_size=8).digest()
    assert derive_seed(0, 256, 1, 7, "latent") == int.from_bytes(digest, "big")


def test_trial_seeds_are_independent_streams():
    seeds = derive_trial_seeds(0, 256, 0, 0)
    assert len({seeds.latent, seeds.watermark, seeds.channel}) == 3
    assert seeds.key.key == hashlib.blake2b(b"0:256:0:0:key", digest_size=32).digest()
    assert derive_trial_seeds(0, 256, 0, 1).latent != seeds.latent
    assert derive_trial_seeds(1, 256, 0, 0).latent != seeds.latent


# --- config ---


def test_load_config(config_path):
    cfg = load_experiment_config(config_path)
    assert cfg.latent_shape == LatentShape(c=4, h=16, w=16)
    assert cfg.k_values == [64]
    assert cfg.channel_grid == ["identity", "preset:distorted"]
    assert cfg.trials == 6 and cfg.base_seed == 3 and cfg.fpr == 1e-6


def test_config_ignores_process_environment(config_path, monkeypatch):
    monkeypatch.setenv("SWEEP_TRIALS", "3")
    monkeypatch.setenv("SWEEP_FPR", "0.01")
    cfg = load_experiment_config(config_path)
    assert cfg.trials == 6
    assert cfg.fpr == 1e-6


@pytest.mark.parametrize(
    "extra",
    ["SWEEP_COLOUR=blue", "SWEEP_TRIALS=0", "SWEEP_FPR=1.5", "SWEEP_K_VALUES=[48]", "SWEEP_TRIALS=many"],
)
def test_invalid_config(tmp_path, extra):
    path = tmp_path / "bad.env"
    path.write_text(CONFIG + extra + "\n", encoding="utf-8")
    with pytest.raises(ConfigInvalidException):
        load_experiment_config(path)


def test_invalid_channel_in_grid(tmp_path):
    path = tmp_path / "bad.env"
    path.write_text(CONFIG.replace('"preset:distorted"', '"blur:3"'), encoding="utf-8")
    with pytest.raises(ConfigInvalidException):
        load_experiment_config(path)


def test_missing_config(tmp_path):
    with pytest.raises(DataFileException):
        load_experiment_config(tmp_path / "absent.env")


# --- trials and sweep ---


def test_identity_trial_is_lossless():
    params = EmbeddingParams(shape=LatentShape(c=4, h=16, w=16), k=64)
    outcome = run_trial(params, "identity", (3, 64, 0, 0))
    assert outcome.matches == 64
    assert outcome.w1_matches == outcome.w1_total == 512
    assert outcome.w2_matches == outcome.w2_total == 64
    assert outcome.small_total == 512


def test_plan_tasks_cover_every_trial(config_path):
    cfg = load_experiment_config(config_path)
    tasks = plan_tasks(cfg, workers=2)
    for cell in (0, 1):
        spans = sorted((task.start, task.stop) for task in tasks if task.cell_index == cell)
        covered = [index for start, stop in spans for index in range(start, stop)]
        assert covered == list(range(cfg.trials))
    assert all(task.shape == LatentShape(c=4, h=16, w=16) for task in tasks)
    assert {task.channel for task in tasks} == {"identity", "flip:0.3,0.45,0.675"}


def test_sweep_rows(config_path):
    report = run_sweep(load_experiment_config(config_path), workers=1, progress=False)
    assert [(row.k, row.channel) for row in report.rows] == [(64, "identity"), (64, "flip:0.3,0.45,0.675")]

    clean = report.row(64, "identity")
    assert clean.bit_acc_mean == 1.0 and clean.bit_acc_std == 0.0
    assert clean.tpr == 1.0
    assert clean.w1_acc_mean == 1.0 and clean.w2_acc_mean == 1.0
    assert clean.trials == 6

    noisy = report.row(64, "flip:0.3,0.45,0.675")
    # доля верных знаков у больших элементов ≈ 0.7
    assert 0.6 < noisy.w1_acc_mean < 0.8
    assert noisy.bit_acc_mean < 1.0


def test_sweep_does_not_depend_on_worker_count(config_path):
    cfg = load_experiment_config(config_path)
    single = run_sweep(cfg, workers=1, progress=False)
    pooled = run_sweep(cfg, workers=2, progress=False)
    assert _without_wall_time(single) == _without_wall_time(pooled)


def test_csv_round_trip(config_path, tmp_path):
    report = run_sweep(load_experiment_config(config_path), workers=1, progress=False)
    path = ReportDAO.write_csv(tmp_path / "out" / "sweep.csv", report)
    header = path.read_text(encoding="utf-8").splitlines()[0]
    assert header.split(",") == list(REPORT_COLUMNS)
    assert ReportDAO.read_csv(path) == report


# --- selftest ---


def test_selftest_passes():
    results = run_selftest()
    assert results and all(check.passed for check in results), [check for check in results if not check.passed]
