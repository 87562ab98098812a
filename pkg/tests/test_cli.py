# tests/test_cli.py

import pytest

from app.cli.main import main
from app.db.dao.latent import LatentDAO
from app.db.dao.report import ReportDAO
from app.db.dao.watermark import KeyDAO
from app.db.schemas.codec import ModelKey

KEY = "a5" * 32
OTHER_KEY = "3c" * 32


def _stdout_fields(text: str) -> dict[str, str]:
    return dict(line.split("=", 1) for line in text.splitlines() if "=" in line and not line.startswith(" "))


@pytest.fixture
def embedded(tmp_path, capsys):
    latent_path = tmp_path / "z.lwm"
    wm_path = tmp_path / "m.txt"
    code = main(
        [
            "embed", "--k", "64", "--seed", "7", "--key", KEY, "--shape", "4x16x16",
            "--out", str(latent_path), "--wm-out", str(wm_path),
        ]
    )
    assert code == 0
    fields = _stdout_fields(capsys.readouterr().out)
    assert wm_path.read_text(encoding="utf-8").strip() == fields["watermark"]
    return latent_path, wm_path


def test_threshold_prints_tau(capsys):
    assert main(["threshold", "--k", "256", "--fpr", "1e-6"]) == 0
    assert capsys.readouterr().out.strip() == "tau=167"


def test_threshold_with_users(capsys):
    assert main(["threshold", "--k", "32", "--users", "1", "--verbose"]) == 0
    fields = _stdout_fields(capsys.readouterr().out)
    assert fields["tau"] == "30" and fields["tau_attr"] == "30"
    assert float(fields["tail_at_tau"]) <= 1e-6


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["bogus"],
        ["threshold"],
        ["threshold", "--k", "abc"],
        ["threshold", "--k", "256", "--fpr", "2"],
        ["embed", "--k", "64", "--seed", "-1", "--key", KEY, "--out", "z.lwm"],
        ["embed", "--k", "64", "--seed", "1", "--key", KEY, "--shape", "4x0x16", "--out", "z.lwm"],
    ],
)
def test_usage_errors_exit_with_one(argv):
    assert main(argv) == 1


def test_version_and_help_exit_cleanly(capsys):
    assert main(["--version"]) == 0
    assert main(["threshold", "--help"]) == 0


def test_missing_input_is_data_error(tmp_path):
    assert main(["extract", "--in", str(tmp_path / "absent.lwm"), "--key", KEY, "--k", "64"]) == 2


def test_bad_key_is_data_error(embedded):
    latent_path, _ = embedded
    assert main(["extract", "--in", str(latent_path), "--key", "not-a-key", "--k", "64"]) == 2


def test_incompatible_k_is_data_error(embedded):
    latent_path, _ = embedded
    assert main(["extract", "--in", str(latent_path), "--key", KEY, "--k", "48"]) == 2


def test_embed_then_extract(embedded, tmp_path, capsys):
    latent_path, wm_path = embedded
    report_path = tmp_path / "report.json"
    code = main(
        [
            "extract", "--in", str(latent_path), "--key", KEY, "--k", "64",
            "--watermark", str(wm_path), "--report", str(report_path),
        ]
    )
    assert code == 0
    assert capsys.readouterr().out.strip() == "bit_accuracy=1.0"
    report = ReportDAO.read_extraction(report_path)
    assert report.bits == wm_path.read_text(encoding="utf-8").strip()
    assert report.detected is True
    assert report.match_count == 64
    assert len(report.stream_large) == 512 and len(report.stream_groups) == 64


def test_extract_with_wrong_key_is_not_detected(embedded, tmp_path):
    latent_path, wm_path = embedded
    report_path = tmp_path / "report.json"
    code = main(
        [
            "extract", "--in", str(latent_path), "--key", OTHER_KEY, "--k", "64",
            "--watermark", str(wm_path), "--report", str(report_path),
        ]
    )
    assert code == 0
    assert ReportDAO.read_extraction(report_path).detected is False


def test_key_can_be_read_from_file(embedded, tmp_path, capsys):
    latent_path, wm_path = embedded
    key_path = KeyDAO.write_key(tmp_path / "model.key", ModelKey(key=KEY))
    code = main(["extract", "--in", str(latent_path), "--key", str(key_path), "--k", "64", "--watermark", str(wm_path)])
    assert code == 0
    assert "bit_accuracy=1.0" in capsys.readouterr().out


def test_identity_channel_keeps_file(embedded, tmp_path, capsys):
    latent_path, _ = embedded
    out_path = tmp_path / "z2.lwm"
    assert main(["channel", "--in", str(latent_path), "--spec", "none", "--trial-seed", "5", "--out", str(out_path)]) == 0
    assert capsys.readouterr().out.strip() == "channel=identity"
    assert LatentDAO.read_latent(out_path).values.tobytes() == LatentDAO.read_latent(latent_path).values.tobytes()


def test_bad_channel_spec_is_data_error(embedded, tmp_path):
    latent_path, _ = embedded
    assert main(["channel", "--in", str(latent_path), "--spec", "blur:1", "--out", str(tmp_path / "x.lwm")]) == 2


def test_payload_commands(capsys):
    assert main(["payload", "encode", "--bits", "01", "--k", "4"]) == 0
    fields = _stdout_fields(capsys.readouterr().out)
    assert fields == {"capacity": "2", "watermark": "0101"}
    assert main(["payload", "decode", "--watermark", "0101"]) == 0
    assert capsys.readouterr().out.strip() == "bits=01"
    assert main(["payload", "encode", "--bits", "111", "--k", "4"]) == 2


def test_attribute_command(tmp_path, capsys):
    directory = tmp_path / "users.txt"
    directory.write_text("# подписи\n0011\n\n0101\n1100\n", encoding="utf-8")
    assert main(["attribute", "--bits", "0101", "--directory", str(directory), "--tau", "3"]) == 0
    assert capsys.readouterr().out.strip() == "user=1 matches=4 tau_attr=3"
    assert main(["attribute", "--bits", "0111", "--directory", str(directory), "--tau", "3"]) == 0
    assert capsys.readouterr().out.strip().startswith("user=none")


def test_sweep_command(tmp_path, capsys):
    config = tmp_path / "sweep.env"
    config.write_text(
        "SWEEP_SHAPE=4x16x16\nSWEEP_K_VALUES=[64]\nSWEEP_CHANNEL_GRID=[\"identity\"]\nSWEEP_TRIALS=2\n",
        encoding="utf-8",
    )
    out = tmp_path / "sweep.csv"
    assert main(["sweep", "--config", str(config), "--out", str(out), "--workers", "1"]) == 0
    assert capsys.readouterr().out.strip() == f"report={out}"
    assert ReportDAO.read_csv(out).rows[0].bit_acc_mean == 1.0


def test_sweep_with_bad_config_is_data_error(tmp_path):
    config = tmp_path / "sweep.env"
    config.write_text("SWEEP_TRIALS=0\n", encoding="utf-8")
    assert main(["sweep", "--config", str(config)]) == 2


def test_selftest_command(capsys):
    assert main(["selftest"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines and all(line.startswith("ok") for line in lines)
