# app/db/dao/report.py

import csv
import io
from pathlib import Path

from app.db.dao.base_dao import BaseFileDAO
from app.db.schemas.codec import ExtractionReport
from app.db.schemas.experiment import SweepReport, SweepRow

# порядок колонок CSV: имя колонки -> поле SweepRow
REPORT_COLUMNS = {
    "K": "k",
    "tau": "tau",
    "fpr": "fpr",
    "channel": "channel",
    "trials": "trials",
    "bit_acc_mean": "bit_acc_mean",
    "bit_acc_std": "bit_acc_std",
    "tpr": "tpr",
    "w1_acc_mean": "w1_acc_mean",
    "w2_acc_mean": "w2_acc_mean",
    "small_elem_acc_mean": "small_elem_acc_mean",
    "strategy": "strategy",
    "wall_time_s": "wall_time_s",
}


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


class ReportDAO(BaseFileDAO):
    """Отчёты: CSV прогона и JSON команды extract"""

    @classmethod
    def render_csv(cls, report: SweepReport) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(REPORT_COLUMNS)
        for row in report.rows:
            writer.writerow(_cell(getattr(row, field)) for field in REPORT_COLUMNS.values())
        return buffer.getvalue()

    @classmethod
    def write_csv(cls, path: Path | str, report: SweepReport) -> Path:
        return cls.write_text(path, cls.render_csv(report))

    @classmethod
    def read_csv(cls, path: Path | str) -> SweepReport:
        reader = csv.DictReader(io.StringIO(cls.read_text(path)))
        rows = []
        for record in reader:
            values = {field: (record[column] or None) for column, field in REPORT_COLUMNS.items()}
            rows.append(SweepRow(**values))
        return SweepReport(rows=rows)

    @classmethod
    def write_extraction(cls, path: Path | str, report: ExtractionReport) -> Path:
        return cls.write_text(path, report.model_dump_json(indent=2) + "\n")

    @classmethod
    def read_extraction(cls, path: Path | str) -> ExtractionReport:
        return ExtractionReport.model_validate_json(cls.read_text(path))
