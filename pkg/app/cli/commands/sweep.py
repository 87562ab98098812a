# app/cli/commands/sweep.py

import argparse

from app.cli.common import positive_int
from app.core.error_handlers import setup_exception_handlers
from app.core.exceptions import EXIT_OK
from app.db.dao.report import ReportDAO
from app.services.harness.sweep import load_experiment_config, run_sweep


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("sweep", help="прогон по сетке (k, канал) из файла конфигурации")
    parser.add_argument("--config", required=True, help="файл конфигурации (ключи SWEEP_*)")
    parser.add_argument("--out", help="CSV-отчёт; по умолчанию SWEEP_OUTPUT_PATH")
    parser.add_argument("--workers", type=positive_int, help="число процессов (по умолчанию TMARK_WORKERS)")
    parser.add_argument("--progress", action="store_true", default=None, help="показать прогресс tqdm")
    parser.set_defaults(handler=run)


@setup_exception_handlers
def run(args: argparse.Namespace) -> int:
    cfg = load_experiment_config(args.config)
    report = run_sweep(cfg, workers=args.workers, progress=args.progress)
    path = ReportDAO.write_csv(args.out or cfg.output_path, report)
    print(f"report={path}")
    return EXIT_OK
