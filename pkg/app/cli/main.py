# app/cli/main.py

"""
🖥️ Командная строка tracemark

    tracemark embed --k 256 --seed 7 --key <hex> --out z.lwm
    tracemark extract --in z.lwm --key <hex> --k 256 --report r.json
    tracemark channel --in z.lwm --spec gauss:0.3 --trial-seed 1 --out z2.lwm
    tracemark threshold --k 256 --fpr 1e-6
    tracemark sweep --config sweep.env --out sweep.csv
    tracemark selftest

Коды выхода: 0 — успех, 1 — ошибка использования, 2 — ошибка данных.
"""

import argparse
import sys
from typing import Sequence

from app.cli.commands import attribute, channel, embed, extract, payload, selftest, sweep, threshold
from app.core.exceptions import EXIT_USAGE, UsageException
from app.utils.logger import logger
from scripts.version import get_app_version

COMMANDS = (embed, extract, channel, threshold, sweep, selftest, payload, attribute)


class TraceMarkArgumentParser(argparse.ArgumentParser):
    """argparse без sys.exit на ошибке: ошибка использования становится UsageException"""

    def error(self, message: str):
        raise UsageException(message, flag=self.prog)


def build_parser() -> TraceMarkArgumentParser:
    parser = TraceMarkArgumentParser(
        prog="tracemark",
        description="Водяной знак в латентном шуме перестановкой значений: встраивание, извлечение, оценка.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {get_app_version()}")
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="command")
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """
    Точка входа CLI.

    :param argv: Аргументы без имени программы; по умолчанию sys.argv[1:].
    :return: Код выхода.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageException as exc:
        logger.error(f"{exc.error_code} | {exc.detail}")
        print(f"{parser.prog}: ошибка: {exc.detail}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        # --help и --version
        return int(exc.code or 0)
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
