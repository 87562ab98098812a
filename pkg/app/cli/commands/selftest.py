# app/cli/commands/selftest.py

import argparse

from app.core.error_handlers import setup_exception_handlers
from app.core.exceptions import EXIT_DATA, EXIT_OK
from app.services.harness.selftest import run_selftest


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("selftest", help="быстрая проверка инвариантов кодека")
    parser.set_defaults(handler=run)


@setup_exception_handlers
def run(args: argparse.Namespace) -> int:
    results = run_selftest()
    for check in results:
        status = "ok" if check.passed else "FAIL"
        print(f"{status:4} {check.name}" + (f": {check.detail}" if check.detail else ""))
    return EXIT_OK if all(check.passed for check in results) else EXIT_DATA
