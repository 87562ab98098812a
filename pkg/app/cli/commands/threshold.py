# app/cli/commands/threshold.py

import argparse

from app.cli.common import positive_int, probability
from app.core.config import get_stats_settings
from app.core.error_handlers import setup_exception_handlers
from app.core.exceptions import EXIT_OK
from app.services.stats.thresholds import attribution_threshold, detection_threshold


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("threshold", help="порог детекции τ для K и FPR")
    parser.add_argument("--k", type=positive_int, required=True, help="длина водяного знака K")
    parser.add_argument("--fpr", type=probability, default=get_stats_settings().TMARK_DEFAULT_FPR, help="граница FPR")
    parser.add_argument("--users", type=positive_int, help="также вывести порог атрибуции для N пользователей")
    parser.add_argument("--verbose", action="store_true", help="вывести фактические хвосты")
    parser.set_defaults(handler=run)


@setup_exception_handlers
def run(args: argparse.Namespace) -> int:
    threshold = detection_threshold(args.k, args.fpr)
    print(f"tau={threshold.tau}")
    if args.verbose:
        print(f"tail_at_tau={threshold.tail_at_tau!r}")
        print(f"false_positive_rate={threshold.false_positive_rate!r}")
    if args.users:
        print(f"tau_attr={attribution_threshold(args.k, args.users, args.fpr)}")
    return EXIT_OK
