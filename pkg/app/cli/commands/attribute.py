# app/cli/commands/attribute.py

import argparse

from app.cli.common import probability, resolve_watermark
from app.core.config import get_stats_settings
from app.core.error_handlers import setup_exception_handlers
from app.core.exceptions import EXIT_OK
from app.db.dao.watermark import SignatureDirectoryDAO
from app.services.stats.attribution import attribute


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("attribute", help="атрибуция m′ по справочнику подписей")
    parser.add_argument("--bits", required=True, help="извлечённый m′: биты или файл")
    parser.add_argument("--directory", required=True, help="файл подписей, по строке на пользователя")
    parser.add_argument("--tau", type=int, help="порог атрибуции; по умолчанию union bound")
    parser.add_argument("--fpr", type=probability, default=get_stats_settings().TMARK_DEFAULT_FPR, help="FPR на справочник")
    parser.set_defaults(handler=run)


@setup_exception_handlers
def run(args: argparse.Namespace) -> int:
    directory = SignatureDirectoryDAO.read_directory(args.directory, tau_attr=args.tau, fpr=args.fpr)
    result = attribute(resolve_watermark(args.bits), directory)
    user = "none" if result.user is None else result.user
    print(f"user={user} matches={result.match_count} tau_attr={result.tau_attr}")
    return EXIT_OK
