# app/cli/commands/channel.py

import argparse

from app.cli.common import seed_type
from app.core.error_handlers import setup_exception_handlers
from app.core.exceptions import EXIT_OK
from app.db.dao.latent import LatentDAO
from app.db.schemas.channel import ChannelRun
from app.services.channel.channels import apply_channel
from app.services.channel.grammar import format_channel, parse_channel
from app.utils.logger import logger


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("channel", help="пропустить LWM1 через модель канала")
    parser.add_argument("--in", dest="input", required=True, help="входной LWM1")
    parser.add_argument("--spec", required=True, help="канал, например gauss:0.3 или preset:distorted")
    parser.add_argument("--trial-seed", type=seed_type, default=0, help="seed испытания")
    parser.add_argument("--out", required=True, help="выходной LWM1")
    parser.set_defaults(handler=run)


@setup_exception_handlers
def run(args: argparse.Namespace) -> int:
    spec = parse_channel(args.spec)
    latent = LatentDAO.read_latent(args.input)
    LatentDAO.write_latent(args.out, apply_channel(latent, ChannelRun(spec=spec, trial_seed=args.trial_seed)))
    logger.info(f"Канал {format_channel(spec)} (seed {args.trial_seed}) применён: {args.input} → {args.out}")
    print(f"channel={format_channel(spec)}")
    return EXIT_OK
