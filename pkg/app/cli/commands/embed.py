# app/cli/commands/embed.py

import argparse

from app.cli.common import (
    add_shape_argument,
    add_strategy_argument,
    positive_int,
    resolve_key,
    resolve_watermark,
    seed_type,
)
from app.core.config import get_codec_settings
from app.core.error_handlers import setup_exception_handlers
from app.core.exceptions import EXIT_OK
from app.db.dao.latent import LatentDAO
from app.db.dao.watermark import WatermarkDAO
from app.db.schemas.codec import EmbeddingParams
from app.services.codec.embedding import embed_with_retry, random_watermark
from app.utils.logger import logger


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("embed", help="сэмплировать латент и встроить водяной знак")
    parser.add_argument("--k", type=positive_int, default=get_codec_settings().TMARK_DEFAULT_K, help="длина водяного знака")
    parser.add_argument("--seed", type=seed_type, required=True, help="64-битный seed латента")
    parser.add_argument("--key", required=True, help="ключ модели: 64 hex-символа или путь к файлу")
    add_shape_argument(parser)
    parser.add_argument("--out", required=True, help="куда записать LWM1")
    parser.add_argument("--watermark", help="биты '0101…' или файл; по умолчанию случайный из seed")
    parser.add_argument("--wm-out", help="куда записать использованный водяной знак")
    add_strategy_argument(parser)
    parser.set_defaults(handler=run)


@setup_exception_handlers
def run(args: argparse.Namespace) -> int:
    params = EmbeddingParams(shape=args.shape, k=args.k, strategy=args.strategy)
    key = resolve_key(args.key)
    m = resolve_watermark(args.watermark) if args.watermark else random_watermark(args.k, args.seed)

    z_wt, used_seed = embed_with_retry(m, args.seed, key, params)
    LatentDAO.write_latent(args.out, z_wt)
    if args.wm_out:
        WatermarkDAO.write_watermark(args.wm_out, m)

    if used_seed != args.seed:
        logger.warning(f"Латент пересэмплирован: seed {args.seed} → {used_seed}")
    logger.info(f"Водяной знак k={params.k} встроен в {args.out}")
    print(f"seed={used_seed}")
    print(f"watermark={m}")
    return EXIT_OK
