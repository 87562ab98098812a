# app/cli/commands/extract.py

import argparse

from app.cli.common import add_strategy_argument, positive_int, probability, resolve_key, resolve_watermark
from app.core.config import get_codec_settings, get_stats_settings
from app.core.error_handlers import setup_exception_handlers
from app.core.exceptions import EXIT_OK
from app.db.dao.latent import LatentDAO
from app.db.dao.report import ReportDAO
from app.db.schemas.codec import EmbeddingParams, ExtractionReport
from app.services.codec.extraction import extract
from app.services.stats.metrics import bit_accuracy, detect, match_count
from app.services.stats.thresholds import detection_threshold


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("extract", help="извлечь водяной знак из LWM1")
    parser.add_argument("--in", dest="input", required=True, help="файл LWM1")
    parser.add_argument("--key", required=True, help="ключ модели: 64 hex-символа или путь к файлу")
    parser.add_argument("--k", type=positive_int, default=get_codec_settings().TMARK_DEFAULT_K, help="длина водяного знака")
    parser.add_argument("--report", help="куда записать JSON-отчёт; по умолчанию stdout")
    parser.add_argument("--watermark", help="эталонный водяной знак для оценки (биты или файл)")
    parser.add_argument("--fpr", type=probability, default=get_stats_settings().TMARK_DEFAULT_FPR, help="FPR для τ")
    add_strategy_argument(parser)
    parser.set_defaults(handler=run)


@setup_exception_handlers
def run(args: argparse.Namespace) -> int:
    latent = LatentDAO.read_latent(args.input)
    params = EmbeddingParams(shape=latent.shape, k=args.k, strategy=args.strategy)
    result = extract(latent, resolve_key(args.key), params)

    report = ExtractionReport.model_validate(result.model_dump() | {"k": result.k})
    if args.watermark:
        reference = resolve_watermark(args.watermark)
        threshold = detection_threshold(params.k, args.fpr)
        report = report.model_copy(
            update={
                "reference": str(reference),
                "bit_accuracy": bit_accuracy(reference, result.bits),
                "match_count": match_count(reference, result.bits),
                "tau": threshold.tau,
                "detected": detect(reference, result.bits, threshold),
            }
        )

    if args.report:
        ReportDAO.write_extraction(args.report, report)
    else:
        print(report.model_dump_json(indent=2))
    if report.bit_accuracy is not None:
        print(f"bit_accuracy={report.bit_accuracy!r}")
    return EXIT_OK
