# app/cli/commands/payload.py

import argparse

from app.cli.common import positive_int, resolve_watermark
from app.core.error_handlers import setup_exception_handlers
from app.core.exceptions import EXIT_OK
from app.services.codec.payload import decode_payload, encode_payload, payload_capacity


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("payload", help="произвольные биты ↔ сбалансированный водяной знак")
    actions = parser.add_subparsers(dest="action", required=True)

    encode = actions.add_parser("encode", help="сообщение → водяной знак")
    encode.add_argument("--bits", required=True, help="биты сообщения '0101…'")
    encode.add_argument("--k", type=positive_int, required=True, help="длина водяного знака")

    decode = actions.add_parser("decode", help="водяной знак → сообщение")
    decode.add_argument("--watermark", required=True, help="биты или файл водяного знака")
    decode.add_argument("--length", type=int, help="длина сообщения (по умолчанию вся ёмкость)")

    parser.set_defaults(handler=run)


@setup_exception_handlers
def run(args: argparse.Namespace) -> int:
    if args.action == "encode":
        m = encode_payload(args.bits, args.k)
        print(f"capacity={payload_capacity(args.k)}")
        print(f"watermark={m}")
    else:
        bits = decode_payload(resolve_watermark(args.watermark), args.length)
        print(f"bits={''.join(str(bit) for bit in bits)}")
    return EXIT_OK
