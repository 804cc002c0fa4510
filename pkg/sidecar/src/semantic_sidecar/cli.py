from __future__ import annotations

import argparse

import uvicorn

from .app import create_app
from .config import DEFAULT_MODEL, ServiceConfig


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cohesia-sidecar",
        description="Serve transformer NSP scores and entity embeddings")
    parser.add_argument("--port", type=int, default=8300)
    parser.add_argument("--model", default=DEFAULT_MODEL,
                        help="hub id or local checkpoint path")
    parser.add_argument("--max-batch", type=int, default=16)
    parser.add_argument("--device", choices=["cpu", "accelerator"],
                        default="cpu")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = ServiceConfig(port=args.port, model_id=args.model,
                           max_batch=args.max_batch, device=args.device)
    app = create_app(config)
    uvicorn.run(app, host="0.0.0.0", port=config.port)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
