"""``xar`` command-line entry point.

Each command writes one JSON object to stdout; diagnostics go to stderr.
Exit codes: 0 ok, 2 bad input, 3 backend failure, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Optional, Sequence

from . import scenario
from .config import AppConfig, load_config
from .errors import EmptyStore, StorageError, XarError
from .pipeline import ask, ingest, read_store, write_store
from .service import make_server
from .session import parse_session, write_session

EXIT_OK, EXIT_INPUT, EXIT_BACKEND, EXIT_IO = 0, 2, 3, 4

log = logging.getLogger("xar")


def _error(message: str) -> None:
    print(f"xar: {message}", file=sys.stderr)


def _emit(obj: dict) -> None:
    sys.stdout.write(json.dumps(obj, ensure_ascii=False) + "\n")
    sys.stdout.flush()


def _point(text: str) -> tuple[float, float]:
    try:
        x, y = (float(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected X,Y but got {text!r}") from None
    return (x, y)


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--store", dest="store_path", help="knowledge base file")
    common.add_argument("--backend", choices=["fake", "http"], help="default mode for all backends")
    common.add_argument("--embed-url", dest="embed_url")
    common.add_argument("--vlm-url", dest="vlm_url")
    common.add_argument("--llm-url", dest="llm_url")
    common.add_argument("--min-level", dest="min_level", choices=["DEBUG", "INFO", "WARN", "ERROR"])
    common.add_argument("-v", "--verbose", action="store_true")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="xar", description="Explain robot behavior from recorded logs.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-scenario", parents=[common], help="write the synthetic obstacle scenario")
    defaults = scenario.ScenarioConfig()
    gen.add_argument("--start", type=_point, default=defaults.start)
    gen.add_argument("--goal", type=_point, default=defaults.goal)
    gen.add_argument("--obstacle-time", type=float, default=defaults.obstacle_time)
    gen.add_argument("--detour-apex", type=_point, default=defaults.detour_apex)
    gen.add_argument("--frame-period", type=float, default=defaults.frame_period)
    gen.add_argument("--caption-hint", default=defaults.caption_hint)
    gen.add_argument("--out", required=True, help="output path, or - for stdout")

    ing = sub.add_parser("ingest", parents=[common], help="add a session file to the knowledge base")
    ing.add_argument("session", help="session file (JSON Lines)")

    ask_p = sub.add_parser("ask", parents=[common], help="ask a question about the robot's behavior")
    ask_p.add_argument("question")
    ask_p.add_argument("--k", type=int)

    serve = sub.add_parser("serve", parents=[common], help="run the HTTP ask-service")
    serve.add_argument("--host")
    serve.add_argument("--port", type=int)
    return parser


def cmd_gen_scenario(args, cfg: AppConfig) -> int:
    scen = scenario.ScenarioConfig(
        start=args.start,
        goal=args.goal,
        obstacle_time=args.obstacle_time,
        detour_apex=args.detour_apex,
        frame_period=args.frame_period,
        caption_hint=args.caption_hint,
    )
    events = scenario.generate(scen, cfg.monitor_config())
    data = write_session(events)
    if args.out == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
        return EXIT_OK
    try:
        with open(args.out, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        raise StorageError(f"cannot write {args.out}: {exc}") from None
    _emit({"out": args.out, "events": len(events)})
    return EXIT_OK


def cmd_ingest(args, cfg: AppConfig) -> int:
    try:
        with open(args.session, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise StorageError(f"cannot read {args.session}: {exc}") from None
    events = parse_session(data)
    store = read_store(cfg.store_path)
    summary = ingest(events, store, cfg)
    write_store(store, cfg.store_path)
    _emit(summary.to_dict())
    return EXIT_OK


def cmd_ask(args, cfg: AppConfig) -> int:
    store = read_store(cfg.store_path, missing_ok=False)
    _emit(ask(args.question, store, cfg, args.k).to_dict())
    return EXIT_OK


def cmd_serve(args, cfg: AppConfig) -> int:
    store = read_store(cfg.store_path)
    try:
        server = make_server(store, cfg, args.host, args.port)
    except OSError as exc:
        raise StorageError(f"cannot bind {args.host or cfg.host}:{args.port or cfg.port}: {exc}") from None
    host, port = server.server_address[:2]
    _emit({"status": "listening", "host": host, "port": port, "documents": len(store)})
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        log.info("shutting down")
    finally:
        server.server_close()
    return EXIT_OK


COMMANDS = {
    "gen-scenario": cmd_gen_scenario,
    "ingest": cmd_ingest,
    "ask": cmd_ask,
    "serve": cmd_serve,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO, stream=sys.stderr, format="xar: %(message)s"
    )
    overrides = {
        "store_path": args.store_path,
        "backend": args.backend,
        "embed_url": args.embed_url,
        "vlm_url": args.vlm_url,
        "llm_url": args.llm_url,
        "min_level": args.min_level,
        "port": getattr(args, "port", None),
        "host": getattr(args, "host", None),
    }
    try:
        cfg = load_config(args.config, overrides=overrides)
        return COMMANDS[args.command](args, cfg)
    except EmptyStore as exc:
        _error(str(exc))
        return EXIT_INPUT
    except XarError as exc:
        _error(f"{type(exc).__name__}: {exc}")
        return exc.exit_code if exc.exit_code in (EXIT_INPUT, EXIT_BACKEND, EXIT_IO) else EXIT_INPUT
    except ValueError as exc:
        _error(str(exc))
        return EXIT_INPUT
    except OSError as exc:
        _error(str(exc))
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
