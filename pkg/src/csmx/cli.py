"""Command line front end.

Subcommands:

* ``csmx discover``  ingest a CSV log and write the discovered model as JSON
* ``csmx top``       print the highest ranked artifact interactions
* ``csmx serve``     expose the HTTP API (and optionally a web UI)

Exit codes: 0 success, 2 bad input data, 64 usage error, 1 unexpected failure.
The CSM_LOG_LEVEL environment variable (error, warn, info, debug) controls
diagnostic verbosity on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .errors import (
    ConflictError,
    ConformanceError,
    EmptyLogError,
    MappingError,
    NotFoundError,
    ParseError,
    QueryError,
)
from .explorer import (
    Query,
    condition_text,
    consequence_text,
    enumerate_interactions,
    export_model,
)
from .ingest import EventLog, MappingConfig, discover_model, ingest_csv
from .interactions import KIND_FORWARD, KIND_STATE, KIND_TRANSITION, KINDS
from .measures import MEASURES
from .server import ExplorerService, make_server
from .stats import annotate, total_time

logger = logging.getLogger("csmx")

_USAGE_EXIT = 64
_INPUT_EXIT = 2

_LOG_LEVELS = {
    "error": logging.ERROR,
    "warn": logging.WARNING,
    "info": logging.INFO,
    "debug": logging.DEBUG,
}

_KIND_CHOICES = {
    "state": (KIND_STATE,),
    "transition": (KIND_TRANSITION,),
    "forward": (KIND_FORWARD,),
    "all": KINDS,
}


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; the contract here is 64."""

    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(_USAGE_EXIT)


def _configure_logging() -> None:
    raw = os.environ.get("CSM_LOG_LEVEL", "warn").strip().lower()
    level = _LOG_LEVELS.get(raw)
    if level is None:
        level = logging.WARNING
    logging.basicConfig(
        level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr
    )
    if raw not in _LOG_LEVELS:
        logger.warning("unknown CSM_LOG_LEVEL %r, using warn", raw)


def format_duration(ms: int) -> str:
    """Render a millisecond span in the largest unit that keeps it readable."""
    seconds = ms / 1000
    if seconds >= 86400:
        return f"{seconds / 86400:.1f}d"
    if seconds >= 3600:
        return f"{seconds / 3600:.1f}h"
    if seconds >= 60:
        return f"{seconds / 60:.1f}m"
    return f"{seconds:.1f}s"


def _load_log(args: argparse.Namespace) -> EventLog:
    mapping = None
    if args.mapping:
        mapping = MappingConfig.load(args.mapping)
    return ingest_csv(args.log, mapping=mapping)


def cmd_discover(args: argparse.Namespace) -> int:
    log = _load_log(args)
    model = discover_model(log)
    annotation = annotate(model, log)
    doc = export_model(model, annotation)
    text = json.dumps(doc, indent=2, sort_keys=True)
    if args.output == "-":
        print(text)
    else:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
    logger.info(
        "discovered %d states, %d transitions from %d traces (total time %s)",
        len(model.states),
        len(model.transitions),
        log.total_traces,
        format_duration(total_time(log)),
    )
    return 0


def _format_value(value: float | None) -> str:
    if value is None:
        return "n/a"
    if value == float("inf"):
        return "inf"
    if value >= 1000:
        return f"{value:.0f}"
    return f"{value:.3f}"


def cmd_top(args: argparse.Namespace) -> int:
    log = _load_log(args)
    model = discover_model(log)
    min_values = {"support": args.min_support}
    if args.min_confidence is not None:
        min_values["confidence"] = args.min_confidence
    pair = None
    if args.pair:
        parts = tuple(p.strip() for p in args.pair.split(","))
        if len(parts) != 2 or not all(parts):
            raise QueryError(f"--pair expects two artifact names, got {args.pair!r}")
        pair = parts
    query = Query(
        kinds=_KIND_CHOICES[args.kind],
        sort_by=args.sort_by,
        min_values=min_values,
        pair=pair,
        limit=args.limit,
    )
    records = enumerate_interactions(log, model, query)
    header = ("Condition", "Consequence", args.sort_by)
    rows = [
        (
            condition_text(r.key, model),
            consequence_text(r.key, model),
            _format_value(r.measures.value(args.sort_by)),
        )
        for r in records
    ]
    widths = [
        max(len(header[c]), *(len(row[c]) for row in rows)) if rows else len(header[c])
        for c in range(3)
    ]
    lines = [
        "  ".join(cell.ljust(widths[c]) for c, cell in enumerate(header)).rstrip(),
        "  ".join("-" * widths[c] for c in range(3)),
    ]
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[c]) for c, cell in enumerate(row)).rstrip())
    print("\n".join(lines))
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    log = _load_log(args)
    service = ExplorerService(log, ui_dir=args.ui_dir)
    server = make_server(service, args.port)
    port = server.server_address[1]
    print(f"serving on http://127.0.0.1:{port}")
    sys.stdout.flush()
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="csmx", description="Explore multi-artifact process logs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    discover = sub.add_parser("discover", help="ingest a log and write the model")
    discover.add_argument("--log", required=True, help="event log CSV")
    discover.add_argument("--mapping", help="activity mapping JSON")
    discover.add_argument("--output", required=True, help="output path, - for stdout")
    discover.add_argument("--format", choices=("json",), default="json")
    discover.set_defaults(func=cmd_discover)

    top = sub.add_parser("top", help="rank artifact interactions")
    top.add_argument("--log", required=True, help="event log CSV")
    top.add_argument("--mapping", help="activity mapping JSON")
    top.add_argument("--kind", choices=sorted(_KIND_CHOICES), default="all")
    top.add_argument("--sort-by", choices=MEASURES, default="lift")
    top.add_argument("--min-support", type=float, default=0.001)
    top.add_argument("--min-confidence", type=float)
    top.add_argument("--limit", type=int, default=50)
    top.add_argument("--pair", help="restrict to two artifacts: name1,name2")
    top.set_defaults(func=cmd_top)

    serve = sub.add_parser("serve", help="run the HTTP API")
    serve.add_argument("--log", required=True, help="event log CSV")
    serve.add_argument("--mapping", help="activity mapping JSON")
    serve.add_argument("--port", type=int, default=8000, help="0 picks a free port")
    serve.add_argument("--ui-dir", help="directory of static UI assets")
    serve.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except QueryError as exc:
        print(f"csmx: error: {exc}", file=sys.stderr)
        return _USAGE_EXIT
    except (
        OSError,
        ParseError,
        MappingError,
        ConflictError,
        ConformanceError,
        EmptyLogError,
        NotFoundError,
        json.JSONDecodeError,
    ) as exc:
        print(f"csmx: error: {exc}", file=sys.stderr)
        return _INPUT_EXIT
    except Exception as exc:  # pragma: no cover - defensive
        logger.exception("unexpected failure")
        print(f"csmx: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
