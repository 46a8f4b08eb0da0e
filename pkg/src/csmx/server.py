"""Read-only HTTP JSON API over one ingested log.

Endpoints (all GET):

* /api/health                     liveness probe
* /api/model                      composite model with statistics
* /api/model/projection?artifacts=name1,name2
* /api/interactions?kind=&sort=&desc=&min_<measure>=&limit=&pair=
                    &include_boundary=&include_undefined=
* /api/highlight?artifact=&state=  or  ?artifact=&from=&to=

Anything outside /api serves static files from the configured UI directory
when one is given.  Responses are deterministic: identical inputs produce
byte-identical bodies.
"""

from __future__ import annotations

import json
import logging
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlsplit

from .errors import CsmError, NotFoundError, QueryError
from .explorer import (
    Query,
    enumerate_interactions,
    export_interactions,
    export_model,
    highlight,
)
from .ingest import EventLog, discover_model, project_log
from .interactions import InteractionEngine, KINDS
from .measures import MEASURES
from .model import CsmModel, project_model
from .stats import annotate

logger = logging.getLogger(__name__)

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".mjs": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json",
    ".svg": "image/svg+xml",
    ".png": "image/png",
    ".ico": "image/x-icon",
    ".map": "application/json",
}


def _bool_param(params: dict, name: str, default: bool) -> bool:
    raw = params.get(name)
    if raw is None or raw == "":
        return default
    if raw in ("true", "1"):
        return True
    if raw in ("false", "0"):
        return False
    raise QueryError(f"{name} must be true or false, got {raw!r}")


def _float_param(params: dict, name: str) -> float | None:
    raw = params.get(name)
    if raw is None or raw == "":
        return None
    try:
        return float(raw)
    except ValueError:
        raise QueryError(f"{name} must be a number, got {raw!r}") from None


def _int_param(params: dict, name: str, default: int) -> int:
    raw = params.get(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise QueryError(f"{name} must be an integer, got {raw!r}") from None


def query_from_params(params: dict) -> Query:
    """Build an interaction query from flat string query parameters."""
    kinds_raw = params.get("kind")
    if kinds_raw:
        kinds = tuple(k.strip() for k in kinds_raw.split(",") if k.strip())
    else:
        kinds = KINDS
    min_values = {}
    for measure in MEASURES:
        floor = _float_param(params, f"min_{measure}")
        if floor is not None:
            min_values[measure] = floor
    min_values.setdefault("support", 0.001)
    pair_raw = params.get("pair")
    pair = None
    if pair_raw:
        parts = tuple(p.strip() for p in pair_raw.split(","))
        if len(parts) != 2 or not all(parts):
            raise QueryError(f"pair must be two artifact names, got {pair_raw!r}")
        pair = parts
    return Query(
        kinds=kinds,
        sort_by=params.get("sort") or "lift",
        descending=_bool_param(params, "desc", True),
        min_values=min_values,
        pair=pair,
        limit=_int_param(params, "limit", 50),
        include_boundary=_bool_param(params, "include_boundary", False),
        include_undefined=_bool_param(params, "include_undefined", False),
    )


class ExplorerService:
    """The request-independent core: one log, one model, cached engine."""

    def __init__(
        self,
        log: EventLog,
        model: CsmModel | None = None,
        ui_dir: str | Path | None = None,
    ):
        self.log = log
        self.model = model if model is not None else discover_model(log)
        self.annotation = annotate(self.model, log)
        self.engine = InteractionEngine(log)
        self.ui_dir = Path(ui_dir).resolve() if ui_dir else None

    # Returns (status, document); raises nothing but CsmError subclasses.
    def handle_api(self, path: str, params: dict) -> tuple[int, dict]:
        if path == "/api/health":
            return 200, {"status": "ok"}
        if path == "/api/model":
            return 200, export_model(self.model, self.annotation)
        if path == "/api/model/projection":
            raw = params.get("artifacts", "")
            names = [n.strip() for n in raw.split(",") if n.strip()]
            if not names:
                raise QueryError("artifacts parameter must name at least one artifact")
            known = {a.name: a.index for a in self.model.artifacts}
            unknown = [n for n in names if n not in known]
            if unknown:
                raise NotFoundError(f"unknown artifact(s): {', '.join(unknown)}")
            indices = tuple(sorted({known[n] for n in names}))
            projected_model = project_model(self.model, indices)
            projected_log = project_log(self.log, indices)
            return 200, export_model(
                projected_model, annotate(projected_model, projected_log)
            )
        if path == "/api/interactions":
            query = query_from_params(params)
            records = enumerate_interactions(
                self.log, self.model, query, self.engine
            )
            return 200, export_interactions(records, self.model)
        if path == "/api/highlight":
            artifact = params.get("artifact")
            if not artifact:
                raise QueryError("artifact parameter is required")
            state = params.get("state")
            src, dst = params.get("from"), params.get("to")
            if state and (src or dst):
                raise QueryError("pass either state= or from=/to=, not both")
            if state:
                result = highlight(
                    self.log, self.model, artifact, state=state, engine=self.engine
                )
            elif src and dst:
                result = highlight(
                    self.log,
                    self.model,
                    artifact,
                    transition=(src, dst),
                    engine=self.engine,
                )
            else:
                raise QueryError("pass state= or both from= and to=")
            return 200, result.to_dict()
        raise NotFoundError(f"no such endpoint: {path}")

    def read_static(self, path: str) -> tuple[bytes, str] | None:
        if self.ui_dir is None:
            return None
        rel = path.lstrip("/") or "index.html"
        target = (self.ui_dir / rel).resolve()
        if not str(target).startswith(str(self.ui_dir)) or not target.is_file():
            return None
        ctype = _CONTENT_TYPES.get(target.suffix, "application/octet-stream")
        return target.read_bytes(), ctype


def _encode(doc: dict) -> bytes:
    return json.dumps(doc, separators=(",", ":"), allow_nan=False).encode()


class _Handler(BaseHTTPRequestHandler):
    service: ExplorerService  # set by make_server

    def do_GET(self) -> None:  # noqa: N802 (http.server API)
        split = urlsplit(self.path)
        params = {
            k: v[-1] for k, v in parse_qs(split.query, keep_blank_values=True).items()
        }
        if split.path.startswith("/api"):
            try:
                status, doc = self.service.handle_api(split.path.rstrip("/") or "/api", params)
            except NotFoundError as exc:
                status, doc = 404, {"error": str(exc)}
            except (QueryError, CsmError) as exc:
                status, doc = 400, {"error": str(exc)}
            except Exception:  # pragma: no cover - defensive
                logger.exception("request failed: %s", self.path)
                status, doc = 500, {"error": "internal error"}
            body = _encode(doc)
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)
            return
        static = self.service.read_static(split.path)
        if static is None:
            body = _encode({"error": "not found"})
            self.send_response(404)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)
            return
        data, ctype = static
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def log_message(self, fmt: str, *args) -> None:
        logger.debug("%s %s", self.address_string(), fmt % args)


def make_server(
    service: ExplorerService, port: int, host: str = "127.0.0.1"
) -> ThreadingHTTPServer:
    """A bound, not yet running server; port 0 picks an ephemeral port."""
    handler = type("BoundHandler", (_Handler,), {"service": service})
    return ThreadingHTTPServer((host, port), handler)


def run_in_thread(service: ExplorerService, port: int = 0) -> tuple[ThreadingHTTPServer, int]:
    """Start a server on a daemon thread; returns it with the bound port."""
    server = make_server(service, port)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server, server.server_address[1]
