"""Loopback HTTP facade over the ranking engines.

Endpoints (JSON in/out, versioned under /api/v1):

    GET  /api/v1/catalog     full catalog plus the serving revision
    GET  /api/v1/scenarios   bundled/loaded scenarios
    POST /api/v1/rank        {"weights": {...}, "methods": ["AHP","SAW"]}
    POST /api/v1/sweep       {"weights": {...}, "criterion": id, "values": [...]}
    POST /api/v1/reload      re-read the catalog file, bump the revision

Requests are served from an immutable snapshot taken at request start, so
concurrent calls never observe a half-reloaded catalog. Errors come back as
{"code", "message", "field"?}. This is a desk tool: it binds to loopback.
"""

from __future__ import annotations

import json
import mimetypes
import threading
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from . import catalog_io
from .catalog_io import load_catalog
from .core import Method, ServiceCatalog, validate_weights
from .errors import (
    MissingCriterion,
    NoConvergence,
    NonPositiveWeight,
    RankbenchError,
    SumNotOne,
    UnknownCriterion,
    UnknownMethod,
    ValidationError,
)
from .scenarios import Scenario, run_scenario, sweep_weights


@dataclass(frozen=True)
class ApiSnapshot:
    """Immutable unit the server hands to every request."""

    catalog: ServiceCatalog
    scenarios: tuple[Scenario, ...]
    revision: int


class RankApiServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(
        self,
        address: tuple[str, int] = ("127.0.0.1", 0),
        catalog_path: str | None = None,
        catalog: ServiceCatalog | None = None,
        scenarios: list[Scenario] | None = None,
        ui_dir: str | None = None,
        clamp_saaty: bool = False,
        eigen_tol: float = 1e-10,
        eigen_max_iterations: int = 1000,
    ):
        super().__init__(address, _Handler)
        self.catalog_path = catalog_path
        self._initial_catalog = catalog
        self._initial_scenarios = scenarios
        self.ui_dir = Path(ui_dir).resolve() if ui_dir else None
        self.clamp_saaty = clamp_saaty
        self.eigen_tol = eigen_tol
        self.eigen_max_iterations = eigen_max_iterations
        self._lock = threading.Lock()
        self._snapshot: ApiSnapshot | None = None

    def load(self) -> ApiSnapshot:
        """Install the first snapshot (or re-install after reload)."""
        if self._initial_catalog is not None:
            catalog = self._initial_catalog
        elif self.catalog_path is not None:
            catalog = load_catalog(Path(self.catalog_path))
        else:
            catalog = catalog_io.builtin_catalog()
        if self._initial_scenarios is not None:
            scenarios = tuple(self._initial_scenarios)
        else:
            scenarios = tuple(catalog_io.builtin_scenarios())
        with self._lock:
            revision = 1 if self._snapshot is None else self._snapshot.revision + 1
            self._snapshot = ApiSnapshot(catalog, scenarios, revision)
            return self._snapshot

    def reload(self) -> ApiSnapshot:
        """Re-read the catalog source and swap the snapshot atomically."""
        if self.catalog_path is not None:
            catalog = load_catalog(Path(self.catalog_path))
        elif self._initial_catalog is not None:
            catalog = self._initial_catalog
        else:
            catalog = catalog_io.builtin_catalog()
        with self._lock:
            if self._snapshot is None:
                revision = 1
                scenarios: tuple[Scenario, ...] = tuple(catalog_io.builtin_scenarios())
            else:
                revision = self._snapshot.revision + 1
                scenarios = self._snapshot.scenarios
            self._snapshot = ApiSnapshot(catalog, scenarios, revision)
            return self._snapshot

    @property
    def snapshot(self) -> ApiSnapshot | None:
        with self._lock:
            return self._snapshot

    @property
    def port(self) -> int:
        return self.server_address[1]


class _Handler(BaseHTTPRequestHandler):
    server: RankApiServer
    protocol_version = "HTTP/1.1"

    # keep request handling quiet; the server is a desk tool
    def log_message(self, format: str, *args) -> None:
        pass

    def _send_json(self, status: int, payload: dict | list) -> None:
        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _send_error_doc(self, status: int, code: str, message: str, field: str | None = None) -> None:
        doc: dict = {"code": code, "message": message}
        if field:
            doc["field"] = field
        self._send_json(status, doc)

    def _snapshot_or_503(self) -> ApiSnapshot | None:
        snap = self.server.snapshot
        if snap is None:
            self._send_error_doc(503, "NotInitialized", "catalog not loaded yet")
        return snap

    def _read_body(self) -> dict | None:
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        if not raw:
            self._send_error_doc(400, "EmptyBody", "request body must be JSON")
            return None
        try:
            doc = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            self._send_error_doc(400, "ParseError", f"request body is not valid JSON: {exc}")
            return None
        if not isinstance(doc, dict):
            self._send_error_doc(400, "ParseError", "request body must be a JSON object")
            return None
        return doc

    def do_GET(self) -> None:  # noqa: N802 (http.server API)
        path = self.path.split("?", 1)[0]
        if path == "/api/v1/catalog":
            snap = self._snapshot_or_503()
            if snap is None:
                return
            doc = {
                "revision": snap.revision,
                "catalog": {
                    "schema_version": catalog_io.CATALOG_SCHEMA_VERSION,
                    "criteria": [
                        {
                            "id": c.id,
                            "name": c.name,
                            "direction": c.direction.value,
                            "unit": c.unit,
                        }
                        for c in snap.catalog.criteria
                    ],
                    "services": [
                        {
                            "id": s.id,
                            "name": s.name,
                            "qos": {cid: s.qos[cid] for cid in snap.catalog.criterion_ids},
                        }
                        for s in snap.catalog.services
                    ],
                },
            }
            self._send_json(200, doc)
            return
        if path == "/api/v1/scenarios":
            snap = self._snapshot_or_503()
            if snap is None:
                return
            self._send_json(
                200,
                {"revision": snap.revision, "scenarios": [s.as_dict() for s in snap.scenarios]},
            )
            return
        if self.server.ui_dir is not None:
            self._serve_static(path)
            return
        self._send_error_doc(404, "NotFound", f"no route for GET {path}")

    def do_POST(self) -> None:  # noqa: N802 (http.server API)
        path = self.path.split("?", 1)[0]
        if path == "/api/v1/rank":
            self._handle_rank()
        elif path == "/api/v1/sweep":
            self._handle_sweep()
        elif path == "/api/v1/reload":
            self._handle_reload()
        else:
            self._send_error_doc(404, "NotFound", f"no route for POST {path}")

    def _parse_methods(self, doc: dict) -> tuple[Method, ...]:
        raw = doc.get("methods", ["AHP", "SAW"])
        if not isinstance(raw, list) or not raw:
            raise UnknownMethod("methods must be a non-empty list of 'AHP'/'SAW'")
        methods = []
        for m in raw:
            try:
                methods.append(Method(m))
            except ValueError:
                raise UnknownMethod(f"unknown method {m!r} (expected 'AHP' or 'SAW')") from None
        return tuple(methods)

    def _weights_from(self, doc: dict, snap: ApiSnapshot):
        raw = doc.get("weights")
        if not isinstance(raw, dict) or not raw:
            raise ValidationError("body needs a non-empty 'weights' object")
        cleaned = {}
        for cid, w in raw.items():
            if not isinstance(w, (int, float)) or isinstance(w, bool):
                raise ValidationError(f"weight for '{cid}' must be a number")
            cleaned[str(cid)] = float(w)
        return validate_weights(cleaned, snap.catalog.criteria)

    def _handle_rank(self) -> None:
        snap = self._snapshot_or_503()
        if snap is None:
            return
        doc = self._read_body()
        if doc is None:
            return
        try:
            weights = self._weights_from(doc, snap)
            methods = self._parse_methods(doc)
            scenario = Scenario(name=str(doc.get("name", "adhoc")), weights=weights, methods=methods)
            comparison = run_scenario(
                snap.catalog,
                scenario,
                clamp_saaty=self.server.clamp_saaty,
                eigen_tol=self.server.eigen_tol,
                eigen_max_iterations=self.server.eigen_max_iterations,
            )
        except RankbenchError as exc:
            self._send_engine_error(exc)
            return
        body = comparison.as_dict()
        body["revision"] = snap.revision
        self._send_json(200, body)

    def _handle_sweep(self) -> None:
        snap = self._snapshot_or_503()
        if snap is None:
            return
        doc = self._read_body()
        if doc is None:
            return
        try:
            weights = self._weights_from(doc, snap)
            methods = self._parse_methods(doc)
            criterion = doc.get("criterion")
            if not isinstance(criterion, str) or not criterion:
                raise ValidationError("body needs a 'criterion' id string")
            if criterion not in weights.weights:
                raise UnknownCriterion(f"weight given for unknown criterion '{criterion}'")
            values = doc.get("values")
            if not isinstance(values, list) or not values:
                raise ValidationError("body needs a non-empty 'values' list")
            for v in values:
                if not isinstance(v, (int, float)) or isinstance(v, bool):
                    raise ValidationError("sweep values must be numbers")
            base = Scenario(name=str(doc.get("name", "sweep-base")), weights=weights, methods=methods)
            points = sweep_weights(
                snap.catalog,
                base,
                criterion,
                [float(v) for v in values],
                clamp_saaty=self.server.clamp_saaty,
                eigen_tol=self.server.eigen_tol,
                eigen_max_iterations=self.server.eigen_max_iterations,
            )
        except RankbenchError as exc:
            self._send_engine_error(exc)
            return
        self._send_json(
            200, {"revision": snap.revision, "points": [p.as_dict() for p in points]}
        )

    def _handle_reload(self) -> None:
        try:
            snap = self.server.reload()
        except RankbenchError as exc:
            self._send_error_doc(400, type(exc).__name__, str(exc))
            return
        self._send_json(200, {"revision": snap.revision})

    def _send_engine_error(self, exc: RankbenchError) -> None:
        code = type(exc).__name__
        if isinstance(exc, UnknownCriterion):
            self._send_error_doc(422, code, str(exc), field="weights")
        elif isinstance(exc, (SumNotOne, NonPositiveWeight, MissingCriterion)):
            self._send_error_doc(400, code, str(exc), field="weights")
        elif isinstance(exc, UnknownMethod):
            self._send_error_doc(400, code, str(exc), field="methods")
        elif isinstance(exc, NoConvergence):
            self._send_error_doc(500, code, str(exc))
        elif isinstance(exc, ValidationError):
            self._send_error_doc(400, code, str(exc))
        else:
            self._send_error_doc(500, code, str(exc))

    def _serve_static(self, path: str) -> None:
        assert self.server.ui_dir is not None
        rel = path.lstrip("/") or "index.html"
        target = (self.server.ui_dir / rel).resolve()
        if not str(target).startswith(str(self.server.ui_dir)) or not target.is_file():
            self._send_error_doc(404, "NotFound", f"no route for GET {path}")
            return
        ctype = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
        body = target.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


def serve(
    port: int = 8765,
    catalog_path: str | None = None,
    ui_dir: str | None = None,
    **engine_options,
) -> RankApiServer:
    """Convenience constructor used by tests: bind, load, return (not started)."""
    server = RankApiServer(
        ("127.0.0.1", port), catalog_path=catalog_path, ui_dir=ui_dir, **engine_options
    )
    server.load()
    return server
