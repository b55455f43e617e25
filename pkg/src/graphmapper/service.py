"""Stateless-computation HTTP service: upload graphs, fetch lenses and
layouts, and build summaries over the wire.

Graphs are content-addressed (the id is a hash of the canonical graph
JSON), every stored value is immutable, and identical requests are served
byte-identically. Expensive lens computations on large graphs return a
202 + job id; poll /jobs/{id}.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
from collections import OrderedDict
from concurrent.futures import Future, ThreadPoolExecutor
from dataclasses import dataclass, fields

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware

from .cover import cover_from_json_obj, uniform_cover
from .errors import (
    ConvergenceError,
    DisconnectedGraphError,
    GraphMapperError,
    ParameterError,
    ParseError,
    ValidationError,
)
from .graph import EDGE_LIST, GRAPH_JSON, WeightedGraph, parse_graph
from .lenses import (
    DEFAULT_BIN_COUNT,
    LensField,
    compute_lens,
    histogram,
    resolve_lens_kind,
)
from .layout import layout_fr
from .mapper import compute_mog

EXPENSIVE_LENSES = ("agd", "density", "laplacian_l2", "laplacian_l3")


@dataclass
class ServiceConfig:
    port: int = 8080
    max_upload_bytes: int = 64_000_000
    cache_capacity: int = 256
    job_threshold_nodes: int = 20_000

    @classmethod
    def load(cls, path: str | None = None, env: dict | None = None) -> "ServiceConfig":
        """File settings first, then GRAPHMAPPER_* environment overrides."""
        values: dict = {}
        if path:
            with open(path, "rb") as fh:
                values.update(json.load(fh))
        env = os.environ if env is None else env
        for f in fields(cls):
            key = f"GRAPHMAPPER_{f.name.upper()}"
            if key in env:
                values[f.name] = int(env[key])
        known = {f.name for f in fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise ParameterError(f"unknown config keys: {sorted(unknown)}")
        return cls(**values)


class _OnceMap:
    """Deduplicating cache: concurrent get_or_compute calls with the same
    key run the computation once; completed entries are kept (LRU)."""

    def __init__(self, capacity: int):
        self._futures: OrderedDict = OrderedDict()
        self._lock = threading.Lock()
        self._capacity = capacity

    def get_or_compute(self, key, fn):
        with self._lock:
            fut = self._futures.get(key)
            owner = fut is None
            if owner:
                fut = Future()
                self._futures[key] = fut
            else:
                self._futures.move_to_end(key)
            while len(self._futures) > self._capacity:
                old_key, old_fut = next(iter(self._futures.items()))
                if old_fut.done() and old_key != key:
                    self._futures.popitem(last=False)
                else:
                    break
        if owner:
            try:
                fut.set_result(fn())
            except BaseException as exc:
                fut.set_exception(exc)
                with self._lock:
                    self._futures.pop(key, None)
                raise
        return fut.result()


class GraphEntry:
    def __init__(self, graph: WeightedGraph, capacity: int):
        self.graph = graph
        self.lens = _OnceMap(capacity)
        self.layouts = _OnceMap(capacity)
        self.summaries = _OnceMap(capacity)


class SessionStore:
    """Content-addressed graphs plus per-graph computation caches."""

    def __init__(self, config: ServiceConfig):
        self.config = config
        self._graphs: OrderedDict[str, GraphEntry] = OrderedDict()
        self._lock = threading.Lock()

    def put(self, graph: WeightedGraph) -> str:
        graph_id = hashlib.sha256(graph.to_json_bytes()).hexdigest()
        with self._lock:
            if graph_id not in self._graphs:
                self._graphs[graph_id] = GraphEntry(graph, self.config.cache_capacity)
        return graph_id

    def get(self, graph_id: str) -> GraphEntry | None:
        with self._lock:
            return self._graphs.get(graph_id)


def _json_bytes(obj) -> bytes:
    return json.dumps(obj, separators=(",", ":")).encode()


def _respond(obj, status: int = 200) -> Response:
    return Response(content=_json_bytes(obj), status_code=status, media_type="application/json")


def _error(status: int, stage: str, message: str, **extra) -> Response:
    return _respond({"error": {"stage": stage, "message": message, **extra}}, status=status)


_STATUS_FOR = (
    (DisconnectedGraphError, 409),
    (ConvergenceError, 422),
    (ValidationError, 422),
    (ParseError, 422),
    (ParameterError, 400),
)


def _error_response(stage: str, exc: GraphMapperError) -> Response:
    status = 500
    for klass, code in _STATUS_FOR:
        if isinstance(exc, klass):
            status = code
            break
    extra = {}
    if isinstance(exc, DisconnectedGraphError):
        extra["hint"] = "restrict to the largest component, or use the pagerank lens"
        extra["components"] = exc.components
    return _error(status, stage, str(exc), **extra)


def _lens_params_from_query(kind: str, query) -> dict:
    params: dict = {}
    if kind == "density" and "delta" in query:
        params["delta"] = float(query["delta"])
    if kind == "pagerank_log":
        if "damping" in query:
            params["damping"] = float(query["damping"])
        if "max_iter" in query:
            params["max_iter"] = int(query["max_iter"])
    if "tol" in query and kind in ("pagerank_log", "laplacian_l2", "laplacian_l3"):
        params["tol"] = float(query["tol"])
    return params


def _lens_payload(graph: WeightedGraph, field: LensField, bins: int) -> dict:
    return {
        "kind": field.kind,
        "params": field.params,
        "constant": field.constant,
        "values": field.to_values(graph.labels),
        "histogram": histogram(field, bins).to_json_obj(),
    }


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    store = SessionStore(config)
    jobs: dict[str, Future] = {}
    jobs_lock = threading.Lock()
    executor = ThreadPoolExecutor(max_workers=4)

    app = FastAPI(title="graphmapper service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    app.state.store = store
    app.state.config = config

    @app.get("/healthz")
    def healthz():
        return _respond({"status": "ok"})

    @app.post("/graphs")
    async def upload_graph(request: Request, format: str | None = None):
        body = await request.body()
        if len(body) > config.max_upload_bytes:
            return _error(413, "upload", f"body exceeds {config.max_upload_bytes} bytes")
        if format is None:
            format = GRAPH_JSON if body.lstrip()[:1] == b"{" else EDGE_LIST
        try:
            graph = parse_graph(body, format=format)
        except GraphMapperError as exc:
            return _error_response("parse", exc)
        graph_id = store.put(graph)
        return _respond({"id": graph_id, "nodes": graph.n, "edges": graph.m})

    @app.get("/graphs/{graph_id}")
    def get_graph(graph_id: str):
        entry = store.get(graph_id)
        if entry is None:
            return _error(404, "lookup", f"unknown graph {graph_id!r}")
        return _respond(entry.graph.to_json_obj())

    @app.get("/graphs/{graph_id}/layout")
    def get_layout(graph_id: str, seed: int = 0, iterations: int = 100, theta: float = 0.5):
        entry = store.get(graph_id)
        if entry is None:
            return _error(404, "lookup", f"unknown graph {graph_id!r}")
        key = ("layout", seed, iterations, theta)

        def compute():
            result = layout_fr(entry.graph, seed=seed, iterations=iterations, theta=theta)
            return _json_bytes(entry.graph.to_json_obj(positions=result.positions))

        try:
            payload = entry.layouts.get_or_compute(key, compute)
        except GraphMapperError as exc:
            return _error_response("layout", exc)
        return Response(content=payload, media_type="application/json")

    @app.get("/jobs/{job_id}")
    def get_job(job_id: str):
        with jobs_lock:
            fut = jobs.get(job_id)
        if fut is None:
            return _error(404, "lookup", f"unknown job {job_id!r}")
        if not fut.done():
            return _respond({"status": "pending"})
        exc = fut.exception()
        if exc is not None:
            if isinstance(exc, GraphMapperError):
                err = json.loads(_error_response("lens", exc).body)
                return _respond({"status": "error", **err})
            return _respond({"status": "error", "error": {"stage": "lens", "message": str(exc)}})
        return Response(content=fut.result(), media_type="application/json")

    @app.get("/graphs/{graph_id}/lens/{kind}")
    def get_lens(graph_id: str, kind: str, request: Request):
        entry = store.get(graph_id)
        if entry is None:
            return _error(404, "lookup", f"unknown graph {graph_id!r}")
        try:
            resolved = resolve_lens_kind(kind)
            params = _lens_params_from_query(resolved, request.query_params)
            bins = int(request.query_params.get("bins", DEFAULT_BIN_COUNT))
        except (ParameterError, ValueError) as exc:
            return _error(400, "lens", str(exc))
        key = ("lens", resolved, tuple(sorted(params.items())), bins)

        def compute():
            field = compute_lens(entry.graph, resolved, **params)
            return _json_bytes(_lens_payload(entry.graph, field, bins))

        big = entry.graph.n > config.job_threshold_nodes and resolved in EXPENSIVE_LENSES
        if big:
            job_id = hashlib.sha256(_json_bytes([graph_id, list(key)])).hexdigest()[:24]
            with jobs_lock:
                if job_id not in jobs:
                    jobs[job_id] = executor.submit(entry.lens.get_or_compute, key, compute)
                fut = jobs[job_id]
            if not fut.done():
                return _respond({"status": "pending", "job": job_id, "poll": f"/jobs/{job_id}"}, status=202)
            if fut.exception() is None:
                return Response(content=fut.result(), media_type="application/json")
            exc = fut.exception()
            if isinstance(exc, GraphMapperError):
                return _error_response("lens", exc)
            return _error(500, "lens", str(exc))
        try:
            payload = entry.lens.get_or_compute(key, compute)
        except GraphMapperError as exc:
            return _error_response("lens", exc)
        return Response(content=payload, media_type="application/json")

    @app.post("/graphs/{graph_id}/mog")
    async def post_mog(graph_id: str, request: Request):
        entry = store.get(graph_id)
        if entry is None:
            return _error(404, "lookup", f"unknown graph {graph_id!r}")
        body = await request.body()
        try:
            spec = json.loads(body)
        except json.JSONDecodeError as exc:
            return _error(422, "parse", f"invalid JSON body: {exc.msg}")
        key = ("mog", hashlib.sha256(_json_bytes(spec)).hexdigest())

        def compute():
            lens_spec = spec.get("lens") or {}
            if isinstance(lens_spec, str):
                lens_spec = {"kind": lens_spec}
            kind = resolve_lens_kind(lens_spec.get("kind", "agd"))
            lens_params = lens_spec.get("params") or {}
            cover_obj = spec.get("cover")
            cover = cover_from_json_obj(cover_obj) if cover_obj else uniform_cover(5, 0.1)
            filt = spec.get("filter") or {}
            summary = compute_mog(
                entry.graph,
                kind,
                lens_params=lens_params,
                cover=cover,
                min_size=int(filt.get("min_size", 0)),
                largest_only=bool(filt.get("largest_only", False)),
            )
            layout_spec = spec.get("layout") or {}
            result = layout_fr(
                summary,
                seed=int(layout_spec.get("seed", 0)),
                iterations=int(layout_spec.get("iterations", 100)),
            )
            return _json_bytes(summary.to_json_obj(positions=result.positions))

        try:
            payload = entry.summaries.get_or_compute(key, compute)
        except GraphMapperError as exc:
            return _error_response("mapper", exc)
        except (TypeError, ValueError) as exc:
            return _error(400, "parse", f"bad request body: {exc}")
        return Response(content=payload, media_type="application/json")

    return app
