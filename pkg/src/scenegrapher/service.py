"""HTTP facade over the store: the boundary the web UI consumes.

Sync endpoints run in the threadpool; the store's per-graph lock serializes
writers, so concurrent command posts to one graph apply in some total order.
Domain errors map to structured JSON bodies: 404 unknown ids, 400 malformed
input, 409 conflicts/state errors.
"""

from __future__ import annotations

import mimetypes
from contextlib import asynccontextmanager
from pathlib import Path

from fastapi import Body, FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import FileResponse, JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from .commands import decode_command
from .config import ServiceConfig
from .errors import (
    ConflictError,
    GraphError,
    NotFoundError,
    ParseError,
    StateError,
    ValidationError,
)
from .layout import LayoutConfig
from .serialization import NODE_COLORS, SCHEMA_VERSION
from .store import GraphStore
from .vocabulary import builtin_vocabulary, load_tsv

MEDIA_TYPES = {"json": "application/json", "svg": "image/svg+xml", "sg2im": "application/json"}
VOCABULARY_PANEL_SIZE = 25

_IMAGE_SUFFIXES = {".jpg", ".jpeg", ".png", ".gif", ".webp", ".bmp"}


def _status_for(exc: GraphError) -> int:
    if isinstance(exc, NotFoundError):
        return 404
    if isinstance(exc, (ConflictError, StateError)):
        return 409
    if isinstance(exc, (ValidationError, ParseError)):
        return 400
    return 500


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    store = GraphStore(
        config.store_dir,
        compaction_interval=config.compaction_interval,
        fsync=config.fsync,
    )

    @asynccontextmanager
    async def lifespan(_: FastAPI):
        yield
        store.close()

    app = FastAPI(title="scenegrapher", version="0.1.0", lifespan=lifespan)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    app.state.store = store
    app.state.config = config

    if config.vocab_attributes:
        attributes = load_tsv(config.vocab_attributes, "attribute")
    else:
        attributes = builtin_vocabulary()[0]
    if config.vocab_predicates:
        predicates = load_tsv(config.vocab_predicates, "predicate")
    else:
        predicates = builtin_vocabulary()[1]
    vocabularies = {"attributes": attributes, "predicates": predicates}

    @app.exception_handler(GraphError)
    def graph_error_handler(request: Request, exc: GraphError):
        return JSONResponse(
            status_code=_status_for(exc),
            content={"error": {"code": exc.code, "id": exc.node_id, "message": str(exc)}},
        )

    # -- graphs -----------------------------------------------------------

    @app.post("/graphs", status_code=201)
    def create_graph(payload: dict | None = Body(default=None)):
        image_ref = None
        if payload is not None:
            if not isinstance(payload, dict) or set(payload) - {"image_ref"}:
                raise ValidationError("body must be {} or {\"image_ref\": ...}")
            image_ref = payload.get("image_ref")
            if image_ref is not None and not isinstance(image_ref, str):
                raise ValidationError("image_ref must be a string")
        return {"graph_id": store.create_graph(image_ref)}

    @app.get("/graphs")
    def list_graphs():
        return store.graph_ids()

    @app.get("/graphs/{graph_id}")
    def get_graph(graph_id: str):
        return Response(store.document_bytes(graph_id), media_type="application/json")

    @app.post("/graphs/{graph_id}/commands")
    def post_command(graph_id: str, payload: dict = Body(...)):
        if not isinstance(payload, dict) or "command" not in payload:
            raise ValidationError("envelope must be {\"command\": {...}, \"request_id\"?: str}")
        extra = set(payload) - {"command", "request_id"}
        if extra:
            raise ValidationError(f"unexpected envelope fields: {sorted(extra)}")
        request_id = payload.get("request_id")
        if request_id is not None and not isinstance(request_id, str):
            raise ValidationError("request_id must be a string")
        command = decode_command(payload["command"])
        return store.apply_command(graph_id, command, request_id=request_id).to_dict()

    @app.post("/graphs/{graph_id}/undo")
    def post_undo(graph_id: str):
        return store.undo(graph_id).to_dict()

    @app.get("/graphs/{graph_id}/layout")
    def get_layout(
        graph_id: str,
        min_sep: str | None = None,
        row_height: str | None = None,
        origin_x: str | None = None,
        origin_y: str | None = None,
    ):
        layout_config = LayoutConfig(
            min_sep=_number("min_sep", min_sep, config.min_sep),
            row_height=_number("row_height", row_height, config.row_height),
            origin=(
                _number("origin_x", origin_x, config.origin_x),
                _number("origin_y", origin_y, config.origin_y),
            ),
        )
        return store.layout_map(graph_id, layout_config)

    @app.get("/graphs/{graph_id}/export")
    def get_export(graph_id: str, format: str = "json"):
        payload, dropped = store.export(graph_id, format)
        headers = {} if dropped is None else {"X-Dropped-Attributes": str(dropped)}
        return Response(payload, media_type=MEDIA_TYPES[format], headers=headers)

    @app.get("/graphs/{graph_id}/metrics")
    def get_metrics(graph_id: str):
        return store.metrics_summary(graph_id)

    # -- templates ----------------------------------------------------------

    @app.post("/graphs/{graph_id}/templates", status_code=201)
    def post_template(graph_id: str, payload: dict = Body(...)):
        if not isinstance(payload, dict) or set(payload) != {"object_id"}:
            raise ValidationError("body must be {\"object_id\": ...}")
        object_id = payload["object_id"]
        if not isinstance(object_id, str):
            raise ValidationError("object_id must be a string")
        return store.store_template(graph_id, object_id).to_dict()

    @app.get("/templates")
    def list_templates():
        return [t.to_dict() for t in store.list_templates()]

    # -- vocabulary -----------------------------------------------------------

    @app.get("/vocabulary/{kind}")
    def get_vocabulary(kind: str, k: str | None = None):
        if kind not in vocabularies:
            raise NotFoundError(f"no vocabulary {kind!r} (use attributes or predicates)")
        vocabulary = vocabularies[kind]
        if k is None:
            return vocabulary.labels()
        try:
            count = int(k)
        except ValueError:
            raise ValidationError(f"k must be an integer, got {k!r}") from None
        return vocabulary.top_k(count)

    # -- images ---------------------------------------------------------------

    @app.get("/images")
    def list_images():
        if not config.image_dir:
            return []
        directory = Path(config.image_dir)
        if not directory.is_dir():
            return []
        return sorted(
            p.name for p in directory.iterdir()
            if p.is_file() and p.suffix.lower() in _IMAGE_SUFFIXES
        )

    @app.get("/images/{name}")
    def get_image(name: str):
        if not config.image_dir:
            raise NotFoundError("no image directory configured")
        directory = Path(config.image_dir).resolve()
        path = (directory / name).resolve()
        if path.parent != directory or not path.is_file():
            raise NotFoundError(f"no image {name!r}", node_id=name)
        media_type = mimetypes.guess_type(path.name)[0] or "application/octet-stream"
        return FileResponse(path, media_type=media_type)

    # -- shared constants -------------------------------------------------------

    @app.get("/config")
    def get_config():
        return {
            "schema_version": SCHEMA_VERSION,
            "colors": NODE_COLORS,
            "layout": {
                "min_sep": config.min_sep,
                "row_height": config.row_height,
                "origin": [config.origin_x, config.origin_y],
            },
            "vocabulary_panel_size": VOCABULARY_PANEL_SIZE,
        }

    if config.ui_dir and Path(config.ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=config.ui_dir, html=True), name="ui")

    return app


def _number(name: str, raw: str | None, default: float) -> float:
    if raw is None:
        return default
    try:
        return float(raw)
    except ValueError:
        raise ValidationError(f"{name} must be a number, got {raw!r}") from None
