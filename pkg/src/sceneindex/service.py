"""HTTP API: ingestion, heatmaps, index points, player assets.

All non-2xx responses carry the error envelope
``{"status": ..., "code": ..., "message": ..., "detail": ...}``.
Request bodies are strict: unknown fields are rejected with 400.

Index extractions are cached per (video, profile, k, min_distance) and the
cache is invalidated whenever a session is appended to that video, so a GET
issued after a 201 always reflects the new session.
"""

from __future__ import annotations

import threading
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, ConfigDict, Field
from starlette.exceptions import HTTPException as StarletteHTTPException

from .heatmap import PROFILES, build_heatmap
from .indexer import IndexPoint, IndexRequest, extract_index_points
from .logfmt import LogParseError, MalformedToken, UnknownAbbrev, parse_log_text
from .model import (
    EmptyAuthor,
    EventKind,
    EventOutOfRange,
    InteractionEvent,
    SessionRecord,
    UnknownKind,
    ValidationError,
    VideoMeta,
)
from .store import (
    DurationChangeWithSessions,
    SessionStore,
    StorageFailure,
    UnknownVideo,
)

API_PREFIX = "/api/v1"


class ApiError(Exception):
    """Deliberate HTTP error; rendered as the error envelope."""

    def __init__(self, status: int, code: str, message: str, detail: object = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.detail = detail


def _envelope(status: int, code: str, message: str, detail: object = None) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"status": status, "code": code, "message": message, "detail": detail},
    )


class VideoMetaBody(BaseModel):
    model_config = ConfigDict(extra="forbid")

    video_id: str
    title: str
    duration_s: int = Field(ge=1)
    source_url: str


class EventBody(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: str
    t: float


class SessionBody(BaseModel):
    """Either structured events or compact log text, not both."""

    model_config = ConfigDict(extra="forbid")

    author: str
    recorded_at: datetime | None = None
    events: list[EventBody] | None = None
    content: str | None = None


class _IndexCache:
    """(video, profile, k, d) -> points; invalidated per video on append."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._entries: dict[tuple[str, str, int, int], list[IndexPoint]] = {}

    def get(self, key: tuple[str, str, int, int]) -> list[IndexPoint] | None:
        with self._lock:
            return self._entries.get(key)

    def put(self, key: tuple[str, str, int, int], points: list[IndexPoint]) -> None:
        with self._lock:
            self._entries[key] = points

    def invalidate(self, video_id: str) -> None:
        with self._lock:
            for key in [k for k in self._entries if k[0] == video_id]:
                del self._entries[key]


def _meta_doc(meta: VideoMeta) -> dict:
    return {
        "video_id": meta.video_id,
        "title": meta.title,
        "duration_s": meta.duration_s,
        "source_url": meta.source_url,
    }


def _session_events(body: SessionBody) -> tuple[InteractionEvent, ...]:
    """Build events from whichever body shape was supplied."""
    if body.content is not None and body.events is not None:
        raise ApiError(400, "ambiguous_body", "provide either events or content, not both")
    if body.content is not None:
        return tuple(parse_log_text(body.content))
    if body.events is not None:
        events = []
        for i, e in enumerate(body.events):
            try:
                kind = EventKind.from_abbrev(e.kind)
            except UnknownKind:
                raise ApiError(
                    422,
                    "unknown_kind",
                    f"event {i}: unknown kind {e.kind!r}",
                    detail={"event_index": i},
                ) from None
            try:
                events.append(InteractionEvent(kind, e.t))
            except ValueError as exc:
                raise ApiError(
                    422, "invalid_event", f"event {i}: {exc}", detail={"event_index": i}
                ) from None
        return tuple(events)
    raise ApiError(400, "invalid_body", "one of events or content is required")


def _profile_or_400(name: str):
    config = PROFILES.get(name)
    if config is None:
        raise ApiError(
            400,
            "unknown_profile",
            f"unknown scoring profile {name!r}",
            detail={"known_profiles": sorted(PROFILES)},
        )
    return config


def create_app(
    store: SessionStore,
    ui_dir: str | Path | None = None,
    media_dir: str | Path | None = None,
) -> FastAPI:
    """Build the application around one store instance."""
    app = FastAPI(title="sceneindex", docs_url=None, redoc_url=None)
    cache = _IndexCache()

    # -- error rendering ---------------------------------------------------

    @app.exception_handler(ApiError)
    async def _api_error(request: Request, exc: ApiError):
        return _envelope(exc.status, exc.code, exc.message, exc.detail)

    @app.exception_handler(UnknownVideo)
    async def _unknown_video(request: Request, exc: UnknownVideo):
        return _envelope(404, "unknown_video", str(exc))

    @app.exception_handler(DurationChangeWithSessions)
    async def _duration_conflict(request: Request, exc: DurationChangeWithSessions):
        return _envelope(409, "duration_conflict", str(exc))

    @app.exception_handler(StorageFailure)
    async def _storage_failure(request: Request, exc: StorageFailure):
        return _envelope(503, "storage_failure", str(exc))

    @app.exception_handler(LogParseError)
    async def _log_parse_error(request: Request, exc: LogParseError):
        code = "unknown_abbrev" if isinstance(exc, UnknownAbbrev) else "malformed_token"
        return _envelope(422, code, str(exc), detail={"token_index": exc.token_index})

    @app.exception_handler(ValidationError)
    async def _session_invalid(request: Request, exc: ValidationError):
        codes = {
            EventOutOfRange: "event_out_of_range",
            UnknownKind: "unknown_kind",
            EmptyAuthor: "empty_author",
        }
        return _envelope(422, codes.get(type(exc), "validation_failed"), str(exc))

    @app.exception_handler(RequestValidationError)
    async def _request_invalid(request: Request, exc: RequestValidationError):
        errors = exc.errors()
        for err in errors:
            if err.get("type") == "extra_forbidden":
                loc = ".".join(str(p) for p in err.get("loc", ())[1:])
                return _envelope(
                    400, "unknown_field", f"unknown field {loc!r}", detail={"field": loc}
                )
        if any(err.get("loc", (None,))[0] == "query" for err in errors):
            return _envelope(400, "invalid_parameter", _first_error_message(errors))
        if request.url.path == f"{API_PREFIX}/videos":
            return _envelope(400, "invalid_meta", _first_error_message(errors))
        return _envelope(400, "invalid_body", _first_error_message(errors))

    @app.exception_handler(StarletteHTTPException)
    async def _http_error(request: Request, exc: StarletteHTTPException):
        return _envelope(exc.status_code, "http_error", str(exc.detail))

    def _first_error_message(errors: list[dict]) -> str:
        if not errors:
            return "invalid request"
        err = errors[0]
        loc = ".".join(str(p) for p in err.get("loc", ()))
        return f"{loc}: {err.get('msg', 'invalid')}"

    # -- endpoints ----------------------------------------------------------

    @app.get("/healthz")
    def healthz():
        if not store.healthy():
            return _envelope(503, "store_unavailable", "session store is not usable")
        return PlainTextResponse("ok")

    @app.post(f"{API_PREFIX}/videos", status_code=201)
    def post_video(body: VideoMetaBody):
        meta = VideoMeta(
            video_id=body.video_id,
            title=body.title,
            duration_s=body.duration_s,
            source_url=body.source_url,
        )
        try:
            stored = store.upsert_video(meta)
        except ValueError as exc:
            raise ApiError(400, "invalid_meta", str(exc)) from None
        return _meta_doc(stored)

    @app.get(f"{API_PREFIX}/videos")
    def list_videos():
        return {"videos": [_meta_doc(m) for m in store.list_videos()]}

    @app.get(f"{API_PREFIX}/videos/{{video_id}}")
    def get_video(video_id: str):
        return _meta_doc(store.get_video(video_id))

    @app.post(f"{API_PREFIX}/videos/{{video_id}}/sessions", status_code=201)
    def post_session(video_id: str, body: SessionBody):
        store.get_video(video_id)  # 404 before body-shape errors
        events = _session_events(body)
        record = SessionRecord(
            session_id="",
            author=body.author,
            recorded_at=body.recorded_at or datetime.now(timezone.utc),
            video_id=video_id,
            events=events,
        )
        session_id = store.append_session(video_id, record)
        cache.invalidate(video_id)
        return {"session_id": session_id}

    @app.get(f"{API_PREFIX}/videos/{{video_id}}/heatmap")
    def get_heatmap(video_id: str, profile: str = "default"):
        config = _profile_or_400(profile)
        meta = store.get_video(video_id)
        heatmap = build_heatmap(store.list_sessions(video_id), meta, config)
        return {
            "video_id": heatmap.video_id,
            "duration_s": heatmap.duration_s,
            "cells": list(heatmap.cells),
        }

    @app.get(f"{API_PREFIX}/videos/{{video_id}}/index")
    def get_index(video_id: str, k: int = 3, min_distance_s: int = 30, profile: str = "default"):
        if k < 1:
            raise ApiError(400, "invalid_parameter", f"k must be >= 1, got {k}")
        if min_distance_s < 0:
            raise ApiError(
                400, "invalid_parameter", f"min_distance_s must be >= 0, got {min_distance_s}"
            )
        config = _profile_or_400(profile)
        meta = store.get_video(video_id)
        key = (video_id, profile, k, min_distance_s)
        points = cache.get(key)
        if points is None:
            heatmap = build_heatmap(store.list_sessions(video_id), meta, config)
            points = extract_index_points(heatmap, IndexRequest(k, min_distance_s))
            cache.put(key, points)
        return {"points": [{"t": p.t, "score": p.score, "rank": p.rank} for p in points]}

    # -- static assets (player UI at /, media files at /media) --------------

    if media_dir is not None and Path(media_dir).is_dir():
        app.mount("/media", StaticFiles(directory=media_dir), name="media")
    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
