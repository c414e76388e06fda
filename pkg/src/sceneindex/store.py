"""Durable video catalog and append-only per-video session logs.

Layout under the store root:

* ``catalog.json`` — array of video meta documents.
* ``sessions-<video_id>.jsonl`` — one session document per line, append-only;
  a line, once fully written, is never mutated.
* ``sessions-<video_id>.jsonl.quarantine`` — torn final lines (partial
  writes from a crash) moved aside during repair.

Appends are serialized per video behind a lock; reads do not block appends
and see a consistent prefix of fully written lines.
"""

from __future__ import annotations

import json
import logging
import os
import re
import threading
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path

from .errors import SceneIndexError
from .model import EventKind, InteractionEvent, SessionRecord, VideoMeta, validate_session

logger = logging.getLogger(__name__)

CATALOG_FILENAME = "catalog.json"
QUARANTINE_SUFFIX = ".quarantine"

# video_id becomes part of a filename, so it must stay path-safe.
_SAFE_VIDEO_ID = re.compile(r"[A-Za-z0-9._-]+")


class StoreError(SceneIndexError):
    """Base class for persistence errors."""


class UnknownVideo(StoreError):
    """The requested video is not in the catalog."""


class DurationChangeWithSessions(StoreError):
    """Changing a video's duration would invalidate heatmaps built from
    its stored sessions, so it is rejected once any session exists."""


class StorageFailure(StoreError):
    """The underlying files could not be read or written."""


def session_doc(record: SessionRecord, session_id: int) -> dict:
    """The on-disk document for one session line."""
    return {
        "session_id": session_id,
        "author": record.author,
        "recorded_at": record.recorded_at.isoformat(),
        "events": [[e.kind.abbrev, e.t] for e in record.events],
    }


def session_from_doc(doc: dict, video_id: str) -> SessionRecord:
    """Rebuild a SessionRecord from one session-line document."""
    return SessionRecord(
        session_id=str(doc["session_id"]),
        author=doc["author"],
        recorded_at=datetime.fromisoformat(doc["recorded_at"]),
        video_id=video_id,
        events=tuple(
            InteractionEvent(EventKind(abbrev), t) for abbrev, t in doc["events"]
        ),
    )


@dataclass
class _VideoState:
    lock: threading.Lock
    next_id: int | None = None  # None until the session file is first scanned


class SessionStore:
    """File-backed store; the only module holding shared mutable state.

    Thread-safe within one process. The interface is storage-agnostic
    (callers never see paths), so an embedded database could replace the
    files without touching callers.
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)
        try:
            self.root.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise StorageFailure(f"cannot create store root {self.root}: {exc}") from exc
        self._catalog_lock = threading.Lock()
        self._states: dict[str, _VideoState] = {}
        self._states_guard = threading.Lock()

    # -- paths ------------------------------------------------------------

    def _catalog_path(self) -> Path:
        return self.root / CATALOG_FILENAME

    def _sessions_path(self, video_id: str) -> Path:
        return self.root / f"sessions-{video_id}.jsonl"

    def healthy(self) -> bool:
        """True when the store root is present and usable."""
        return self.root.is_dir() and os.access(self.root, os.R_OK | os.W_OK)

    # -- catalog ----------------------------------------------------------

    def _read_catalog(self) -> dict[str, VideoMeta]:
        path = self._catalog_path()
        if not path.exists():
            return {}
        try:
            docs = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise StorageFailure(f"cannot read catalog {path}: {exc}") from exc
        catalog: dict[str, VideoMeta] = {}
        for doc in docs:
            meta = VideoMeta(
                video_id=doc["video_id"],
                title=doc["title"],
                duration_s=doc["duration_s"],
                source_url=doc["source_url"],
            )
            catalog[meta.video_id] = meta
        return catalog

    def _write_catalog(self, catalog: dict[str, VideoMeta]) -> None:
        docs = [
            {
                "video_id": m.video_id,
                "title": m.title,
                "duration_s": m.duration_s,
                "source_url": m.source_url,
            }
            for m in catalog.values()
        ]
        path = self._catalog_path()
        tmp = path.with_suffix(".json.tmp")
        try:
            tmp.write_text(json.dumps(docs, indent=2) + "\n", encoding="utf-8")
            os.replace(tmp, path)
        except OSError as exc:
            raise StorageFailure(f"cannot write catalog {path}: {exc}") from exc

    def upsert_video(self, meta: VideoMeta) -> VideoMeta:
        """Create or update a catalog entry; one entry per video_id.

        Raises:
            ValueError: video_id is empty or not filename-safe.
            DurationChangeWithSessions: duration differs and sessions exist.
        """
        if not _SAFE_VIDEO_ID.fullmatch(meta.video_id):
            raise ValueError(
                f"video_id must match {_SAFE_VIDEO_ID.pattern!r}, got {meta.video_id!r}"
            )
        with self._catalog_lock:
            catalog = self._read_catalog()
            existing = catalog.get(meta.video_id)
            if (
                existing is not None
                and existing.duration_s != meta.duration_s
                and self.session_count(meta.video_id) > 0
            ):
                raise DurationChangeWithSessions(
                    f"video {meta.video_id!r} has stored sessions; duration cannot "
                    f"change from {existing.duration_s}s to {meta.duration_s}s"
                )
            catalog[meta.video_id] = meta
            self._write_catalog(catalog)
        return meta

    def get_video(self, video_id: str) -> VideoMeta:
        meta = self._read_catalog().get(video_id)
        if meta is None:
            raise UnknownVideo(f"video {video_id!r} is not in the catalog")
        return meta

    def list_videos(self) -> list[VideoMeta]:
        return list(self._read_catalog().values())

    # -- sessions ---------------------------------------------------------

    def _state(self, video_id: str) -> _VideoState:
        with self._states_guard:
            state = self._states.get(video_id)
            if state is None:
                state = _VideoState(lock=threading.Lock())
                self._states[video_id] = state
            return state

    def _repair_torn_tail(self, video_id: str) -> None:
        """Move a torn final line (no trailing newline) to the quarantine
        sidecar and truncate it off the log. Runs under the video lock."""
        path = self._sessions_path(video_id)
        if not path.exists():
            return
        try:
            data = path.read_bytes()
        except OSError as exc:
            raise StorageFailure(f"cannot read {path}: {exc}") from exc
        if not data or data.endswith(b"\n"):
            return
        cut = data.rfind(b"\n") + 1  # 0 when the whole file is one torn line
        fragment = data[cut:]
        quarantine = Path(str(path) + QUARANTINE_SUFFIX)
        try:
            with open(quarantine, "ab") as side:
                side.write(fragment + b"\n")
            with open(path, "r+b") as fh:
                fh.truncate(cut)
        except OSError as exc:
            raise StorageFailure(f"cannot quarantine torn line in {path}: {exc}") from exc
        logger.warning(
            "quarantined torn final line (%d bytes) from %s to %s",
            len(fragment),
            path,
            quarantine,
        )

    def _ensure_loaded(self, video_id: str) -> _VideoState:
        state = self._state(video_id)
        with state.lock:
            if state.next_id is None:
                self._repair_torn_tail(video_id)
                last = 0
                for _, doc in self._iter_docs(video_id):
                    last = max(last, int(doc["session_id"]))
                state.next_id = last + 1
        return state

    def _iter_docs(self, video_id: str):
        """Yield (line_number, doc) for every fully written session line.

        A trailing line without a newline is an append still in flight from
        another thread and is skipped; an undecodable interior line means
        real corruption and raises StorageFailure.
        """
        path = self._sessions_path(video_id)
        if not path.exists():
            return
        try:
            data = path.read_bytes()
        except OSError as exc:
            raise StorageFailure(f"cannot read {path}: {exc}") from exc
        if data.endswith(b"\n"):
            complete = data
        else:
            complete = data[: data.rfind(b"\n") + 1]
        for n, line in enumerate(complete.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                yield n, json.loads(line)
            except json.JSONDecodeError as exc:
                raise StorageFailure(f"{path} line {n} is corrupt: {exc}") from exc

    def append_session(self, video_id: str, record: SessionRecord) -> int:
        """Validate and durably append one session; returns the assigned id.

        The record's own session_id is ignored; ids are store-assigned,
        monotonically increasing per video. The line is flushed to disk
        before the call returns. Concurrent appends all persist.
        """
        meta = self.get_video(video_id)
        validate_session(record, meta)
        state = self._ensure_loaded(video_id)
        with state.lock:
            assert state.next_id is not None
            session_id = state.next_id
            line = json.dumps(session_doc(record, session_id)) + "\n"
            path = self._sessions_path(video_id)
            try:
                with open(path, "ab") as fh:
                    fh.write(line.encode("utf-8"))
                    fh.flush()
                    os.fsync(fh.fileno())
            except OSError as exc:
                raise StorageFailure(f"cannot append to {path}: {exc}") from exc
            state.next_id = session_id + 1
        return session_id

    def list_sessions(self, video_id: str) -> list[SessionRecord]:
        """All stored sessions for a video, in append order."""
        self.get_video(video_id)
        self._ensure_loaded(video_id)
        return [session_from_doc(doc, video_id) for _, doc in self._iter_docs(video_id)]

    def session_count(self, video_id: str) -> int:
        """Number of fully written sessions; does not require catalog entry."""
        return sum(1 for _ in self._iter_docs(video_id))
