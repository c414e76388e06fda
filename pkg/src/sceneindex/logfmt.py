"""Compact interaction-log text: parser, serializer, legacy table import.

Grammar (bit-exact): zero or more tokens separated by single spaces, each
token ``<abbrev>:<seconds>`` where abbrev is one of play, pause, stop, rew,
fast, replay, exit and seconds is a non-negative decimal with an optional
fractional part. Example::

    play:0.08 fast:9.567 replay:130.728
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from datetime import datetime
from decimal import Decimal

from .errors import SceneIndexError
from .model import (
    EventKind,
    InteractionEvent,
    SessionRecord,
    ValidationError,
    VideoMeta,
    validate_session,
)

_ABBREVS = {kind.abbrev: kind for kind in EventKind}
_SECONDS_RE = re.compile(r"\d+(?:\.\d+)?")

LEGACY_COLUMNS = ("id", "author", "content", "date")
_LEGACY_DATE_FORMATS = ("%Y-%m-%d %H:%M:%S.%f", "%Y-%m-%d %H:%M:%S")


class LogParseError(SceneIndexError):
    """Compact log text failed to parse; carries the offending token index."""

    def __init__(self, message: str, token_index: int):
        super().__init__(message)
        self.token_index = token_index


class UnknownAbbrev(LogParseError):
    """Token head is not in the closed abbreviation set."""


class MalformedToken(LogParseError):
    """Token is missing its colon or its seconds part is not a valid value."""


class UnrecognizableLayout(SceneIndexError):
    """A legacy dump has no recognizable id/author/content/date columns."""


def parse_log_text(text: str) -> list[InteractionEvent]:
    """Parse compact log text into events in textual order.

    Total over arbitrary input: every string either yields events or raises
    a positioned LogParseError. Exact numeric values are preserved.
    """
    if text == "":
        return []
    events: list[InteractionEvent] = []
    for i, token in enumerate(text.split(" ")):
        head, colon, tail = token.partition(":")
        if not colon:
            raise MalformedToken(f"token {i}: missing ':' in {token!r}", i)
        kind = _ABBREVS.get(head)
        if kind is None:
            raise UnknownAbbrev(f"token {i}: unknown abbreviation {head!r}", i)
        if not _SECONDS_RE.fullmatch(tail):
            raise MalformedToken(f"token {i}: invalid seconds value {tail!r}", i)
        events.append(InteractionEvent(kind, float(tail)))
    return events


def format_seconds(t: float) -> str:
    """Canonical rendering: shortest decimal that parses back to ``t``.

    Whole seconds render without a fractional part ("rew:0", not "rew:0.0")
    and scientific notation is expanded so output always re-parses.
    """
    if t == int(t):
        return str(int(t))
    s = repr(t)
    if "e" in s or "E" in s:
        s = format(Decimal(s), "f")
    return s


def serialize_log_text(events: list[InteractionEvent] | tuple[InteractionEvent, ...]) -> str:
    """Render events as compact log text; inverse of parse_log_text."""
    return " ".join(f"{e.kind.abbrev}:{format_seconds(e.t)}" for e in events)


@dataclass(frozen=True)
class LegacyRow:
    """One raw row of a legacy datastore dump."""

    id: str
    author: str
    content: str
    date: str


@dataclass(frozen=True)
class RejectedRow:
    """A legacy row that could not be imported, with the reason why."""

    line_number: int
    row: LegacyRow | None
    reason: str


@dataclass
class ImportResult:
    """Outcome of a legacy import; records + rejected covers every data row."""

    records: list[SessionRecord] = field(default_factory=list)
    rejected: list[RejectedRow] = field(default_factory=list)


def parse_legacy_date(text: str) -> datetime:
    """Parse "YYYY-MM-DD HH:MM:SS[.ffffff]" and nothing looser."""
    for fmt in _LEGACY_DATE_FORMATS:
        try:
            return datetime.strptime(text, fmt)
        except ValueError:
            continue
    raise ValueError(f"invalid legacy date {text!r}")


def _detect_delimiter(text: str) -> str:
    for line in text.splitlines():
        if line.strip():
            return "\t" if "\t" in line else ","
    return ","


def _is_header(cells: list[str]) -> bool:
    lowered = [c.strip().lower() for c in cells]
    # Dumps label the first column either "id" or "id/name".
    return lowered[1:] == list(LEGACY_COLUMNS[1:]) and lowered[0] in ("id", "id/name")


def import_legacy_table(text: str, video_id: str, duration_s: int) -> ImportResult:
    """Import a delimited legacy dump (columns id, author, content, date).

    Tab- or comma-delimited, auto-detected; an optional header row is
    recognized and skipped. Each good row becomes a validated SessionRecord
    bound to ``video_id``; bad rows are reported with their line number and
    reason, never silently dropped.

    Raises:
        UnrecognizableLayout: no row splits into the four expected columns.
    """
    meta = VideoMeta(video_id=video_id, title="", duration_s=duration_s, source_url="")
    delimiter = _detect_delimiter(text)
    result = ImportResult()
    saw_four_columns = False
    saw_data = False
    at_first_row = True

    reader = csv.reader(io.StringIO(text), delimiter=delimiter)
    for line_number, cells in enumerate(reader, start=1):
        if not cells or all(c.strip() == "" for c in cells):
            continue
        if len(cells) != 4:
            saw_data = True
            at_first_row = False
            result.rejected.append(
                RejectedRow(line_number, None, f"expected 4 columns, got {len(cells)}")
            )
            continue
        saw_four_columns = True
        if at_first_row and _is_header(cells):
            at_first_row = False
            continue
        at_first_row = False
        saw_data = True
        row = LegacyRow(
            id=cells[0].strip(),
            author=cells[1].strip(),
            content=cells[2],
            date=cells[3].strip(),
        )
        try:
            recorded_at = parse_legacy_date(row.date)
        except ValueError as exc:
            result.rejected.append(RejectedRow(line_number, row, str(exc)))
            continue
        try:
            events = parse_log_text(row.content)
        except LogParseError as exc:
            result.rejected.append(RejectedRow(line_number, row, f"content: {exc}"))
            continue
        record = SessionRecord(
            session_id=row.id,
            author=row.author,
            recorded_at=recorded_at,
            video_id=video_id,
            events=tuple(events),
        )
        try:
            validate_session(record, meta)
        except ValidationError as exc:
            result.rejected.append(RejectedRow(line_number, row, str(exc)))
            continue
        result.records.append(record)

    if saw_data and not saw_four_columns:
        raise UnrecognizableLayout(
            f"no row has the 4 expected columns {LEGACY_COLUMNS} "
            f"(detected delimiter {delimiter!r})"
        )
    return result
