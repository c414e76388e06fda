"""Domain types shared by every module, plus session validation.

Events carry the video-timeline second at which a button was pressed.
Times are not monotonic within a session: the replay and rewind buttons
jump backwards by design.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import datetime
from enum import Enum

from .errors import SceneIndexError

#: Slack past the end of the video tolerated for end-of-stream rounding.
END_SLACK_S = 1.0


class EventKind(str, Enum):
    """Player buttons; the enum value is the wire/log abbreviation."""

    PLAY = "play"
    PAUSE = "pause"
    STOP = "stop"
    REWIND = "rew"
    FORWARD = "fast"
    GO_BACK = "replay"
    EXIT = "exit"

    @property
    def abbrev(self) -> str:
        return self.value

    @classmethod
    def from_abbrev(cls, abbrev: str) -> EventKind:
        try:
            return cls(abbrev)
        except ValueError:
            raise UnknownKind(f"unknown event kind abbreviation {abbrev!r}") from None


class ValidationError(SceneIndexError):
    """A session record failed ingest validation."""


class EventOutOfRange(ValidationError):
    """An event time exceeds the video duration plus slack.

    Signals a corrupted log or a log attached to the wrong video; times are
    rejected rather than clamped so they cannot silently skew heatmaps.
    """


class UnknownKind(ValidationError):
    """An event kind is outside the closed button set."""


class EmptyAuthor(ValidationError):
    """The session has no author name."""


@dataclass(frozen=True)
class InteractionEvent:
    """One button press: what was pressed and when on the video timeline.

    ``t`` is seconds, non-negative, with sub-second precision preserved.
    """

    kind: EventKind
    t: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "t", float(self.t))
        if not math.isfinite(self.t) or self.t < 0:
            raise ValueError(f"event time must be finite and >= 0, got {self.t!r}")


@dataclass(frozen=True)
class SessionRecord:
    """One viewer's complete logged session for one video.

    ``events`` preserve press order. All fields are immutable after
    construction, so records are safe to share between concurrent tasks.
    """

    session_id: str
    author: str
    recorded_at: datetime
    video_id: str
    events: tuple[InteractionEvent, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "events", tuple(self.events))


@dataclass(frozen=True)
class VideoMeta:
    """Catalog entry for one playable video.

    ``duration_s`` in whole seconds is the heatmap length.
    """

    video_id: str
    title: str
    duration_s: int
    source_url: str

    def __post_init__(self) -> None:
        if self.duration_s < 1:
            raise ValueError(f"duration_s must be >= 1, got {self.duration_s}")


def validate_session(record: SessionRecord, meta: VideoMeta) -> SessionRecord:
    """Check a session against its video before it is stored or scored.

    Acceptance depends only on the events, the author, and the video
    duration. Returns the record unchanged when it passes, so validating
    an accepted record again always accepts it.

    Raises:
        EmptyAuthor: author is empty or whitespace.
        UnknownKind: an event kind is not a member of EventKind.
        EventOutOfRange: an event time exceeds duration_s + END_SLACK_S.
    """
    if not record.author.strip():
        raise EmptyAuthor("session author must be non-empty")
    bound = meta.duration_s + END_SLACK_S
    for i, event in enumerate(record.events):
        if not isinstance(event.kind, EventKind):
            raise UnknownKind(f"event {i}: {event.kind!r} is not a known kind")
        if event.t > bound:
            raise EventOutOfRange(
                f"event {i}: t={event.t} exceeds video duration "
                f"{meta.duration_s}s (+{END_SLACK_S}s slack)"
            )
    return record
