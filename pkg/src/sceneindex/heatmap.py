"""Per-second score heatmaps accumulated from session events.

A video of duration k seconds gets an array of k cells, cell i covering
video time [i, i+1). A press of a scored button at time t credits the
whole-second cells [floor(t) - window, floor(t)) with the rule's weight;
the range is truncated at the start of the video and never touches cells
outside [0, k). Under the default profile only replay presses score, with
a 30-second window and weight +1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import SceneIndexError
from .model import EventKind, InteractionEvent, SessionRecord, VideoMeta

#: Cells are fixed at one second of video each.
CELL_WIDTH_S = 1


class ShapeMismatch(SceneIndexError):
    """Heatmaps for different videos or durations cannot be merged."""


class SessionVideoMismatch(SceneIndexError):
    """A session belongs to a different video than the heatmap under build."""


@dataclass(frozen=True)
class ScoringRule:
    """Credit ``weight`` to the ``window_s`` whole seconds before each press of ``kind``."""

    kind: EventKind
    window_s: int
    weight: float

    def __post_init__(self) -> None:
        if self.window_s < 0:
            raise ValueError(f"window_s must be >= 0, got {self.window_s}")
        if not math.isfinite(self.weight):
            raise ValueError(f"weight must be finite, got {self.weight!r}")


@dataclass(frozen=True)
class ScoringConfig:
    """A set of scoring rules, at most one per event kind.

    Kinds without a rule contribute nothing. Weights are reals so extended
    profiles (e.g. pause credit, negative skip-forward credit) fit without
    changing the engine.
    """

    rules: tuple[ScoringRule, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "rules", tuple(self.rules))
        kinds = [rule.kind for rule in self.rules]
        if len(set(kinds)) != len(kinds):
            raise ValueError("at most one scoring rule per event kind")

    def rule_for(self, kind: EventKind) -> ScoringRule | None:
        for rule in self.rules:
            if rule.kind == kind:
                return rule
        return None


#: Replay-only scoring: 30-second window, weight +1 per press.
DEFAULT_PROFILE = ScoringConfig((ScoringRule(EventKind.GO_BACK, 30, 1.0),))

#: Experimental: replay credit plus +1 to the second preceding each pause.
EXTENDED_PROFILE = ScoringConfig(
    (
        ScoringRule(EventKind.GO_BACK, 30, 1.0),
        ScoringRule(EventKind.PAUSE, 1, 1.0),
    )
)

PROFILES: dict[str, ScoringConfig] = {
    "default": DEFAULT_PROFILE,
    "extended": EXTENDED_PROFILE,
}


@dataclass(frozen=True)
class ScoreHeatmap:
    """The per-second score array for one video; immutable."""

    video_id: str
    duration_s: int
    cells: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "cells", tuple(self.cells))
        if len(self.cells) != self.duration_s:
            raise ValueError(
                f"cells length {len(self.cells)} != duration_s {self.duration_s}"
            )


def zero_heatmap(video_id: str, duration_s: int) -> ScoreHeatmap:
    """The initial all-zero heatmap for a video of ``duration_s`` seconds."""
    return ScoreHeatmap(video_id=video_id, duration_s=duration_s, cells=(0.0,) * duration_s)


def _credit_span(t: float, window_s: int, k: int) -> tuple[int, int]:
    """Half-open cell range [lo, hi) credited by a press at time t."""
    press_cell = math.floor(t)
    lo = max(0, press_cell - window_s)
    hi = min(press_cell, k)
    return lo, hi


def _apply_into(cells: list[float], event: InteractionEvent, config: ScoringConfig) -> None:
    rule = config.rule_for(event.kind)
    if rule is None:
        return
    lo, hi = _credit_span(event.t, rule.window_s, len(cells))
    for i in range(lo, hi):
        cells[i] += rule.weight


def apply_event(
    heatmap: ScoreHeatmap, event: InteractionEvent, config: ScoringConfig = DEFAULT_PROFILE
) -> ScoreHeatmap:
    """Score one event into a heatmap; pure, returns a new heatmap.

    Events whose kind has no rule in ``config`` leave the heatmap unchanged.
    """
    if config.rule_for(event.kind) is None:
        return heatmap
    cells = list(heatmap.cells)
    _apply_into(cells, event, config)
    return ScoreHeatmap(heatmap.video_id, heatmap.duration_s, tuple(cells))


def build_heatmap(
    sessions: list[SessionRecord],
    meta: VideoMeta,
    config: ScoringConfig = DEFAULT_PROFILE,
) -> ScoreHeatmap:
    """Accumulate every event of every session into one heatmap.

    Addition commutes, so neither session order nor event order affects the
    result, and heatmaps built from disjoint session batches merge into the
    same array (callers may parallelize per batch and merge).

    Raises:
        SessionVideoMismatch: a session's video_id differs from meta's.
    """
    cells = [0.0] * meta.duration_s
    for session in sessions:
        if session.video_id != meta.video_id:
            raise SessionVideoMismatch(
                f"session {session.session_id!r} belongs to video "
                f"{session.video_id!r}, not {meta.video_id!r}"
            )
        for event in session.events:
            _apply_into(cells, event, config)
    return ScoreHeatmap(meta.video_id, meta.duration_s, tuple(cells))


def merge_heatmaps(a: ScoreHeatmap, b: ScoreHeatmap) -> ScoreHeatmap:
    """Cell-wise sum of two heatmaps for the same video."""
    if a.video_id != b.video_id or a.duration_s != b.duration_s:
        raise ShapeMismatch(
            f"cannot merge ({a.video_id!r}, {a.duration_s}s) "
            f"with ({b.video_id!r}, {b.duration_s}s)"
        )
    return ScoreHeatmap(
        a.video_id,
        a.duration_s,
        tuple(x + y for x, y in zip(a.cells, b.cells)),
    )


def format_score(score: float) -> str:
    """Render whole scores without a fractional part (CSV/CLI output)."""
    return str(int(score)) if score == int(score) else repr(score)


def heatmap_to_csv(heatmap: ScoreHeatmap) -> str:
    """CSV export: header ``cell,start_s,score`` plus one row per cell."""
    lines = ["cell,start_s,score"]
    for i, score in enumerate(heatmap.cells):
        lines.append(f"{i},{i * CELL_WIDTH_S},{format_score(score)}")
    return "\n".join(lines) + "\n"
