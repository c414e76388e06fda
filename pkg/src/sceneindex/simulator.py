"""Synthetic viewers that replay planted hotspots.

Generates session logs with known ground truth so the whole pipeline
(parse, score, extract) can be tested for hotspot recovery. Each viewer
plays from the start, replays each hotspot with some probability after a
small uniform delay, fires occasional random replay presses as noise, and
exits at the end of the video.

Randomness is pinned to Python's Mersenne Twister seeded from a string
(SHA-512 based), which is stable across runs and platforms; every viewer
gets an independent substream derived from (seed, viewer index), so
generation is order-independent and parallelizable per viewer.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass
from datetime import datetime, timedelta

from .errors import SceneIndexError
from .model import EventKind, InteractionEvent, SessionRecord

logger = logging.getLogger(__name__)

#: Fixed wall-clock base so generated output is byte-reproducible.
SIM_EPOCH = datetime(2020, 1, 1, 0, 0, 0)

#: Hotspots closer than this get a warning: the default index extraction
#: (min distance 30 s) cannot cleanly separate peaks under twice that.
RECOMMENDED_HOTSPOT_GAP_S = 60


class InvalidScenario(SceneIndexError):
    """Scenario parameters are out of range."""


@dataclass(frozen=True)
class Scenario:
    """Ground-truth description of a synthetic audience."""

    duration_s: int
    hotspots: tuple[int, ...]
    viewers: int
    p_replay: float = 0.7
    jitter_s: float = 5.0
    noise_rate_per_min: float = 0.2
    seed: int = 0
    chatter: bool = False  # add unscored play/pause/forward presses

    def __post_init__(self) -> None:
        object.__setattr__(self, "hotspots", tuple(self.hotspots))
        if self.duration_s < 1:
            raise InvalidScenario(f"duration_s must be >= 1, got {self.duration_s}")
        if self.viewers < 0:
            raise InvalidScenario(f"viewers must be >= 0, got {self.viewers}")
        if not 0.0 <= self.p_replay <= 1.0:
            raise InvalidScenario(f"p_replay must be in [0, 1], got {self.p_replay}")
        if self.jitter_s < 0:
            raise InvalidScenario(f"jitter_s must be >= 0, got {self.jitter_s}")
        if self.noise_rate_per_min < 0:
            raise InvalidScenario(
                f"noise_rate_per_min must be >= 0, got {self.noise_rate_per_min}"
            )
        for h in self.hotspots:
            if not 30 <= h < self.duration_s:
                raise InvalidScenario(
                    f"hotspot {h} must lie in [30, duration_s={self.duration_s})"
                )
        spots = sorted(self.hotspots)
        for a, b in zip(spots, spots[1:]):
            if b - a < RECOMMENDED_HOTSPOT_GAP_S:
                logger.warning(
                    "hotspots %d and %d are %ds apart; < %ds makes recovered "
                    "peaks hard to separate",
                    a,
                    b,
                    b - a,
                    RECOMMENDED_HOTSPOT_GAP_S,
                )


def _viewer_rng(seed: int, viewer_index: int) -> random.Random:
    # String seeding hashes through SHA-512: stable everywhere.
    return random.Random(f"{seed}:{viewer_index}")


def _poisson(rng: random.Random, lam: float) -> int:
    """Knuth's product method; lam stays small here."""
    if lam <= 0:
        return 0
    limit = math.exp(-lam)
    count = 0
    product = rng.random()
    while product > limit:
        count += 1
        product *= rng.random()
    return count


def _viewer_events(scn: Scenario, rng: random.Random) -> list[InteractionEvent]:
    events = [InteractionEvent(EventKind.PLAY, 0.0)]
    for h in scn.hotspots:
        if rng.random() < scn.p_replay:
            # Press can jitter past the end for late hotspots; keep it on
            # the timeline so the session always validates.
            t = min(h + rng.uniform(0.0, scn.jitter_s), float(scn.duration_s))
            events.append(InteractionEvent(EventKind.GO_BACK, t))
    n_noise = _poisson(rng, scn.noise_rate_per_min * scn.duration_s / 60.0)
    for _ in range(n_noise):
        events.append(InteractionEvent(EventKind.GO_BACK, rng.uniform(0.0, scn.duration_s)))
    if scn.chatter:
        for _ in range(_poisson(rng, 2.0)):
            kind = rng.choice((EventKind.PLAY, EventKind.PAUSE, EventKind.FORWARD))
            events.append(InteractionEvent(kind, rng.uniform(0.0, scn.duration_s)))
    events.sort(key=lambda e: e.t)
    events.append(InteractionEvent(EventKind.EXIT, float(scn.duration_s)))
    return events


def simulate_sessions(scn: Scenario, video_id: str = "sim") -> list[SessionRecord]:
    """Generate one session per viewer; deterministic given the seed."""
    records = []
    for v in range(scn.viewers):
        rng = _viewer_rng(scn.seed, v)
        records.append(
            SessionRecord(
                session_id=str(v + 1),
                author=f"viewer-{v + 1:04d}",
                recorded_at=SIM_EPOCH + timedelta(minutes=v),
                video_id=video_id,
                events=tuple(_viewer_events(scn, rng)),
            )
        )
    return records
