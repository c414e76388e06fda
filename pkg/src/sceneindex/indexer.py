"""Top-k index point extraction under a minimum-distance constraint.

Candidates are all cells with positive score, ordered by score descending
with ties broken toward the earlier time. A greedy scan accepts a candidate
iff it lies at least the minimum distance from every already-accepted cell,
stopping after top_k acceptances. Deterministic; may return fewer than
top_k points.
"""

from __future__ import annotations

from dataclasses import dataclass

from .heatmap import ScoreHeatmap, format_score


@dataclass(frozen=True)
class IndexRequest:
    """How many index points to extract and how far apart they must be."""

    top_k: int = 3
    min_distance_s: int = 30

    def __post_init__(self) -> None:
        if self.top_k < 1:
            raise ValueError(f"top_k must be >= 1, got {self.top_k}")
        if self.min_distance_s < 0:
            raise ValueError(f"min_distance_s must be >= 0, got {self.min_distance_s}")


@dataclass(frozen=True)
class IndexPoint:
    """A selected peak: the anchor time of one proposed thumbnail."""

    t: int
    score: float
    rank: int


def extract_index_points(
    heatmap: ScoreHeatmap, req: IndexRequest = IndexRequest()
) -> list[IndexPoint]:
    """Extract up to ``req.top_k`` index points from a heatmap.

    Returned points have positive scores, ranks 1..n in acceptance order,
    non-increasing scores, and pairwise distance >= req.min_distance_s.
    An all-zero heatmap yields an empty list.
    """
    cells = heatmap.cells
    candidates = sorted(
        (i for i in range(len(cells)) if cells[i] > 0),
        key=lambda i: (-cells[i], i),
    )
    accepted: list[int] = []
    for i in candidates:
        if all(abs(i - j) >= req.min_distance_s for j in accepted):
            accepted.append(i)
            if len(accepted) == req.top_k:
                break
    return [
        IndexPoint(t=i, score=cells[i], rank=rank)
        for rank, i in enumerate(accepted, start=1)
    ]


def index_points_to_csv(points: list[IndexPoint]) -> str:
    """CSV export: one ``rank,t_s,score`` row per point, no header.

    Headerless so an empty extraction writes empty output.
    """
    return "".join(f"{p.rank},{p.t},{format_score(p.score)}\n" for p in points)
