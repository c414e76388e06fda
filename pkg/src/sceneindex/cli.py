"""Operator command line: manage videos, ingest logs, export, simulate, serve.

Machine-readable output goes to stdout, diagnostics to stderr. Exit codes:
0 success, 1 operational error, 2 usage error.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from pathlib import Path

import click

from .errors import SceneIndexError
from .heatmap import PROFILES, build_heatmap, heatmap_to_csv
from .indexer import IndexRequest, extract_index_points, index_points_to_csv
from .logfmt import import_legacy_table
from .model import VideoMeta
from .simulator import InvalidScenario, Scenario, simulate_sessions
from .store import SessionStore, session_doc


@dataclass
class CliConfig:
    store_dir: str
    fmt: str


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _meta_doc(meta: VideoMeta) -> dict:
    return {
        "video_id": meta.video_id,
        "title": meta.title,
        "duration_s": meta.duration_s,
        "source_url": meta.source_url,
    }


def _profile(name: str):
    config = PROFILES.get(name)
    if config is None:
        _fail(f"unknown profile {name!r} (known: {', '.join(sorted(PROFILES))})")
    return config


@click.group()
@click.option(
    "--store",
    "store_dir",
    envvar="SCENEINDEX_STORE",
    default="./data",
    show_default=True,
    help="Store directory (env: SCENEINDEX_STORE).",
)
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["json", "csv"]),
    default="json",
    show_default=True,
    help="Output format for index/heatmap.",
)
@click.pass_context
def main(ctx: click.Context, store_dir: str, fmt: str) -> None:
    """Index videos by what viewers replay."""
    ctx.obj = CliConfig(store_dir=store_dir, fmt=fmt)


@main.group()
def video() -> None:
    """Manage the video catalog."""


@video.command("add")
@click.option("--id", "video_id", required=True)
@click.option("--title", default="")
@click.option("--duration", "duration_s", type=int, required=True, help="Duration in seconds.")
@click.option("--source", "source_url", default="", help="Locator of the playable media.")
@click.pass_obj
def video_add(cfg: CliConfig, video_id: str, title: str, duration_s: int, source_url: str) -> None:
    """Add or update one video in the catalog."""
    try:
        meta = SessionStore(cfg.store_dir).upsert_video(
            VideoMeta(video_id=video_id, title=title, duration_s=duration_s, source_url=source_url)
        )
    except (SceneIndexError, ValueError) as exc:
        _fail(str(exc))
    click.echo(json.dumps(_meta_doc(meta)))


@main.command()
@click.option("--video", "video_id", required=True)
@click.option(
    "--legacy",
    "legacy_path",
    type=click.Path(exists=True, dir_okay=False),
    required=True,
    help="Delimited dump with columns id, author, content, date.",
)
@click.option("--strict", is_flag=True, help="Exit 1 if any row is rejected.")
@click.pass_obj
def ingest(cfg: CliConfig, video_id: str, legacy_path: str, strict: bool) -> None:
    """Import a legacy interaction dump into a video's session log."""
    store = SessionStore(cfg.store_dir)
    try:
        meta = store.get_video(video_id)
        result = import_legacy_table(
            Path(legacy_path).read_text(encoding="utf-8"), video_id, meta.duration_s
        )
        for record in result.records:
            store.append_session(video_id, record)
    except SceneIndexError as exc:
        _fail(str(exc))
    for reject in result.rejected:
        click.echo(f"rejected line {reject.line_number}: {reject.reason}", err=True)
    click.echo(f"imported {len(result.records)}, rejected {len(result.rejected)}")
    if strict and result.rejected:
        sys.exit(1)


@main.command("index")
@click.option("--video", "video_id", required=True)
@click.option("--k", type=int, default=3, show_default=True)
@click.option("--min-distance", "min_distance_s", type=int, default=30, show_default=True)
@click.option("--profile", default="default", show_default=True)
@click.pass_obj
def index_cmd(cfg: CliConfig, video_id: str, k: int, min_distance_s: int, profile: str) -> None:
    """Print the top-k most-replayed index points."""
    config = _profile(profile)
    store = SessionStore(cfg.store_dir)
    try:
        meta = store.get_video(video_id)
        heatmap = build_heatmap(store.list_sessions(video_id), meta, config)
        points = extract_index_points(heatmap, IndexRequest(k, min_distance_s))
    except (SceneIndexError, ValueError) as exc:
        _fail(str(exc))
    if cfg.fmt == "csv":
        click.echo(index_points_to_csv(points), nl=False)
    else:
        click.echo(
            json.dumps({"points": [{"t": p.t, "score": p.score, "rank": p.rank} for p in points]})
        )


@main.command("heatmap")
@click.option("--video", "video_id", required=True)
@click.option("--profile", default="default", show_default=True)
@click.pass_obj
def heatmap_cmd(cfg: CliConfig, video_id: str, profile: str) -> None:
    """Print the per-second score heatmap."""
    config = _profile(profile)
    store = SessionStore(cfg.store_dir)
    try:
        meta = store.get_video(video_id)
        heatmap = build_heatmap(store.list_sessions(video_id), meta, config)
    except (SceneIndexError, ValueError) as exc:
        _fail(str(exc))
    if cfg.fmt == "csv":
        click.echo(heatmap_to_csv(heatmap), nl=False)
    else:
        click.echo(
            json.dumps(
                {
                    "video_id": heatmap.video_id,
                    "duration_s": heatmap.duration_s,
                    "cells": list(heatmap.cells),
                }
            )
        )


@main.command()
@click.option("--duration", "duration_s", type=int, required=True)
@click.option("--hotspots", default="", help="Comma-separated ground-truth seconds.")
@click.option("--viewers", type=int, required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--p-replay", type=float, default=0.7, show_default=True)
@click.option("--jitter", "jitter_s", type=float, default=5.0, show_default=True)
@click.option("--noise-rate", "noise_rate_per_min", type=float, default=0.2, show_default=True)
@click.option("--chatter", is_flag=True, help="Add unscored play/pause/forward presses.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), help="Write JSONL here.")
@click.option("--ingest-into", "target_video", help="Append sessions to this stored video.")
@click.pass_obj
def simulate(
    cfg: CliConfig,
    duration_s: int,
    hotspots: str,
    viewers: int,
    seed: int,
    p_replay: float,
    jitter_s: float,
    noise_rate_per_min: float,
    chatter: bool,
    out_path: str | None,
    target_video: str | None,
) -> None:
    """Generate synthetic viewer sessions (JSONL, store-compatible)."""
    try:
        spots = tuple(int(h) for h in hotspots.split(",") if h.strip())
    except ValueError:
        raise click.BadParameter("hotspots must be comma-separated integers", param_hint="--hotspots")
    try:
        scn = Scenario(
            duration_s=duration_s,
            hotspots=spots,
            viewers=viewers,
            p_replay=p_replay,
            jitter_s=jitter_s,
            noise_rate_per_min=noise_rate_per_min,
            seed=seed,
            chatter=chatter,
        )
    except InvalidScenario as exc:
        _fail(str(exc))
    records = simulate_sessions(scn, video_id=target_video or "sim")
    if target_video is not None:
        store = SessionStore(cfg.store_dir)
        try:
            for record in records:
                store.append_session(target_video, record)
        except SceneIndexError as exc:
            _fail(str(exc))
        click.echo(f"ingested {len(records)} sessions into {target_video}")
        return
    lines = "".join(
        json.dumps(session_doc(record, int(record.session_id))) + "\n" for record in records
    )
    if out_path is not None:
        Path(out_path).write_text(lines, encoding="utf-8")
        click.echo(f"wrote {len(records)} sessions to {out_path}", err=True)
    else:
        click.echo(lines, nl=False)


@main.command()
@click.option("--addr", default="127.0.0.1:8080", show_default=True, help="host:port to listen on.")
@click.option("--ui-dir", type=click.Path(file_okay=False), default="frontend/dist", show_default=True)
@click.option("--media-dir", type=click.Path(file_okay=False), default="media", show_default=True)
@click.pass_obj
def serve(cfg: CliConfig, addr: str, ui_dir: str, media_dir: str) -> None:
    """Run the HTTP service until interrupted."""
    import uvicorn

    from .service import create_app

    host, _, port_text = addr.rpartition(":")
    if not host or not port_text.isdigit():
        _fail(f"invalid --addr {addr!r}, expected host:port")
    app = create_app(SessionStore(cfg.store_dir), ui_dir=ui_dir, media_dir=media_dir)
    try:
        uvicorn.run(app, host=host, port=int(port_text), log_level="info")
    except OSError as exc:
        _fail(f"cannot listen on {addr}: {exc}")
    except SystemExit as exc:
        # uvicorn exits 3 on startup failure (e.g. busy port); normalize to 1
        if exc.code not in (0, None):
            _fail(f"cannot start server on {addr} (see log above)")


if __name__ == "__main__":
    main()
