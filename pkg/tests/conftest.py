"""Shared fixtures: reference log rows and ready-made stores/clients."""

from __future__ import annotations

import pytest

from sceneindex.model import VideoMeta
from sceneindex.store import SessionStore

# The two reference rows of the legacy interaction table.
ROW1_CONTENT = (
    "play:0.08 fast:9.567 play:44.284 fast:49.11 play:97.963 fast:109.92 "
    "play:121.012 replay:130.728 replay:106.255"
)
ROW2_CONTENT = "play:0.08 fast:37.384 play:48.112 pause:49.459 stop:49.459 rew:0 pause:0 play:0"

LEGACY_HEADER = "ID/Name\tauthor\tcontent\tdate"
ROW1_TSV = f"id=1\tvideoskiptest\t{ROW1_CONTENT}\t2010-04-28 15:27:00.476000"
ROW2_TSV = f"id=3001\tnikxalkias\t{ROW2_CONTENT}\t2010-04-28 19:08:25.618000"
LEGACY_TABLE = f"{LEGACY_HEADER}\n{ROW1_TSV}\n{ROW2_TSV}\n"


@pytest.fixture
def store(tmp_path):
    return SessionStore(tmp_path / "data")


@pytest.fixture
def meta200():
    return VideoMeta(video_id="v1", title="Demo", duration_s=200, source_url="")


@pytest.fixture
def client(store, meta200):
    from fastapi.testclient import TestClient

    from sceneindex.service import create_app

    store.upsert_video(meta200)
    return TestClient(create_app(store))
