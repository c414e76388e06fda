"""HTTP API contract: endpoints, error envelope, caching, static assets."""

import shutil
import threading

import pytest
from fastapi.testclient import TestClient

from sceneindex.heatmap import DEFAULT_PROFILE, build_heatmap
from sceneindex.indexer import IndexRequest, extract_index_points
from sceneindex.service import create_app

from conftest import ROW1_CONTENT

V1 = {"video_id": "v1", "title": "Demo", "duration_s": 200, "source_url": ""}


def _envelope_keys(body):
    return set(body) == {"status", "code", "message", "detail"}


# -- health ---------------------------------------------------------------------


def test_healthz_ok(client):
    response = client.get("/healthz")
    assert response.status_code == 200
    assert response.text == "ok"
    assert client.get("/healthz").status_code == 200


def test_healthz_degrades_when_store_vanishes(store):
    client = TestClient(create_app(store))
    shutil.rmtree(store.root)
    response = client.get("/healthz")
    assert response.status_code == 503
    body = response.json()
    assert _envelope_keys(body) and body["code"] == "store_unavailable"


# -- videos ----------------------------------------------------------------------


def test_create_video_echoes_meta(client):
    response = client.post("/api/v1/videos", json=dict(V1, video_id="v2"))
    assert response.status_code == 201
    assert response.json() == dict(V1, video_id="v2")


def test_create_video_is_idempotent(client):
    assert client.post("/api/v1/videos", json=V1).status_code == 201
    assert client.post("/api/v1/videos", json=V1).status_code == 201


def test_missing_duration_is_invalid_meta(client):
    response = client.post("/api/v1/videos", json={"video_id": "v9", "title": "x"})
    assert response.status_code == 400
    body = response.json()
    assert _envelope_keys(body) and body["code"] == "invalid_meta"


def test_unsafe_video_id_is_invalid_meta(client):
    response = client.post("/api/v1/videos", json=dict(V1, video_id="a/b"))
    assert response.status_code == 400
    assert response.json()["code"] == "invalid_meta"


def test_duration_conflict_is_409(client):
    client.post(
        "/api/v1/videos/v1/sessions", json={"author": "ann", "content": "play:0 exit:10"}
    ).raise_for_status()
    response = client.post("/api/v1/videos", json=dict(V1, duration_s=100))
    assert response.status_code == 409
    assert response.json()["code"] == "duration_conflict"


def test_list_and_get_videos(client):
    assert client.get("/api/v1/videos").json() == {"videos": [V1]}
    assert client.get("/api/v1/videos/v1").json() == V1
    assert client.get("/api/v1/videos/nope").status_code == 404


# -- sessions ---------------------------------------------------------------------


def test_post_compact_text_session(client):
    response = client.post(
        "/api/v1/videos/v1/sessions", json={"author": "videoskiptest", "content": ROW1_CONTENT}
    )
    assert response.status_code == 201
    assert response.json() == {"session_id": 1}


def test_post_structured_events_session(client):
    response = client.post(
        "/api/v1/videos/v1/sessions",
        json={
            "author": "ann",
            "recorded_at": "2010-04-28T15:27:00",
            "events": [{"kind": "play", "t": 0.08}, {"kind": "replay", "t": 130.728}],
        },
    )
    assert response.status_code == 201


def test_empty_session_is_legal(client):
    assert (
        client.post("/api/v1/videos/v1/sessions", json={"author": "ann", "events": []}).status_code
        == 201
    )


def test_session_for_unknown_video_is_404(client):
    response = client.post("/api/v1/videos/nope/sessions", json={"author": "a", "content": ""})
    assert response.status_code == 404
    body = response.json()
    assert _envelope_keys(body) and body["code"] == "unknown_video"


def test_malformed_content_is_422_with_token_position(client):
    response = client.post("/api/v1/videos/v1/sessions", json={"author": "a", "content": "play:abc"})
    assert response.status_code == 422
    body = response.json()
    assert body["code"] == "malformed_token"
    assert body["detail"] == {"token_index": 0}


def test_unknown_abbrev_is_422_with_token_position(client):
    response = client.post(
        "/api/v1/videos/v1/sessions", json={"author": "a", "content": "play:1 jump:2"}
    )
    assert response.status_code == 422
    body = response.json()
    assert body["code"] == "unknown_abbrev" and body["detail"] == {"token_index": 1}


def test_out_of_range_event_is_422(client):
    response = client.post(
        "/api/v1/videos/v1/sessions", json={"author": "a", "content": "play:999"}
    )
    assert response.status_code == 422
    assert response.json()["code"] == "event_out_of_range"


def test_unknown_structured_kind_is_422(client):
    response = client.post(
        "/api/v1/videos/v1/sessions",
        json={"author": "a", "events": [{"kind": "jump", "t": 1}]},
    )
    assert response.status_code == 422
    assert response.json()["code"] == "unknown_kind"


def test_blank_author_is_422(client):
    response = client.post("/api/v1/videos/v1/sessions", json={"author": " ", "content": ""})
    assert response.status_code == 422
    assert response.json()["code"] == "empty_author"


def test_unknown_body_field_is_400(client):
    response = client.post(
        "/api/v1/videos/v1/sessions", json={"author": "a", "content": "", "bogus": 1}
    )
    assert response.status_code == 400
    body = response.json()
    assert body["code"] == "unknown_field" and body["detail"] == {"field": "bogus"}


def test_both_body_shapes_at_once_is_400(client):
    response = client.post(
        "/api/v1/videos/v1/sessions", json={"author": "a", "content": "", "events": []}
    )
    assert response.status_code == 400
    assert response.json()["code"] == "ambiguous_body"


def test_neither_body_shape_is_400(client):
    response = client.post("/api/v1/videos/v1/sessions", json={"author": "a"})
    assert response.status_code == 400
    assert response.json()["code"] == "invalid_body"


# -- heatmap -----------------------------------------------------------------------


def test_fresh_video_heatmap_is_all_zero(client):
    body = client.get("/api/v1/videos/v1/heatmap").json()
    assert body["video_id"] == "v1"
    assert body["duration_s"] == 200
    assert body["cells"] == [0.0] * 200


def test_heatmap_reflects_posted_session(client):
    client.post(
        "/api/v1/videos/v1/sessions", json={"author": "videoskiptest", "content": ROW1_CONTENT}
    ).raise_for_status()
    cells = client.get("/api/v1/videos/v1/heatmap").json()["cells"]
    assert cells[100:106] == [2.0] * 6
    assert cells[76:100] == [1.0] * 24
    assert cells[106:130] == [1.0] * 24
    assert sum(cells) == 60.0


def test_extended_profile_scores_pauses(client):
    client.post(
        "/api/v1/videos/v1/sessions", json={"author": "a", "content": "pause:49.459"}
    ).raise_for_status()
    default = client.get("/api/v1/videos/v1/heatmap", params={"profile": "default"}).json()
    extended = client.get("/api/v1/videos/v1/heatmap", params={"profile": "extended"}).json()
    assert sum(default["cells"]) == 0.0
    assert extended["cells"][48] == 1.0 and sum(extended["cells"]) == 1.0


def test_unknown_profile_is_400(client):
    response = client.get("/api/v1/videos/v1/heatmap", params={"profile": "bogus"})
    assert response.status_code == 400
    assert response.json()["code"] == "unknown_profile"


def test_heatmap_for_unknown_video_is_404(client):
    assert client.get("/api/v1/videos/nope/heatmap").status_code == 404


# -- index -------------------------------------------------------------------------


def test_index_after_reference_session(client):
    client.post(
        "/api/v1/videos/v1/sessions", json={"author": "videoskiptest", "content": ROW1_CONTENT}
    ).raise_for_status()
    body = client.get("/api/v1/videos/v1/index", params={"k": 3, "min_distance_s": 30}).json()
    assert body == {"points": [{"t": 100, "score": 2.0, "rank": 1}]}


def test_fresh_video_index_is_empty(client):
    assert client.get("/api/v1/videos/v1/index").json() == {"points": []}


def test_non_positive_k_is_400(client):
    response = client.get("/api/v1/videos/v1/index", params={"k": 0})
    assert response.status_code == 400
    assert response.json()["code"] == "invalid_parameter"


def test_negative_min_distance_is_400(client):
    response = client.get("/api/v1/videos/v1/index", params={"min_distance_s": -1})
    assert response.status_code == 400
    assert response.json()["code"] == "invalid_parameter"


def test_non_integer_k_is_400(client):
    response = client.get("/api/v1/videos/v1/index", params={"k": "three"})
    assert response.status_code == 400
    assert response.json()["code"] == "invalid_parameter"


def test_read_your_writes_through_the_cache(client):
    assert client.get("/api/v1/videos/v1/index").json()["points"] == []
    client.post(
        "/api/v1/videos/v1/sessions", json={"author": "a", "content": "replay:130.728"}
    ).raise_for_status()
    points = client.get("/api/v1/videos/v1/index").json()["points"]
    assert points == [{"t": 100, "score": 1.0, "rank": 1}]
    client.post(
        "/api/v1/videos/v1/sessions", json={"author": "b", "content": "replay:50.0"}
    ).raise_for_status()
    points = client.get("/api/v1/videos/v1/index").json()["points"]
    assert {p["t"] for p in points} == {100, 20}


def test_api_equals_direct_library_computation(client, store, meta200):
    for content in (ROW1_CONTENT, "replay:42.5 replay:42.5", "replay:199.9"):
        client.post(
            "/api/v1/videos/v1/sessions", json={"author": "a", "content": content}
        ).raise_for_status()
    got = client.get("/api/v1/videos/v1/index", params={"k": 5, "min_distance_s": 10}).json()
    heatmap = build_heatmap(store.list_sessions("v1"), meta200, DEFAULT_PROFILE)
    expected = extract_index_points(heatmap, IndexRequest(5, 10))
    assert got["points"] == [{"t": p.t, "score": p.score, "rank": p.rank} for p in expected]
    cells = client.get("/api/v1/videos/v1/heatmap").json()["cells"]
    assert cells == list(heatmap.cells)


def test_concurrent_session_posts_all_persist(store, meta200):
    store.upsert_video(meta200)
    app = create_app(store)
    barrier = threading.Barrier(8)
    ids, lock = [], threading.Lock()

    def worker():
        client = TestClient(app)
        barrier.wait()
        response = client.post(
            "/api/v1/videos/v1/sessions", json={"author": "a", "content": "replay:60"}
        )
        assert response.status_code == 201
        with lock:
            ids.append(response.json()["session_id"])

    threads = [threading.Thread(target=worker) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert sorted(ids) == list(range(1, 9))
    assert len(store.list_sessions("v1")) == 8


# -- static assets -------------------------------------------------------------------


def test_ui_and_media_mounts(tmp_path, store, meta200):
    store.upsert_video(meta200)
    ui = tmp_path / "ui"
    ui.mkdir()
    (ui / "index.html").write_text("<!doctype html><title>player</title>", encoding="utf-8")
    media = tmp_path / "media"
    media.mkdir()
    (media / "v1.mp4").write_bytes(b"fake-bytes")
    client = TestClient(create_app(store, ui_dir=ui, media_dir=media))
    assert client.get("/").status_code == 200
    assert "player" in client.get("/").text
    assert client.get("/media/v1.mp4").content == b"fake-bytes"
    # the API remains reachable with the root mount in place
    assert client.get("/api/v1/videos/v1").status_code == 200


def test_missing_static_dirs_do_not_break_the_api(store, meta200):
    store.upsert_video(meta200)
    client = TestClient(create_app(store, ui_dir="does-not-exist", media_dir="nope"))
    assert client.get("/api/v1/videos/v1").status_code == 200
