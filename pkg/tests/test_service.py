from __future__ import annotations

import json

import pytest
import requests

from vidreason.service import AnnotationService, AnnotationStore, ServiceError

@pytest.fixture()
def store(mock_run):
    run_root, _ = mock_run
    return AnnotationStore(run_root)

@pytest.fixture()
def live(store):
    service = AnnotationService(store, port=0)
    with service:
        yield service

def _api(service, method, path, body=None, expect=200):
    url = service.url + path
    resp = requests.post(url, json=body, timeout=10) if method == "post" else requests.get(url, timeout=10)
    assert resp.status_code == expect, resp.text
    return resp

# -- protocol walk ----------------------------------------------------------------

def test_create_next_submit_progress(live):
    session = _api(live, "post", "/api/sessions", {"annotator_id": "ann-1"}).json()
    assert session["cursor"] == 0 and session["total"] == 12
    sid = session["session_id"]

    item = _api(live, "get", f"/api/sessions/{sid}/next").json()
    assert not item["done"]
    assert item["index"] == 0
    assert item["prompt"]
    assert item["first_frame_url"].startswith("/media/")
    assert "expected_final_url" not in item  # withheld by default

    out = _api(live, "post", f"/api/sessions/{sid}/scores", {"index": 0, "score": 5}).json()
    assert out["cursor"] == 1
    progress = _api(live, "get", f"/api/sessions/{sid}/progress").json()
    assert progress["cursor"] == 1
    assert progress["scored"][0]["score"] == 5

def test_media_routes(live):
    session = _api(live, "post", "/api/sessions", {"annotator_id": "m"}).json()
    item = _api(live, "get", f"/api/sessions/{session['session_id']}/next").json()
    png = _api(live, "get", item["first_frame_url"])
    assert png.headers["Content-Type"] == "image/png"
    assert png.content[:8] == b"\x89PNG\r\n\x1a\n"
    video = _api(live, "get", item["video_url"])
    assert video.headers["Content-Type"] == "video/x-msvideo"
    assert video.content[:4] == b"RIFF"
    last = _api(live, "get", item["video_url"].replace("/video", "/last_frame"))
    assert last.content[:8] == b"\x89PNG\r\n\x1a\n"
    _api(live, "get", item["video_url"].replace("/video", "/final_frame"), expect=403)

def test_error_paths(live):
    session = _api(live, "post", "/api/sessions", {"annotator_id": "e"}).json()
    sid = session["session_id"]
    _api(live, "post", f"/api/sessions/{sid}/scores", {"index": 0, "score": 6}, expect=422)
    _api(live, "post", f"/api/sessions/{sid}/scores", {"index": 0, "score": 0}, expect=422)
    _api(live, "post", f"/api/sessions/{sid}/scores", {"index": 0}, expect=422)
    _api(live, "get", "/api/sessions/feedfacecafe/next", expect=404)
    _api(live, "post", "/api/sessions", {"annotator_id": ""}, expect=422)
    # double submission -> conflict
    _api(live, "post", f"/api/sessions/{sid}/scores", {"index": 0, "score": 4})
    _api(live, "post", f"/api/sessions/{sid}/scores", {"index": 0, "score": 4}, expect=409)
    # scoring ahead of the cursor
    _api(live, "post", f"/api/sessions/{sid}/scores", {"index": 5, "score": 4}, expect=422)

def test_reveal_final_flag(mock_run):
    run_root, _ = mock_run
    store = AnnotationStore(run_root, reveal_final=True)
    with AnnotationService(store, port=0) as service:
        session = _api(service, "post", "/api/sessions", {"annotator_id": "r"}).json()
        item = _api(service, "get", f"/api/sessions/{session['session_id']}/next").json()
        assert "expected_final_url" in item
        png = _api(service, "get", item["expected_final_url"])
        assert png.content[:8] == b"\x89PNG\r\n\x1a\n"

# -- resumption -------------------------------------------------------------------

def test_restart_resumes_same_pending_item(mock_run):
    run_root, _ = mock_run
    store1 = AnnotationStore(run_root)
    s1 = store1.create_session("resumer")
    first_before = store1.next_item(s1.session_id)
    store1.submit_score(s1.session_id, 0, 4)
    store1.submit_score(s1.session_id, 1, 2)
    pending_before = store1.next_item(s1.session_id)

    # simulate a crash: brand-new store over the same directory
    store2 = AnnotationStore(run_root)
    s2 = store2.create_session("resumer")
    assert s2.session_id == s1.session_id
    assert s2.cursor == 2
    pending_after = store2.next_item(s2.session_id)
    assert pending_after == pending_before
    assert pending_after != first_before

def test_old_session_id_survives_restart(mock_run):
    run_root, _ = mock_run
    store1 = AnnotationStore(run_root)
    sid = store1.create_session("survivor").session_id
    store1.submit_score(sid, 0, 3)
    store2 = AnnotationStore(run_root)
    progress = store2.progress(sid)  # no create_session call first
    assert progress["cursor"] == 1

def test_torn_trailing_write_dropped(mock_run):
    run_root, _ = mock_run
    store1 = AnnotationStore(run_root)
    session = store1.create_session("torn")
    store1.submit_score(session.session_id, 0, 5)
    store1.submit_score(session.session_id, 1, 4)
    with open(session.path, "a", encoding="utf-8") as fh:
        fh.write('{"index": 2, "model_name": "mock-or')  # crash mid-write
    store2 = AnnotationStore(run_root)
    resumed = store2.create_session("torn")
    assert resumed.cursor == 2
    assert store2.next_item(resumed.session_id)["index"] == 2

def test_three_annotators_same_items_different_order(mock_run):
    run_root, _ = mock_run
    store = AnnotationStore(run_root)
    orders = {}
    for name in ("alice", "bob", "carol"):
        session = store.create_session(name)
        orders[name] = tuple(session.item_order)
        assert sorted(session.item_order) == list(range(len(store.items)))
    assert len(set(orders.values())) == 3  # independently permuted

def test_submit_persists_atomically(mock_run):
    run_root, _ = mock_run
    store = AnnotationStore(run_root)
    session = store.create_session("atomic")
    store.submit_score(session.session_id, 0, 5, note="clean")
    lines = session.path.read_text().splitlines()
    assert len(lines) == 2
    rec = json.loads(lines[1])
    assert rec["index"] == 0 and rec["score"] == 5 and rec["note"] == "clean"

# -- export ---------------------------------------------------------------------

def test_export_matches_judgment_schema(mock_run, tmp_path):
    from vidreason.judge import load_judgments

    run_root, manifest = mock_run
    store = AnnotationStore(run_root)
    session = store.create_session("exporter")
    for i in range(4):
        store.submit_score(session.session_id, i, 5 - (i % 3))
    out = tmp_path / "human_scores.jsonl"
    out.write_text(store.export_human_scores())
    judgments = [j for j in load_judgments(out) if j.rater == "human:exporter"]
    assert len(judgments) == 4
    assert all(j.success == (j.score >= 4) for j in judgments)

def test_export_feeds_stats_kappa_one(mock_run, tmp_path):
    # identical synthetic ai file vs human export -> kappa exactly 1.0
    from vidreason.judge import load_judgments, make_judgment
    from vidreason.stats import build_report

    run_root, manifest = mock_run
    store = AnnotationStore(run_root)
    session = store.create_session("agreer")
    for i in range(len(store.items)):
        store.submit_score(session.session_id, i, (i % 5) + 1)
    human_path = tmp_path / "human.jsonl"
    human_path.write_text(store.export_human_scores())
    human = [j for j in load_judgments(human_path) if j.rater == "human:agreer"]
    ai = [make_judgment(j.task_id, j.model_name, "ai:stub", j.score, "") for j in human]
    report = build_report(ai, human)
    assert report.kappa_binary == 1.0
    assert report.kappa_5class == 1.0
    assert report.n == len(store.items)

def test_concurrent_submissions_keep_cursor_consistent(mock_run):
    import threading

    run_root, _ = mock_run
    store = AnnotationStore(run_root)
    session = store.create_session("racer")
    total = session.total
    outcomes = []
    lock = threading.Lock()

    def hammer():
        # every thread tries to score whatever the current cursor is
        while True:
            with lock:
                cursor = session.cursor
            if cursor >= total:
                return
            try:
                store.submit_score(session.session_id, cursor, 3)
                with lock:
                    outcomes.append("ok")
            except ServiceError as e:
                assert e.status in (409, 422)
                with lock:
                    outcomes.append("rejected")

    threads = [threading.Thread(target=hammer) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert outcomes.count("ok") == total  # exactly one winner per item
    assert session.cursor == total
    # the persisted file is a clean prefix: header + one line per item
    lines = session.path.read_text().splitlines()
    assert len(lines) == total + 1
    assert [json.loads(l)["index"] for l in lines[1:]] == list(range(total))


def test_store_errors(mock_run):
    run_root, _ = mock_run
    store = AnnotationStore(run_root)
    with pytest.raises(ServiceError) as err:
        store.next_item("0123456789abcdef")
    assert err.value.status == 404
    session = store.create_session("errs")
    with pytest.raises(ServiceError) as err:
        store.submit_score(session.session_id, 0, 11)
    assert err.value.status == 422
    with pytest.raises(ServiceError) as err:
        store.media("nope", "nope", "first_frame")
    assert err.value.status == 404
