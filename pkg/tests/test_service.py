"""HTTP API tests: contract, error mapping, redaction, engine equivalence."""

from __future__ import annotations

import json
import threading

import pytest
from fastapi.testclient import TestClient

from ontoling import engine
from ontoling.levels import builtin_level_specs, generate_puzzle
from ontoling.rng import derive_seed
from ontoling.service import create_app
from ontoling.store import DataStore


@pytest.fixture()
def client(lex, tmp_path):
    app = create_app(lex, "lex-test", DataStore(tmp_path / "data"))
    with TestClient(app) as c:
        yield c


def _create(client, player="ana", seed="7"):
    body = {"player": player}
    if seed is not None:
        body["seed"] = seed
    response = client.post("/v1/sessions", json=body)
    assert response.status_code == 201, response.text
    return response.json()


def _answers(lex, view):
    """Recompute the puzzle locally to learn slot answers (tests only)."""
    spec = builtin_level_specs()[view["level"] - 1]
    puzzle = generate_puzzle(lex, spec, int(view["puzzle"]["seed"]))
    return {slot.slot_id: slot.answer_lemmas[0] for slot in puzzle.all_slots()}


def _solve_level(client, lex, session_id):
    view = client.get(f"/v1/sessions/{session_id}/puzzle").json()
    for slot_id, term in _answers(lex, view).items():
        response = client.put(
            f"/v1/sessions/{session_id}/placements/{slot_id}", json={"term": term}
        )
        assert response.status_code == 200, response.text
    return client.post(f"/v1/sessions/{session_id}/submit").json()


# --- endpoint contract ----------------------------------------------------------


def test_health(client):
    doc = client.get("/v1/health").json()
    assert doc == {"status": "ok", "lexicon_id": "lex-test", "levels": 4}


def test_create_session_echoes_seed_and_view(lex, client):
    doc = _create(client, seed="123")
    assert doc["seed"] == "123"
    view = doc["view"]
    assert view["level"] == 1
    assert view["status"] == "in_progress"
    assert view["puzzle"]["seed"] == str(derive_seed(123, 1))
    assert view["placements"] == {}


def test_create_session_accepts_integer_seed(client):
    response = client.post("/v1/sessions", json={"player": "ana", "seed": 99})
    assert response.status_code == 201
    assert response.json()["seed"] == "99"


def test_create_session_random_seed_when_omitted(client):
    a = _create(client, seed=None)
    b = _create(client, seed=None)
    assert a["seed"] != b["seed"]


@pytest.mark.parametrize("seed", ["abc", "-1", -1, 2**64, True, 1.5])
def test_create_session_rejects_bad_seeds(client, seed):
    response = client.post("/v1/sessions", json={"player": "ana", "seed": seed})
    assert response.status_code == 400
    assert response.json()["error"]["code"] == "BadSeed"


def test_create_session_rejects_blank_player(client):
    for body in ({}, {"player": "  "}, {"player": 7}):
        response = client.post("/v1/sessions", json=body)
        assert response.status_code == 400
        assert response.json()["error"]["code"] == "EmptyPlayer"


def test_invalid_json_body_is_a_client_error(client):
    response = client.post(
        "/v1/sessions", content="not json", headers={"content-type": "application/json"}
    )
    assert response.status_code == 422
    assert response.json()["error"]["code"] == "InvalidRequest"


def test_session_summary(client):
    session_id = _create(client)["session_id"]
    doc = client.get(f"/v1/sessions/{session_id}").json()
    assert doc["session_id"] == session_id
    assert doc["player"] == "ana"
    assert doc["seed"] == "7"
    assert doc["level"] == 1
    assert doc["status"] == "in_progress"
    assert doc["history"] == []


def test_unknown_session_is_404(client):
    response = client.get("/v1/sessions/nope")
    assert response.status_code == 404
    body = response.json()
    assert body["error"]["code"] == "NotFound"
    assert set(body["error"]) == {"code", "message"}


def test_placement_flow_and_errors(lex, client):
    doc = _create(client)
    session_id = doc["session_id"]
    view = doc["view"]
    answers = _answers(lex, view)
    slot_ids = list(answers)
    first, second = slot_ids[0], slot_ids[1]

    response = client.put(
        f"/v1/sessions/{session_id}/placements/{first}", json={"term": answers[first]}
    )
    assert response.status_code == 200
    assert response.json()["placements"] == {first: answers[first]}

    response = client.put(
        f"/v1/sessions/{session_id}/placements/nope", json={"term": answers[first]}
    )
    assert response.status_code == 404
    assert response.json()["error"]["code"] == "UnknownSlot"

    response = client.put(
        f"/v1/sessions/{session_id}/placements/{first}", json={"term": "zzz"}
    )
    assert response.status_code == 400
    assert response.json()["error"]["code"] == "TermNotInBank"

    response = client.put(
        f"/v1/sessions/{session_id}/placements/{second}", json={"term": answers[first]}
    )
    assert response.status_code == 409
    assert response.json()["error"]["code"] == "TermAlreadyPlaced"

    response = client.put(f"/v1/sessions/{session_id}/placements/{first}", json={})
    assert response.status_code == 400

    response = client.delete(f"/v1/sessions/{session_id}/placements/{first}")
    assert response.status_code == 200
    assert response.json()["placements"] == {}

    response = client.delete(f"/v1/sessions/{session_id}/placements/{first}")
    assert response.status_code == 409
    assert response.json()["error"]["code"] == "NothingPlaced"


def test_submit_incomplete_is_400(client):
    session_id = _create(client)["session_id"]
    response = client.post(f"/v1/sessions/{session_id}/submit")
    assert response.status_code == 400
    assert response.json()["error"]["code"] == "IncompletePlacement"


def test_advance_before_pass_is_409(client):
    session_id = _create(client)["session_id"]
    response = client.post(f"/v1/sessions/{session_id}/advance")
    assert response.status_code == 409
    assert response.json()["error"]["code"] == "NotPassed"


def test_full_level_pass_and_advance(lex, client):
    session_id = _create(client)["session_id"]
    report = _solve_level(client, lex, session_id)
    assert report["level_score"] == 100
    assert report["stars"] == 3
    assert report["passed"] is True
    assert report["status"] == "awaiting_advance"
    assert report["level"] == 1

    view = client.post(f"/v1/sessions/{session_id}/advance").json()
    assert view["level"] == 2
    assert view["status"] == "in_progress"
    assert view["placements"] == {}

    board = client.get("/v1/leaderboard").json()["entries"]
    assert board == [
        {
            "player": "ana",
            "total_score": 100,
            "levels_completed": 1,
            "last_submission": board[0]["last_submission"],
        }
    ]


def test_completed_playthrough(lex, client):
    session_id = _create(client, player="bo", seed="42")["session_id"]
    for level in range(1, 5):
        report = _solve_level(client, lex, session_id)
        assert report["level"] == level
        assert report["level_score"] == 100
        if level < 4:
            client.post(f"/v1/sessions/{session_id}/advance")
    assert report["status"] == "completed"

    summary = client.get(f"/v1/sessions/{session_id}").json()
    assert summary["status"] == "completed"
    assert [h["level"] for h in summary["history"]] == [1, 2, 3, 4]

    response = client.post(f"/v1/sessions/{session_id}/advance")
    assert response.status_code == 409
    assert response.json()["error"]["code"] == "AlreadyCompleted"

    board = client.get("/v1/leaderboard").json()["entries"]
    assert board[0]["player"] == "bo"
    assert board[0]["total_score"] == 400
    assert board[0]["levels_completed"] == 4


def test_leaderboard_limit(lex, client):
    for player in ("ana", "bo"):
        session_id = _create(client, player=player, seed="7")["session_id"]
        _solve_level(client, lex, session_id)
    board = client.get("/v1/leaderboard", params={"limit": 1}).json()["entries"]
    assert len(board) == 1


# --- invariants -------------------------------------------------------------------


def test_reads_are_idempotent(lex, client):
    doc = _create(client)
    session_id = doc["session_id"]
    answers = _answers(lex, doc["view"])
    slot_id, term = next(iter(answers.items()))
    client.put(f"/v1/sessions/{session_id}/placements/{slot_id}", json={"term": term})

    puzzle_bodies = {client.get(f"/v1/sessions/{session_id}/puzzle").text for _ in range(3)}
    summary_bodies = {client.get(f"/v1/sessions/{session_id}").text for _ in range(3)}
    assert len(puzzle_bodies) == 1
    assert len(summary_bodies) == 1
    assert json.loads(puzzle_bodies.pop())["placements"] == {slot_id: term}


def test_no_response_ever_leaks_answer_data(lex, client):
    bodies: list[str] = []

    def record(response):
        bodies.append(response.text)
        return response

    session_id = _create(client, seed="11")["session_id"]
    synset_ids: set[str] = set()
    for level in range(1, 5):
        view = client.get(f"/v1/sessions/{session_id}/puzzle")
        record(view)
        answers = _answers(lex, view.json())
        spec = builtin_level_specs()[level - 1]
        puzzle = generate_puzzle(lex, spec, int(view.json()["puzzle"]["seed"]))
        synset_ids.update(slot.synset_id for slot in puzzle.all_slots())
        for slot_id, term in answers.items():
            record(
                client.put(
                    f"/v1/sessions/{session_id}/placements/{slot_id}",
                    json={"term": term},
                )
            )
        record(client.post(f"/v1/sessions/{session_id}/submit"))
        record(client.get(f"/v1/sessions/{session_id}"))
        if level < 4:
            record(client.post(f"/v1/sessions/{session_id}/advance"))
    record(client.get("/v1/leaderboard"))

    assert len(bodies) > 50
    for body in bodies:
        assert '"answers"' not in body
        assert '"answer_lemmas"' not in body
        for synset_id in synset_ids:
            assert f'"{synset_id}"' not in body


def test_api_matches_direct_engine_run(lex, client):
    seed = 31
    doc = _create(client, player="mirror", seed=str(seed))
    session_id = doc["session_id"]

    session = engine.new_session("mirror", lex, "lex-test", seed)
    engine_reports = []
    api_reports = []
    for level in range(1, 5):
        for slot in session.puzzle.all_slots():
            engine.place(session, slot.slot_id, slot.answer_lemmas[0])
            client.put(
                f"/v1/sessions/{session_id}/placements/{slot.slot_id}",
                json={"term": slot.answer_lemmas[0]},
            )
        session, report = engine.submit(session, "2026-01-01T00:00:00Z")
        engine_reports.append(engine.report_to_dict(report))
        api_doc = client.post(f"/v1/sessions/{session_id}/submit").json()
        api_doc.pop("status")
        api_doc.pop("level")
        api_reports.append(api_doc)
        if level < 4:
            engine.advance(session, lex)
            client.post(f"/v1/sessions/{session_id}/advance")
    assert api_reports == engine_reports


def test_sessions_survive_a_new_app_instance(lex, tmp_path):
    data_dir = tmp_path / "data"
    app = create_app(lex, "lex-test", DataStore(data_dir))
    with TestClient(app) as client:
        doc = _create(client, seed="5")
        session_id = doc["session_id"]
        answers = _answers(lex, doc["view"])
        slot_id, term = next(iter(answers.items()))
        client.put(f"/v1/sessions/{session_id}/placements/{slot_id}", json={"term": term})
        before = client.get(f"/v1/sessions/{session_id}/puzzle").text

    fresh = create_app(lex, "lex-test", DataStore(data_dir))
    with TestClient(fresh) as client:
        after = client.get(f"/v1/sessions/{session_id}/puzzle")
        assert after.status_code == 200
        assert after.text == before


def test_concurrent_sessions_do_not_interfere(lex, client):
    ids = [_create(client, player=f"p{i}", seed=str(i))["session_id"] for i in range(2)]
    reports: dict[str, dict] = {}
    errors: list[Exception] = []

    def play(session_id):
        try:
            reports[session_id] = _solve_level(client, lex, session_id)
        except Exception as exc:  # surfaced below, threads swallow otherwise
            errors.append(exc)

    threads = [threading.Thread(target=play, args=(sid,)) for sid in ids]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
    for session_id in ids:
        assert reports[session_id]["level_score"] == 100


def test_static_app_mount(lex, tmp_path):
    app_dir = tmp_path / "webui"
    app_dir.mkdir()
    (app_dir / "index.html").write_text("<h1>ontoling</h1>")
    app = create_app(lex, "lex-test", DataStore(tmp_path / "data"), app_dir=app_dir)
    with TestClient(app) as client:
        response = client.get("/app/")
        assert response.status_code == 200
        assert "ontoling" in response.text
