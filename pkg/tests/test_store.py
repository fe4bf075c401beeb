"""Tests for on-disk session records and the result log."""

from __future__ import annotations

import json

import pytest

import ontoling.store as store_module
from ontoling.engine import (
    LeaderboardEntry,
    new_session,
    parse_timestamp,
    place,
    submit,
)
from ontoling.levels import puzzle_to_json
from ontoling.store import (
    CorruptRecordError,
    DataStore,
    NotFoundError,
    ResultLogEntry,
    SessionRecord,
    StorageFailureError,
    VersionUnsupportedError,
    session_from_dict,
    session_to_dict,
)


@pytest.fixture()
def store(tmp_path):
    return DataStore(tmp_path / "data")


def _session(lex, base_seed=7, player="ana"):
    return new_session(player, lex, "lex-test", base_seed, session_id="s1")


def _entry(player, level, score, at, session_id="s1", stars=3):
    return ResultLogEntry(
        player=player,
        session_id=session_id,
        level=level,
        score=score,
        stars=stars,
        submitted_at=at,
    )


# --- session round trip ---------------------------------------------------------


def test_session_dict_round_trip(lex):
    session = _session(lex)
    slot = session.puzzle.all_slots()[0]
    place(session, slot.slot_id, slot.answer_lemmas[0])
    rebuilt = session_from_dict(session_to_dict(session))
    assert rebuilt == session
    assert puzzle_to_json(rebuilt.puzzle, with_answers=True) == puzzle_to_json(
        session.puzzle, with_answers=True
    )


def test_session_dict_round_trip_with_history(lex):
    session = _session(lex)
    for slot in session.puzzle.all_slots():
        place(session, slot.slot_id, slot.answer_lemmas[0])
    submit(session, "2026-01-01T00:00:00Z")
    rebuilt = session_from_dict(json.loads(json.dumps(session_to_dict(session))))
    assert rebuilt == session


def test_session_doc_serializes_seeds_as_strings(lex):
    session = new_session("ana", lex, "lex-test", 2**64 - 1, session_id="s1")
    doc = session_to_dict(session)
    assert doc["base_seed"] == str(2**64 - 1)
    assert doc["puzzle"]["seed"] == str(session.puzzle.seed)


def test_save_load_identity(lex, store):
    session = _session(lex)
    store.save_session(SessionRecord(session=session, saved_at="2026-01-01T00:00:00Z"))
    record = store.load_session("s1")
    assert record.session == session
    assert record.schema_version == 1
    assert record.saved_at == "2026-01-01T00:00:00Z"


def test_save_twice_second_wins(lex, store):
    session = _session(lex)
    store.save_session(SessionRecord(session=session))
    slot = session.puzzle.all_slots()[0]
    place(session, slot.slot_id, slot.answer_lemmas[0])
    store.save_session(SessionRecord(session=session, saved_at="later"))
    record = store.load_session("s1")
    assert record.session.placements == session.placements
    assert record.saved_at == "later"


def test_failed_write_leaves_prior_version(lex, store, monkeypatch):
    session = _session(lex)
    store.save_session(SessionRecord(session=session, saved_at="first"))

    def boom(src, dst):
        raise OSError("disk full")

    monkeypatch.setattr(store_module.os, "replace", boom)
    slot = session.puzzle.all_slots()[0]
    place(session, slot.slot_id, slot.answer_lemmas[0])
    with pytest.raises(StorageFailureError):
        store.save_session(SessionRecord(session=session, saved_at="second"))
    monkeypatch.undo()
    record = store.load_session("s1")
    assert record.saved_at == "first"
    assert record.session.placements == {}
    # no leftover temp files from the failed write
    assert list(store.sessions_dir.glob("*.tmp")) == []
    assert [p.name for p in store.sessions_dir.iterdir()] == ["s1.json"]


def test_load_unknown_session(store):
    with pytest.raises(NotFoundError):
        store.load_session("missing")


def test_load_truncated_file(lex, store):
    session = _session(lex)
    store.save_session(SessionRecord(session=session))
    path = store.sessions_dir / "s1.json"
    path.write_text(path.read_text()[: len(path.read_text()) // 2])
    with pytest.raises(CorruptRecordError):
        store.load_session("s1")


def test_load_unsupported_schema(lex, store):
    session = _session(lex)
    store.save_session(SessionRecord(session=session))
    path = store.sessions_dir / "s1.json"
    doc = json.loads(path.read_text())
    doc["schema_version"] = 999
    path.write_text(json.dumps(doc))
    with pytest.raises(VersionUnsupportedError) as err:
        store.load_session("s1")
    assert err.value.found == 999
    assert err.value.supported == 1


def test_data_dir_from_environment(tmp_path, monkeypatch):
    target = tmp_path / "from-env"
    monkeypatch.setenv("ONTOLING_DATA_DIR", str(target))
    store = DataStore()
    assert store.root == target
    assert store.sessions_dir.is_dir()


# --- result log -------------------------------------------------------------------


def test_append_and_iter_results(store):
    entries = [
        _entry("ana", 1, 100, "2026-01-01T10:00:00Z"),
        _entry("bo", 1, 67, "2026-01-01T11:00:00Z", session_id="s2", stars=1),
    ]
    for entry in entries:
        store.append_result(entry)
    assert store.iter_results() == entries


def test_iter_results_missing_file(store):
    assert store.iter_results() == []


def test_iter_results_corrupt_line(store):
    store.append_result(_entry("ana", 1, 100, "2026-01-01T10:00:00Z"))
    with store.results_path.open("a") as handle:
        handle.write("{not json\n")
    with pytest.raises(CorruptRecordError) as err:
        store.iter_results()
    assert "line 2" in str(err.value)


def test_leaderboard_best_per_level(store):
    store.append_result(_entry("ana", 1, 50, "2026-01-01T10:00:00Z", stars=1))
    store.append_result(_entry("ana", 1, 100, "2026-01-01T10:30:00Z"))
    store.append_result(_entry("ana", 2, 80, "2026-01-01T11:00:00Z", stars=2))
    board = store.leaderboard()
    assert board == [
        LeaderboardEntry(
            player="ana",
            total_score=180,
            levels_completed=2,
            last_submission="2026-01-01T11:00:00Z",
        )
    ]


def test_leaderboard_ordering_and_limit(store):
    store.append_result(_entry("cy", 1, 100, "2026-01-01T09:00:00Z"))
    store.append_result(_entry("ana", 1, 100, "2026-01-01T10:00:00Z"))
    store.append_result(_entry("bo", 1, 90, "2026-01-01T08:00:00Z"))
    board = store.leaderboard()
    assert [e.player for e in board] == ["cy", "ana", "bo"]  # tie: earlier wins
    assert [e.player for e in store.leaderboard(limit=2)] == ["cy", "ana"]


def test_leaderboard_matches_brute_force(store):
    rng_entries = []
    players = ["ana", "bo", "cy", "dee"]
    for i in range(100):
        player = players[i % len(players)]
        level = (i * 7) % 4 + 1
        score = (i * 13) % 101
        at = f"2026-01-01T{i % 24:02d}:{i % 60:02d}:00Z"
        entry = _entry(player, level, score, at, stars=score // 34)
        rng_entries.append(entry)
        store.append_result(entry)

    best: dict[str, dict[int, int]] = {}
    last: dict[str, str] = {}
    for entry in rng_entries:
        per = best.setdefault(entry.player, {})
        per[entry.level] = max(per.get(entry.level, 0), entry.score)
        if entry.player not in last or parse_timestamp(
            entry.submitted_at
        ) > parse_timestamp(last[entry.player]):
            last[entry.player] = entry.submitted_at

    board = store.leaderboard()
    assert {e.player for e in board} == set(players)
    for row in board:
        assert row.total_score == sum(best[row.player].values())
        assert row.levels_completed == len(best[row.player])
        assert row.last_submission == last[row.player]
    totals = [e.total_score for e in board]
    assert totals == sorted(totals, reverse=True)
