"""Disk persistence: session documents, the result log, and the leaderboard.

Layout under one data directory (``ONTOLING_DATA_DIR`` overrides the
default ``./data``):

* ``sessions/<session_id>.json`` — full session state, one JSON document
  per session, written atomically (temp file then rename) so a crash
  mid-write never clobbers the previous version;
* ``results.log`` — append-only log, one JSON record per passing submit.

64-bit integers (seeds) are stored as decimal strings, keeping the JSON
consumable by readers without 64-bit integer support.
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from dataclasses import dataclass
from pathlib import Path

from .engine import LeaderboardEntry, LevelResult, Session, SessionStatus, parse_timestamp
from .errors import OntolingError
from .levels import puzzle_from_dict, puzzle_to_dict

SCHEMA_VERSION = 1


class StorageFailureError(OntolingError):
    code = "StorageFailure"


class NotFoundError(OntolingError):
    code = "NotFound"


class CorruptRecordError(OntolingError):
    code = "CorruptRecord"


class VersionUnsupportedError(OntolingError):
    code = "VersionUnsupported"

    def __init__(self, found: int, supported: int):
        super().__init__(f"schema version {found} unsupported (supported: {supported})")
        self.found = found
        self.supported = supported


@dataclass
class SessionRecord:
    session: Session
    schema_version: int = SCHEMA_VERSION
    saved_at: str = ""


@dataclass(frozen=True)
class ResultLogEntry:
    player: str
    session_id: str
    level: int
    score: int
    stars: int
    submitted_at: str


def session_to_dict(session: Session) -> dict:
    return {
        "session_id": session.session_id,
        "player": session.player,
        "lexicon_id": session.lexicon_id,
        "base_seed": str(session.base_seed),
        "current_level": session.current_level,
        "status": session.status.value,
        "puzzle": puzzle_to_dict(session.puzzle, with_answers=True),
        "placements": dict(session.placements),
        "history": [
            {
                "level": result.level,
                "score": result.score,
                "stars": result.stars,
                "submitted_at": result.submitted_at,
            }
            for result in session.history
        ],
    }


def session_from_dict(doc: dict) -> Session:
    return Session(
        session_id=doc["session_id"],
        player=doc["player"],
        lexicon_id=doc["lexicon_id"],
        base_seed=int(doc["base_seed"]),
        current_level=int(doc["current_level"]),
        status=SessionStatus(doc["status"]),
        puzzle=puzzle_from_dict(doc["puzzle"]),
        placements=dict(doc["placements"]),
        history=[
            LevelResult(
                level=int(item["level"]),
                score=int(item["score"]),
                stars=int(item["stars"]),
                submitted_at=item["submitted_at"],
            )
            for item in doc["history"]
        ],
    )


class DataStore:
    """One store instance per data directory; see the module docstring."""

    def __init__(self, data_dir: str | os.PathLike[str] | None = None):
        if data_dir is None:
            data_dir = os.environ.get("ONTOLING_DATA_DIR", "data")
        self.root = Path(data_dir)
        self.sessions_dir = self.root / "sessions"
        self.results_path = self.root / "results.log"
        self._log_lock = threading.Lock()
        try:
            self.sessions_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise StorageFailureError(f"cannot create data directory: {exc}") from exc

    def _session_path(self, session_id: str) -> Path:
        return self.sessions_dir / f"{session_id}.json"

    def save_session(self, record: SessionRecord) -> None:
        """Atomic write: the previous version stays intact until the rename."""
        doc = {
            "schema_version": record.schema_version,
            "saved_at": record.saved_at,
            "session": session_to_dict(record.session),
        }
        path = self._session_path(record.session.session_id)
        tmp = path.with_name(f".{path.name}.{uuid.uuid4().hex}.tmp")
        try:
            with open(tmp, "w", encoding="utf-8") as handle:
                json.dump(doc, handle, indent=2)
                handle.write("\n")
                handle.flush()
                os.fsync(handle.fileno())
            os.replace(tmp, path)
        except OSError as exc:
            try:
                tmp.unlink(missing_ok=True)
            except OSError:
                pass
            raise StorageFailureError(f"cannot save session: {exc}") from exc

    def load_session(self, session_id: str) -> SessionRecord:
        path = self._session_path(session_id)
        try:
            raw = path.read_text(encoding="utf-8")
        except FileNotFoundError:
            raise NotFoundError(f"no stored session {session_id!r}") from None
        except OSError as exc:
            raise StorageFailureError(f"cannot read session: {exc}") from exc
        try:
            doc = json.loads(raw)
            found = int(doc["schema_version"])
            if found != SCHEMA_VERSION:
                raise VersionUnsupportedError(found=found, supported=SCHEMA_VERSION)
            session = session_from_dict(doc["session"])
        except VersionUnsupportedError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise CorruptRecordError(f"session record {session_id!r}: {exc}") from exc
        return SessionRecord(
            session=session,
            schema_version=found,
            saved_at=doc.get("saved_at", ""),
        )

    def append_result(self, entry: ResultLogEntry) -> None:
        line = json.dumps(
            {
                "player": entry.player,
                "session_id": entry.session_id,
                "level": entry.level,
                "score": entry.score,
                "stars": entry.stars,
                "submitted_at": entry.submitted_at,
            }
        )
        try:
            with self._log_lock, open(self.results_path, "a", encoding="utf-8") as handle:
                handle.write(line + "\n")
                handle.flush()
                os.fsync(handle.fileno())
        except OSError as exc:
            raise StorageFailureError(f"cannot append result: {exc}") from exc

    def iter_results(self) -> list[ResultLogEntry]:
        try:
            raw = self.results_path.read_text(encoding="utf-8")
        except FileNotFoundError:
            return []
        except OSError as exc:
            raise StorageFailureError(f"cannot read result log: {exc}") from exc
        entries: list[ResultLogEntry] = []
        for line_no, line in enumerate(raw.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                doc = json.loads(line)
                entries.append(
                    ResultLogEntry(
                        player=doc["player"],
                        session_id=doc["session_id"],
                        level=int(doc["level"]),
                        score=int(doc["score"]),
                        stars=int(doc["stars"]),
                        submitted_at=doc["submitted_at"],
                    )
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise CorruptRecordError(f"result log line {line_no}: {exc}") from exc
        return entries

    def leaderboard(self, limit: int | None = None) -> list[LeaderboardEntry]:
        """Aggregate the result log: best score per level per player.

        Sorted by winner ordering: total score descending, then earlier
        last submission, then player name.
        """
        best: dict[str, dict[int, int]] = {}
        last_seen: dict[str, str] = {}
        for entry in self.iter_results():
            levels = best.setdefault(entry.player, {})
            levels[entry.level] = max(levels.get(entry.level, 0), entry.score)
            prior = last_seen.get(entry.player)
            if prior is None or parse_timestamp(entry.submitted_at) > parse_timestamp(prior):
                last_seen[entry.player] = entry.submitted_at
        entries = [
            LeaderboardEntry(
                player=player,
                total_score=sum(levels.values()),
                levels_completed=len(levels),
                last_submission=last_seen[player],
            )
            for player, levels in best.items()
        ]
        entries.sort(
            key=lambda e: (-e.total_score, parse_timestamp(e.last_submission), e.player)
        )
        if limit is not None:
            entries = entries[:limit]
        return entries
