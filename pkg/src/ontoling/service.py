"""HTTP service exposing the game engine.

All endpoints live under ``/v1``.  Responses are JSON; domain errors come
back as ``{"error": {"code", "message"}}`` with a 4xx/5xx status per the
mapping below.  The service owns timestamps and persistence: every
mutation is written through to the session store, and passing submits are
appended to the result log.

Player-facing responses are redacted: no answer synset ids and no answer
lemma lists ever leave the server.
"""

from __future__ import annotations

import secrets
import socket
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import uvicorn
from fastapi import Body, FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import engine, store
from .errors import OntolingError
from .lexicon import Lexicon, lexicon_fingerprint, parse_lexicon, validate_lexicon

MAX_SEED = (1 << 64) - 1

# Error code -> HTTP status; 4xx for caller mistakes, 5xx for server faults.
ERROR_STATUS = {
    "EmptyPlayer": 400,
    "EmptyTerm": 400,
    "BadSeed": 400,
    "IncompletePlacement": 400,
    "TermNotInBank": 400,
    "UnknownSlot": 404,
    "NotFound": 404,
    "UnknownSynset": 404,
    "TermAlreadyPlaced": 409,
    "SessionNotInProgress": 409,
    "SessionCompleted": 409,
    "NothingPlaced": 409,
    "NotPassed": 409,
    "AlreadyCompleted": 409,
}


class BadSeedError(OntolingError):
    code = "BadSeed"


@dataclass
class ServiceConfig:
    lexicon_path: str
    data_dir: str | None = None
    bind: str = "127.0.0.1"
    port: int = 8000
    app_dir: str | None = None


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _parse_seed(raw: object) -> int:
    if raw is None:
        return secrets.randbits(64)
    if isinstance(raw, bool):
        raise BadSeedError("seed must be an integer or decimal string")
    if isinstance(raw, str):
        if not raw.isdigit():
            raise BadSeedError(f"seed {raw!r} is not a decimal integer")
        raw = int(raw)
    if not isinstance(raw, int):
        raise BadSeedError("seed must be an integer or decimal string")
    if not 0 <= raw <= MAX_SEED:
        raise BadSeedError(f"seed must be in 0..{MAX_SEED}")
    return raw


def _summary(session: engine.Session) -> dict:
    return {
        "session_id": session.session_id,
        "player": session.player,
        "lexicon_id": session.lexicon_id,
        "seed": str(session.base_seed),
        "level": session.current_level,
        "status": session.status.value,
        "history": [
            {
                "level": r.level,
                "score": r.score,
                "stars": r.stars,
                "submitted_at": r.submitted_at,
            }
            for r in session.history
        ],
    }


class SessionRegistry:
    """In-memory session cache over the store, with per-session locks."""

    def __init__(self, data_store: store.DataStore):
        self.store = data_store
        self._sessions: dict[str, engine.Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def lock_for(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            if session_id not in self._locks:
                self._locks[session_id] = threading.Lock()
            return self._locks[session_id]

    def add(self, session: engine.Session) -> None:
        with self._registry_lock:
            self._sessions[session.session_id] = session

    def get(self, session_id: str) -> engine.Session:
        with self._registry_lock:
            cached = self._sessions.get(session_id)
        if cached is not None:
            return cached
        record = self.store.load_session(session_id)  # NotFound -> 404
        with self._registry_lock:
            return self._sessions.setdefault(session_id, record.session)

    def persist(self, session: engine.Session) -> None:
        self.store.save_session(
            store.SessionRecord(session=session, saved_at=_now())
        )


def create_app(
    lex: Lexicon,
    lexicon_id: str,
    data_store: store.DataStore,
    app_dir: str | None = None,
) -> FastAPI:
    app = FastAPI(title="ontoling", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    registry = SessionRegistry(data_store)
    app.state.registry = registry
    app.state.lexicon = lex
    app.state.lexicon_id = lexicon_id

    @app.exception_handler(OntolingError)
    async def on_domain_error(request: Request, exc: OntolingError) -> JSONResponse:
        status = ERROR_STATUS.get(exc.code, 500)
        return JSONResponse(
            status_code=status,
            content={"error": {"code": exc.code, "message": str(exc)}},
        )

    @app.exception_handler(RequestValidationError)
    async def on_invalid_request(request: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(
            status_code=422,
            content={"error": {"code": "InvalidRequest", "message": str(exc.errors())}},
        )

    @app.get("/v1/health")
    def health() -> dict:
        return {
            "status": "ok",
            "lexicon_id": lexicon_id,
            "levels": engine.MAX_LEVEL,
        }

    @app.post("/v1/sessions", status_code=201)
    def create_session(body: dict = Body(...)) -> dict:
        player = body.get("player", "")
        if not isinstance(player, str):
            raise engine.EmptyPlayerError("player must be a string")
        seed = _parse_seed(body.get("seed"))
        session = engine.new_session(player, lex, lexicon_id, seed)
        registry.add(session)
        registry.persist(session)
        return {
            "session_id": session.session_id,
            "seed": str(session.base_seed),
            "view": engine.player_view(session),
        }

    @app.get("/v1/sessions/{session_id}")
    def get_session(session_id: str) -> dict:
        return _summary(registry.get(session_id))

    @app.get("/v1/sessions/{session_id}/puzzle")
    def get_puzzle(session_id: str) -> dict:
        return engine.player_view(registry.get(session_id))

    @app.put("/v1/sessions/{session_id}/placements/{slot_id}")
    def put_placement(session_id: str, slot_id: str, body: dict = Body(...)) -> dict:
        term = body.get("term")
        if not isinstance(term, str):
            raise engine.TermNotInBankError("body must carry a string 'term'")
        session = registry.get(session_id)
        with registry.lock_for(session_id):
            engine.place(session, slot_id, term)
            registry.persist(session)
            return engine.player_view(session)

    @app.delete("/v1/sessions/{session_id}/placements/{slot_id}")
    def delete_placement(session_id: str, slot_id: str) -> dict:
        session = registry.get(session_id)
        with registry.lock_for(session_id):
            engine.unplace(session, slot_id)
            registry.persist(session)
            return engine.player_view(session)

    @app.post("/v1/sessions/{session_id}/submit")
    def submit(session_id: str) -> dict:
        session = registry.get(session_id)
        with registry.lock_for(session_id):
            submitted_at = _now()
            _, report = engine.submit(session, submitted_at)
            registry.persist(session)
            if report.passed:
                data_store.append_result(
                    store.ResultLogEntry(
                        player=session.player,
                        session_id=session.session_id,
                        level=session.history[-1].level,
                        score=report.level_score,
                        stars=report.stars,
                        submitted_at=submitted_at,
                    )
                )
            doc = engine.report_to_dict(report)
            doc["status"] = session.status.value
            doc["level"] = session.history[-1].level if report.passed else session.current_level
            return doc

    @app.post("/v1/sessions/{session_id}/advance")
    def advance(session_id: str) -> dict:
        session = registry.get(session_id)
        with registry.lock_for(session_id):
            engine.advance(session, lex)
            registry.persist(session)
            return engine.player_view(session)

    @app.get("/v1/leaderboard")
    def leaderboard(limit: int | None = None) -> dict:
        entries = data_store.leaderboard(limit=limit)
        return {
            "entries": [
                {
                    "player": e.player,
                    "total_score": e.total_score,
                    "levels_completed": e.levels_completed,
                    "last_submission": e.last_submission,
                }
                for e in entries
            ]
        }

    if app_dir is not None and Path(app_dir).is_dir():
        app.mount("/app", StaticFiles(directory=app_dir, html=True), name="app")

    return app


def serve(config: ServiceConfig) -> None:
    """Validate the lexicon, bind the socket, print the address, serve.

    Fails fast (raising the underlying error) on an unreadable or invalid
    lexicon.  With port 0 the kernel assigns a free port; the printed
    address is the bound one, emitted before serving starts so wrappers
    can connect as soon as they read it.
    """
    text = Path(config.lexicon_path).read_text(encoding="utf-8")
    lex = parse_lexicon(text)
    problems = validate_lexicon(lex)
    if problems:
        # parse_lexicon already raises on the first violation; this guards
        # future drift between the two paths.
        raise OntolingError("; ".join(str(v) for v in problems))
    lexicon_id = lexicon_fingerprint(lex)
    data_store = store.DataStore(config.data_dir)
    app = create_app(lex, lexicon_id, data_store, app_dir=config.app_dir)

    family = socket.AF_INET6 if ":" in config.bind else socket.AF_INET
    sock = socket.socket(family, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    sock.bind((config.bind, config.port))
    # listen before printing so a wrapper that connects as soon as it reads
    # the line is queued in the backlog rather than refused
    sock.listen(128)
    host, port = sock.getsockname()[:2]
    print(f"listening on http://{host}:{port}", flush=True)

    server = uvicorn.Server(
        uvicorn.Config(app, log_level="warning", access_log=False)
    )
    server.run(sockets=[sock])
