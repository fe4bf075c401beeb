"""Game session state machine: placement, scoring, stars, progression.

A session walks the four built-in levels.  Placements are validated
against the current puzzle's banks, submission scores every slot (any
lemma of the slot's synset counts, not just the designated bank term),
and a passing score moves the session toward the next level.

The engine is clock-free: callers supply timestamps, so identical
operation sequences replay to identical results.
"""

from __future__ import annotations

import math
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from fractions import Fraction

from .errors import OntolingError
from .lexicon import Lexicon, normalize_term, render_expression
from .levels import Puzzle, builtin_level_specs, generate_puzzle, puzzle_to_dict
from .rng import derive_seed

MAX_LEVEL = len(builtin_level_specs())

STAR_THRESHOLDS = ((90, 3), (70, 2), (50, 1))


class EmptyPlayerError(OntolingError):
    code = "EmptyPlayer"


class UnknownSlotError(OntolingError):
    code = "UnknownSlot"


class TermNotInBankError(OntolingError):
    code = "TermNotInBank"


class TermAlreadyPlacedError(OntolingError):
    code = "TermAlreadyPlaced"


class SessionNotInProgressError(OntolingError):
    code = "SessionNotInProgress"


class SessionCompletedError(OntolingError):
    code = "SessionCompleted"


class NothingPlacedError(OntolingError):
    code = "NothingPlaced"


class IncompletePlacementError(OntolingError):
    code = "IncompletePlacement"

    def __init__(self, empty_slots: list[str]):
        super().__init__("slots without a placement: " + ", ".join(empty_slots))
        self.empty_slots = list(empty_slots)


class NotPassedError(OntolingError):
    code = "NotPassed"


class AlreadyCompletedError(OntolingError):
    code = "AlreadyCompleted"


class SessionStatus(str, Enum):
    IN_PROGRESS = "in_progress"
    AWAITING_ADVANCE = "awaiting_advance"
    COMPLETED = "completed"


@dataclass(frozen=True)
class LevelResult:
    level: int
    score: int
    stars: int
    submitted_at: str


@dataclass(frozen=True)
class SlotVerdict:
    slot_id: str
    placed: str | None
    correct: bool
    expressions: tuple[str, ...]


@dataclass(frozen=True)
class NetworkScore:
    network_id: str
    correct_count: int
    slot_count: int
    score_percent: int


@dataclass(frozen=True)
class ScoreReport:
    per_network: tuple[NetworkScore, ...]
    level_score: int
    stars: int
    passed: bool
    verdicts: tuple[SlotVerdict, ...]


@dataclass(frozen=True)
class LeaderboardEntry:
    player: str
    total_score: int
    levels_completed: int
    last_submission: str


@dataclass
class Session:
    session_id: str
    player: str
    lexicon_id: str
    base_seed: int
    current_level: int
    status: SessionStatus
    puzzle: Puzzle
    placements: dict[str, str] = field(default_factory=dict)
    history: list[LevelResult] = field(default_factory=list)


def new_session(
    player: str,
    lex: Lexicon,
    lexicon_id: str,
    base_seed: int,
    session_id: str | None = None,
) -> Session:
    """Start a fresh session at level 1.

    Each level's puzzle seed is derived from the session's base seed and
    the level number, so one base seed reproduces the whole run.
    """
    name = player.strip()
    if not name:
        raise EmptyPlayerError("player name must be non-empty")
    spec = builtin_level_specs()[0]
    puzzle = generate_puzzle(lex, spec, derive_seed(base_seed, 1))
    return Session(
        session_id=session_id if session_id is not None else uuid.uuid4().hex,
        player=name,
        lexicon_id=lexicon_id,
        base_seed=base_seed,
        current_level=1,
        status=SessionStatus.IN_PROGRESS,
        puzzle=puzzle,
    )


def place(session: Session, slot_id: str, term: str) -> Session:
    """Put a bank term into a slot, replacing any prior occupant."""
    if session.status is not SessionStatus.IN_PROGRESS:
        raise SessionNotInProgressError(f"session status is {session.status.value}")
    network = session.puzzle.network_of_slot(slot_id)
    if network is None:
        raise UnknownSlotError(f"no slot {slot_id!r} in the current puzzle")
    normalized = normalize_term(term)
    bank = session.puzzle.banks[network.network_id]
    if normalized not in bank.terms:
        raise TermNotInBankError(
            f"{normalized!r} is not in the bank of network {network.network_id}"
        )
    for other in network.slots:
        if other.slot_id != slot_id and session.placements.get(other.slot_id) == normalized:
            raise TermAlreadyPlacedError(
                f"{normalized!r} is already placed in slot {other.slot_id}"
            )
    session.placements[slot_id] = normalized
    return session


def unplace(session: Session, slot_id: str) -> Session:
    """Remove a slot's placement, returning the term to the bank."""
    if session.puzzle.slot(slot_id) is None:
        raise UnknownSlotError(f"no slot {slot_id!r} in the current puzzle")
    if slot_id not in session.placements:
        raise NothingPlacedError(f"slot {slot_id} has no placement")
    del session.placements[slot_id]
    return session


def _round_half_up(value: Fraction) -> int:
    return math.floor(value + Fraction(1, 2))


def stars_for_score(level_score: int) -> int:
    for threshold, stars in STAR_THRESHOLDS:
        if level_score >= threshold:
            return stars
    return 0


def score_placements(puzzle: Puzzle, placements: dict[str, str]) -> ScoreReport:
    """Score a complete placement map against the puzzle's answer data.

    A slot is correct when the placed term is any lemma of its synset.
    Network score is the percentage of correct slots; the level score is
    the mean of network scores; both round half-up to integers.
    """
    per_network: list[NetworkScore] = []
    verdicts: list[SlotVerdict] = []
    for network in puzzle.networks:
        correct_count = 0
        for slot in network.slots:
            placed = placements.get(slot.slot_id)
            correct = placed is not None and placed in slot.answer_lemmas
            if correct:
                correct_count += 1
            expressions = tuple(
                render_expression(
                    edge.kind,
                    placements.get(edge.source, "?"),
                    placements.get(edge.target, "?"),
                    puzzle.slot(edge.source).pos,
                )
                for edge in network.edges
                if slot.slot_id in (edge.source, edge.target)
            )
            verdicts.append(
                SlotVerdict(
                    slot_id=slot.slot_id,
                    placed=placed,
                    correct=correct,
                    expressions=expressions,
                )
            )
        slot_count = len(network.slots)
        percent = _round_half_up(Fraction(100 * correct_count, slot_count))
        per_network.append(
            NetworkScore(
                network_id=network.network_id,
                correct_count=correct_count,
                slot_count=slot_count,
                score_percent=percent,
            )
        )
    level_score = _round_half_up(
        Fraction(sum(ns.score_percent for ns in per_network), len(per_network))
    )
    stars = stars_for_score(level_score)
    return ScoreReport(
        per_network=tuple(per_network),
        level_score=level_score,
        stars=stars,
        passed=stars >= 1,
        verdicts=tuple(verdicts),
    )


def report_to_dict(report: ScoreReport) -> dict:
    """Structured-document form of a ScoreReport (service API and CLI)."""
    return {
        "per_network": [
            {
                "network_id": ns.network_id,
                "correct_count": ns.correct_count,
                "slot_count": ns.slot_count,
                "score_percent": ns.score_percent,
            }
            for ns in report.per_network
        ],
        "level_score": report.level_score,
        "stars": report.stars,
        "passed": report.passed,
        "verdicts": [
            {
                "slot_id": v.slot_id,
                "placed": v.placed,
                "correct": v.correct,
                "expressions": list(v.expressions),
            }
            for v in report.verdicts
        ],
    }


def submit(session: Session, submitted_at: str) -> tuple[Session, ScoreReport]:
    """Validate all placements and score the level.

    Passing (at least one star) locks the result into history and moves
    the session on; failing keeps the level in progress with placements
    retained so the player can rearrange and resubmit.
    """
    if session.status is not SessionStatus.IN_PROGRESS:
        raise SessionNotInProgressError(f"session status is {session.status.value}")
    empty = [
        slot.slot_id
        for slot in session.puzzle.all_slots()
        if slot.slot_id not in session.placements
    ]
    if empty:
        raise IncompletePlacementError(empty)
    report = score_placements(session.puzzle, session.placements)
    if report.passed:
        session.history.append(
            LevelResult(
                level=session.current_level,
                score=report.level_score,
                stars=report.stars,
                submitted_at=submitted_at,
            )
        )
        if session.current_level >= MAX_LEVEL:
            session.status = SessionStatus.COMPLETED
        else:
            session.status = SessionStatus.AWAITING_ADVANCE
    return session, report


def advance(session: Session, lex: Lexicon) -> Session:
    """Move a passed session to the next level with a fresh puzzle."""
    if session.status is SessionStatus.COMPLETED:
        raise AlreadyCompletedError("all levels are already completed")
    if session.status is SessionStatus.IN_PROGRESS:
        raise NotPassedError("current level has not been passed yet")
    next_level = session.current_level + 1
    spec = builtin_level_specs()[next_level - 1]
    session.puzzle = generate_puzzle(lex, spec, derive_seed(session.base_seed, next_level))
    session.current_level = next_level
    session.placements = {}
    session.status = SessionStatus.IN_PROGRESS
    return session


def player_view(session: Session) -> dict:
    """Redacted session view for clients: no answer data, banks included."""
    if session.status is SessionStatus.COMPLETED:
        raise SessionCompletedError("session has completed all levels")
    return {
        "session_id": session.session_id,
        "player": session.player,
        "lexicon_id": session.lexicon_id,
        "level": session.current_level,
        "status": session.status.value,
        "puzzle": puzzle_to_dict(session.puzzle, with_answers=False),
        "placements": dict(sorted(session.placements.items())),
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


def parse_timestamp(value: str) -> datetime:
    moment = datetime.fromisoformat(value.replace("Z", "+00:00"))
    if moment.tzinfo is None:
        moment = moment.replace(tzinfo=timezone.utc)
    return moment


def winner(entries: list[LeaderboardEntry]) -> str | None:
    """Winning player: highest total, earlier submission and name break ties."""
    if not entries:
        return None
    best = min(
        entries,
        key=lambda e: (-e.total_score, parse_timestamp(e.last_submission), e.player),
    )
    return best.player
