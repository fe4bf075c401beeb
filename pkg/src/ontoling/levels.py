"""Level definitions and deterministic puzzle generation.

A puzzle is sampled from a lexicon under the constraints of a
:class:`LevelSpec`: connected synset networks of bounded size with required
part-of-speech and relation-kind variety, plus one term bank per network
(the designated answer for every slot and a fixed number of distractors).

Generation is a pure function of (lexicon, spec, seed): all randomness
comes from one :class:`~ontoling.rng.SplitMix64` stream, every candidate
collection is iterated in sorted order, and restarts on constraint misses
consume the same stream, so a seed fully determines the puzzle.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple

from .errors import OntolingError
from .lexicon import Lexicon, PartOfSpeech, Relation, RelationKind, Violation
from .rng import SplitMix64

RESTART_BUDGET = 1000

# Fixed order for single-POS network assignment on level 1.
LEVEL1_POS_ORDER = (
    PartOfSpeech.NOUN,
    PartOfSpeech.VERB,
    PartOfSpeech.ADJECTIVE,
    PartOfSpeech.ADVERB,
)


class UnsatisfiableError(OntolingError):
    code = "Unsatisfiable"


class DisjointnessFailureError(OntolingError):
    code = "DisjointnessFailure"


class InsufficientDistractorsError(OntolingError):
    code = "InsufficientDistractors"

    def __init__(self, needed: int, available: int):
        super().__init__(f"need {needed} distractors, only {available} eligible")
        self.needed = needed
        self.available = available


class Range(NamedTuple):
    min: int
    max: int


@dataclass(frozen=True)
class LevelSpec:
    """Declarative constraints for the networks of one level."""

    level: int
    network_count: int
    pos_kinds_per_network: int
    relation_kinds_per_network: Range
    allowed_kinds: frozenset[RelationKind]
    nodes_per_network: Range
    distractors_per_network: int

    def __post_init__(self):
        if self.level < 1:
            raise ValueError("level must be >= 1")
        if self.network_count < 1:
            raise ValueError("network_count must be >= 1")
        if self.nodes_per_network.min < 2:
            raise ValueError("nodes_per_network.min must be >= 2")
        if not 1 <= self.pos_kinds_per_network <= 4:
            raise ValueError("pos_kinds_per_network must be in 1..4")
        if not self.allowed_kinds:
            raise ValueError("allowed_kinds must be non-empty")
        if self.distractors_per_network < 0:
            raise ValueError("distractors_per_network must be >= 0")


ALL_KINDS = frozenset(RelationKind)


def builtin_level_specs() -> list[LevelSpec]:
    """The four built-in levels, in order of increasing difficulty.

    Level 1 plays four single-POS networks joined only by word-for edges
    (one network per part of speech, in fixed order noun, verb, adjective,
    adverb); later levels mix parts of speech and relation kinds in fewer,
    larger networks.
    """
    return [
        LevelSpec(
            level=1,
            network_count=4,
            pos_kinds_per_network=1,
            relation_kinds_per_network=Range(1, 1),
            allowed_kinds=frozenset({RelationKind.WORD_FOR}),
            nodes_per_network=Range(3, 5),
            distractors_per_network=2,
        ),
        LevelSpec(
            level=2,
            network_count=2,
            pos_kinds_per_network=2,
            relation_kinds_per_network=Range(2, 2),
            allowed_kinds=ALL_KINDS,
            nodes_per_network=Range(4, 6),
            distractors_per_network=3,
        ),
        LevelSpec(
            level=3,
            network_count=1,
            pos_kinds_per_network=4,
            relation_kinds_per_network=Range(2, 7),
            allowed_kinds=ALL_KINDS,
            nodes_per_network=Range(6, 9),
            distractors_per_network=4,
        ),
        LevelSpec(
            level=4,
            network_count=1,
            pos_kinds_per_network=4,
            relation_kinds_per_network=Range(3, 7),
            allowed_kinds=ALL_KINDS,
            nodes_per_network=Range(10, 14),
            distractors_per_network=6,
        ),
    ]


@dataclass(frozen=True)
class Slot:
    """One definition slot.  synset_id and answer_lemmas stay server-side.

    answer_lemmas keeps the synset's lemma order: the first entry is the
    designated answer that the term bank carries; any of them counts as a
    correct placement.
    """

    slot_id: str
    synset_id: str
    pos: PartOfSpeech
    gloss: str
    examples: tuple[str, ...]
    answer_lemmas: tuple[str, ...]


@dataclass(frozen=True)
class Edge:
    kind: RelationKind
    source: str  # slot_id
    target: str  # slot_id


@dataclass(frozen=True)
class Network:
    network_id: str
    slots: tuple[Slot, ...]
    edges: tuple[Edge, ...]

    def slot_ids(self) -> list[str]:
        return [slot.slot_id for slot in self.slots]

    def synset_ids(self) -> set[str]:
        return {slot.synset_id for slot in self.slots}


@dataclass(frozen=True)
class TermBank:
    terms: tuple[str, ...]


@dataclass(frozen=True)
class Puzzle:
    puzzle_id: str
    level: int
    seed: int
    networks: tuple[Network, ...]
    banks: dict[str, TermBank]

    def network_of_slot(self, slot_id: str) -> Network | None:
        for network in self.networks:
            if any(slot.slot_id == slot_id for slot in network.slots):
                return network
        return None

    def slot(self, slot_id: str) -> Slot | None:
        for network in self.networks:
            for slot in network.slots:
                if slot.slot_id == slot_id:
                    return slot
        return None

    def all_slots(self) -> list[Slot]:
        return [slot for network in self.networks for slot in network.slots]


def _incident_index(
    lex: Lexicon, allowed: frozenset[RelationKind]
) -> dict[str, list[tuple[Relation, str]]]:
    """id -> [(relation, opposite endpoint id)] for allowed kinds, sorted."""
    index: dict[str, list[tuple[Relation, str]]] = {sid: [] for sid in lex.synsets}
    for rel in lex.relations:
        if rel.kind not in allowed:
            continue
        if rel.source in index and rel.target in index:
            index[rel.source].append((rel, rel.target))
            index[rel.target].append((rel, rel.source))
    for entries in index.values():
        entries.sort(key=lambda item: item[0].sort_key)
    return index


def sample_network(
    lex: Lexicon,
    spec: LevelSpec,
    pos_constraint: PartOfSpeech | None,
    rng: SplitMix64,
    network_id: str = "n1",
) -> Network:
    """Sample one network satisfying ``spec`` from the lexicon.

    A uniformly chosen eligible seed synset is grown breadth-first over
    edges of allowed kinds, each step picking uniformly among frontier
    edges, until a node-count target drawn from the spec's range is
    reached.  Constraint misses restart the attempt; the budget is
    RESTART_BUDGET attempts.
    """
    candidates = sorted(
        sid
        for sid, syn in lex.synsets.items()
        if pos_constraint is None or syn.pos is pos_constraint
    )
    if not candidates:
        raise UnsatisfiableError(
            f"level {spec.level}: no synsets eligible as network seeds"
            + (f" for pos {pos_constraint.value}" if pos_constraint else "")
        )
    incident = _incident_index(lex, spec.allowed_kinds)

    misses: dict[str, int] = {}
    for _ in range(RESTART_BUDGET):
        seed_id = rng.choice(candidates)
        target_size = rng.randint(spec.nodes_per_network.min, spec.nodes_per_network.max)

        chosen: list[str] = [seed_id]
        chosen_set = {seed_id}
        lemma_pool = set(lex.synsets[seed_id].lemmas)
        grew = True
        while len(chosen) < target_size and grew:
            frontier: list[tuple[Relation, str]] = []
            for node in chosen:
                for rel, other_id in incident[node]:
                    if other_id in chosen_set:
                        continue
                    other = lex.synsets[other_id]
                    if pos_constraint is not None and other.pos is not pos_constraint:
                        continue
                    if lemma_pool.intersection(other.lemmas):
                        continue
                    frontier.append((rel, other_id))
            if not frontier:
                grew = False
                break
            frontier.sort(key=lambda item: (item[0].sort_key, item[1]))
            _, new_id = rng.choice(frontier)
            chosen.append(new_id)
            chosen_set.add(new_id)
            lemma_pool.update(lex.synsets[new_id].lemmas)

        if len(chosen) < target_size:
            misses["frontier exhausted"] = misses.get("frontier exhausted", 0) + 1
            continue

        # Induced edges among chosen nodes, restricted to allowed kinds.
        induced = [
            rel
            for rel in lex.relations
            if rel.kind in spec.allowed_kinds
            and rel.source in chosen_set
            and rel.target in chosen_set
        ]
        pos_kinds = {lex.synsets[sid].pos for sid in chosen}
        if len(pos_kinds) != spec.pos_kinds_per_network:
            misses["pos kind count"] = misses.get("pos kind count", 0) + 1
            continue
        rel_kinds = {rel.kind for rel in induced}
        lo, hi = spec.relation_kinds_per_network
        if not lo <= len(rel_kinds) <= hi:
            misses["relation kind count"] = misses.get("relation kind count", 0) + 1
            continue

        slot_ids = {sid: f"{network_id}-s{i + 1}" for i, sid in enumerate(chosen)}
        slots = tuple(
            Slot(
                slot_id=slot_ids[sid],
                synset_id=sid,
                pos=lex.synsets[sid].pos,
                gloss=lex.synsets[sid].gloss,
                examples=lex.synsets[sid].examples,
                answer_lemmas=lex.synsets[sid].lemmas,
            )
            for sid in chosen
        )
        edges = tuple(
            Edge(kind=rel.kind, source=slot_ids[rel.source], target=slot_ids[rel.target])
            for rel in induced
        )
        return Network(network_id=network_id, slots=slots, edges=edges)

    detail = ", ".join(f"{reason} x{count}" for reason, count in sorted(misses.items()))
    raise UnsatisfiableError(
        f"level {spec.level}: no network satisfying nodes {spec.nodes_per_network.min}-"
        f"{spec.nodes_per_network.max}, {spec.pos_kinds_per_network} pos kind(s), "
        f"{spec.relation_kinds_per_network.min}-{spec.relation_kinds_per_network.max} "
        f"relation kind(s) within {RESTART_BUDGET} restarts ({detail or 'no attempts viable'})"
    )


def pick_distractors(
    lex: Lexicon, network: Network, count: int, rng: SplitMix64
) -> list[str]:
    """Draw ``count`` distractor terms for ``network`` without replacement.

    Eligible terms are lemmas of lexicon synsets whose POS occurs in the
    network, excluding every lemma (answer or synonym) of the network's own
    slots.
    """
    if count == 0:
        return []
    network_pos = {slot.pos for slot in network.slots}
    excluded = set()
    for slot in network.slots:
        excluded.update(slot.answer_lemmas)
    pool = sorted(
        {
            lemma
            for syn in lex.synsets.values()
            if syn.pos in network_pos
            for lemma in syn.lemmas
        }
        - excluded
    )
    if len(pool) < count:
        raise InsufficientDistractorsError(needed=count, available=len(pool))
    return rng.sample(pool, count)


def generate_puzzle(lex: Lexicon, spec: LevelSpec, seed: int) -> Puzzle:
    """Generate the puzzle for (lexicon, spec, seed) — deterministic.

    Networks are sampled one by one and must be pairwise synset-disjoint
    (overlapping draws are retried against the same rng stream).  Each
    bank holds one designated answer per slot — the slot synset's first
    lemma — plus the spec's distractor count, shuffled.
    """
    rng = SplitMix64(seed)

    if spec.level == 1 and spec.pos_kinds_per_network == 1:
        assignments: list[PartOfSpeech | None] = [
            LEVEL1_POS_ORDER[i % len(LEVEL1_POS_ORDER)] for i in range(spec.network_count)
        ]
    else:
        assignments = [None] * spec.network_count

    networks: list[Network] = []
    used_synsets: set[str] = set()
    for index in range(spec.network_count):
        network_id = f"n{index + 1}"
        for _ in range(RESTART_BUDGET):
            candidate = sample_network(
                lex, spec, assignments[index], rng, network_id=network_id
            )
            if not candidate.synset_ids() & used_synsets:
                break
        else:
            raise DisjointnessFailureError(
                f"level {spec.level}: could not draw {spec.network_count} synset-disjoint "
                f"networks within {RESTART_BUDGET} retries"
            )
        used_synsets |= candidate.synset_ids()
        networks.append(candidate)

    banks: dict[str, TermBank] = {}
    for network in networks:
        answers = [lex.synsets[slot.synset_id].lemmas[0] for slot in network.slots]
        terms = answers + pick_distractors(lex, network, spec.distractors_per_network, rng)
        rng.shuffle(terms)
        banks[network.network_id] = TermBank(terms=tuple(terms))

    puzzle = Puzzle(
        puzzle_id=f"pz{spec.level}-{seed & ((1 << 64) - 1):016x}",
        level=spec.level,
        seed=seed,
        networks=tuple(networks),
        banks=banks,
    )
    problems = validate_puzzle(puzzle, lex, spec)
    if problems:
        raise RuntimeError(
            "generator postcondition violated: " + "; ".join(str(v) for v in problems)
        )
    return puzzle


def _connected(slot_ids: list[str], edges: tuple[Edge, ...]) -> bool:
    if not slot_ids:
        return True
    adjacency: dict[str, set[str]] = {sid: set() for sid in slot_ids}
    for edge in edges:
        if edge.source in adjacency and edge.target in adjacency:
            adjacency[edge.source].add(edge.target)
            adjacency[edge.target].add(edge.source)
    seen = {slot_ids[0]}
    stack = [slot_ids[0]]
    while stack:
        node = stack.pop()
        for nxt in adjacency[node]:
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return len(seen) == len(slot_ids)


def validate_puzzle(puzzle: Puzzle, lex: Lexicon, spec: LevelSpec) -> list[Violation]:
    """All spec/invariant violations of ``puzzle``; empty iff conformant."""
    violations: list[Violation] = []

    if puzzle.level != spec.level:
        violations.append(
            Violation("LevelMismatch", f"puzzle level {puzzle.level} != spec level {spec.level}")
        )
    if len(puzzle.networks) != spec.network_count:
        violations.append(
            Violation(
                "NetworkCountMismatch",
                f"{len(puzzle.networks)} networks, spec wants {spec.network_count}",
            )
        )

    seen_synsets: dict[str, str] = {}
    for index, network in enumerate(puzzle.networks):
        nid = network.network_id
        slot_ids = network.slot_ids()
        relation_set = {(r.kind, r.source, r.target) for r in lex.relations}
        synset_of = {slot.slot_id: slot.synset_id for slot in network.slots}

        node_count = len(network.slots)
        if not spec.nodes_per_network.min <= node_count <= spec.nodes_per_network.max:
            violations.append(
                Violation("NodeCountOutOfRange", f"network {nid} has {node_count} slots")
            )

        for slot in network.slots:
            if slot.synset_id not in lex.synsets:
                violations.append(
                    Violation("UnknownSynset", f"slot {slot.slot_id} references {slot.synset_id!r}")
                )
                continue
            syn = lex.synsets[slot.synset_id]
            if set(slot.answer_lemmas) != set(syn.lemmas):
                violations.append(
                    Violation("AnswerLemmasMismatch", f"slot {slot.slot_id} answer lemmas diverge")
                )
            if slot.pos is not syn.pos or slot.gloss != syn.gloss:
                violations.append(
                    Violation("SlotMetadataMismatch", f"slot {slot.slot_id} metadata diverges")
                )
            prior = seen_synsets.get(slot.synset_id)
            if prior is not None and prior != nid:
                violations.append(
                    Violation(
                        "NetworksShareSynset",
                        f"synset {slot.synset_id} appears in networks {prior} and {nid}",
                    )
                )
            seen_synsets[slot.synset_id] = nid

        for edge in network.edges:
            if edge.source not in synset_of or edge.target not in synset_of:
                violations.append(
                    Violation("EdgeEndpointUnknown", f"network {nid} edge references unknown slot")
                )
                continue
            if edge.kind not in spec.allowed_kinds:
                violations.append(
                    Violation("KindNotAllowed", f"network {nid} uses {edge.kind.value}")
                )
            mirrored = (edge.kind, synset_of[edge.source], synset_of[edge.target])
            if mirrored not in relation_set:
                violations.append(
                    Violation(
                        "EdgeNotInLexicon",
                        f"network {nid} edge {edge.kind.value} "
                        f"{synset_of[edge.source]} -> {synset_of[edge.target]} not in lexicon",
                    )
                )

        if not _connected(slot_ids, network.edges):
            violations.append(Violation("DisconnectedNetwork", f"network {nid} is not connected"))

        pos_kinds = {slot.pos for slot in network.slots}
        if len(pos_kinds) != spec.pos_kinds_per_network:
            violations.append(
                Violation(
                    "PosKindCountMismatch",
                    f"network {nid} has {len(pos_kinds)} pos kinds, "
                    f"spec wants {spec.pos_kinds_per_network}",
                )
            )
        rel_kinds = {edge.kind for edge in network.edges}
        lo, hi = spec.relation_kinds_per_network
        if not lo <= len(rel_kinds) <= hi:
            violations.append(
                Violation(
                    "RelationKindCountOutOfRange",
                    f"network {nid} has {len(rel_kinds)} relation kinds, spec wants {lo}-{hi}",
                )
            )

        if spec.level == 1 and spec.pos_kinds_per_network == 1:
            expected_pos = LEVEL1_POS_ORDER[index % len(LEVEL1_POS_ORDER)]
            if any(slot.pos is not expected_pos for slot in network.slots):
                violations.append(
                    Violation(
                        "PosAssignmentMismatch",
                        f"network {nid} must be all {expected_pos.value}",
                    )
                )

    bank_ids = set(puzzle.banks)
    network_ids = {network.network_id for network in puzzle.networks}
    for missing in sorted(network_ids - bank_ids):
        violations.append(Violation("MissingBank", f"network {missing} has no bank"))
    for extra in sorted(bank_ids - network_ids):
        violations.append(Violation("UnknownBank", f"bank {extra} matches no network"))

    for network in puzzle.networks:
        bank = puzzle.banks.get(network.network_id)
        if bank is None:
            continue
        expected_len = len(network.slots) + spec.distractors_per_network
        if len(bank.terms) != expected_len:
            violations.append(
                Violation(
                    "BankSizeMismatch",
                    f"bank {network.network_id} has {len(bank.terms)} terms, "
                    f"expected {expected_len}",
                )
            )
        if len(set(bank.terms)) != len(bank.terms):
            violations.append(
                Violation("DuplicateBankTerm", f"bank {network.network_id} repeats a term")
            )
        for slot in network.slots:
            matches = [term for term in bank.terms if term in slot.answer_lemmas]
            if not matches:
                violations.append(
                    Violation("MissingAnswer", f"bank lacks an answer for slot {slot.slot_id}")
                )
            elif len(matches) > 1:
                violations.append(
                    Violation(
                        "AmbiguousAnswer",
                        f"bank offers {len(matches)} answers for slot {slot.slot_id}",
                    )
                )

    return violations


def puzzle_to_dict(puzzle: Puzzle, with_answers: bool = False) -> dict:
    """Player-facing document form of a puzzle.

    The base form never exposes slot answers.  With ``with_answers`` the
    document additionally carries ``answers`` (slot -> synset id) and
    ``answer_lemmas`` (slot -> lemmas, designated answer first), enough to
    grade placements offline.  The 64-bit seed is written as a decimal
    string so consumers without 64-bit integers keep full precision.
    """
    doc: dict = {
        "puzzle_id": puzzle.puzzle_id,
        "level": puzzle.level,
        "seed": str(puzzle.seed),
        "networks": [
            {
                "network_id": network.network_id,
                "slots": [
                    {
                        "slot_id": slot.slot_id,
                        "pos": slot.pos.value,
                        "gloss": slot.gloss,
                        "examples": list(slot.examples),
                    }
                    for slot in network.slots
                ],
                "edges": [
                    {"kind": edge.kind.value, "source": edge.source, "target": edge.target}
                    for edge in network.edges
                ],
            }
            for network in puzzle.networks
        ],
        "banks": {
            network.network_id: list(puzzle.banks[network.network_id].terms)
            for network in puzzle.networks
            if network.network_id in puzzle.banks
        },
    }
    if with_answers:
        doc["answers"] = {
            slot.slot_id: slot.synset_id for slot in puzzle.all_slots()
        }
        doc["answer_lemmas"] = {
            slot.slot_id: list(slot.answer_lemmas) for slot in puzzle.all_slots()
        }
    return doc


def puzzle_to_json(puzzle: Puzzle, with_answers: bool = False) -> str:
    return json.dumps(puzzle_to_dict(puzzle, with_answers=with_answers), indent=2) + "\n"


def puzzle_from_dict(doc: dict) -> Puzzle:
    """Rebuild a Puzzle from its with-answers document form."""
    answers: dict[str, str] = doc["answers"]
    answer_lemmas: dict[str, list[str]] = doc["answer_lemmas"]
    networks = []
    for net_doc in doc["networks"]:
        slots = tuple(
            Slot(
                slot_id=slot_doc["slot_id"],
                synset_id=answers[slot_doc["slot_id"]],
                pos=PartOfSpeech(slot_doc["pos"]),
                gloss=slot_doc["gloss"],
                examples=tuple(slot_doc["examples"]),
                answer_lemmas=tuple(answer_lemmas[slot_doc["slot_id"]]),
            )
            for slot_doc in net_doc["slots"]
        )
        edges = tuple(
            Edge(
                kind=RelationKind(edge_doc["kind"]),
                source=edge_doc["source"],
                target=edge_doc["target"],
            )
            for edge_doc in net_doc["edges"]
        )
        networks.append(Network(network_id=net_doc["network_id"], slots=slots, edges=edges))
    banks = {
        network_id: TermBank(terms=tuple(terms)) for network_id, terms in doc["banks"].items()
    }
    return Puzzle(
        puzzle_id=doc["puzzle_id"],
        level=int(doc["level"]),
        seed=int(doc["seed"]),
        networks=tuple(networks),
        banks=banks,
    )
