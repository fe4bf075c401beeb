"""Lexical-ontology data model, file format, and graph validation.

A :class:`Lexicon` is an immutable graph of synsets (concepts carrying a
part of speech, a gloss, and one or more synonymous lemmas) joined by typed
relations.  The module owns:

* term normalization (players type terms; lemmas are stored normalized),
* the line-oriented lexicon file format (parse + canonical serialization),
* well-formedness validation (referential integrity, POS compatibility,
  taxonomy acyclicity),
* neighbor queries and the natural-language expression templates used to
  read an edge back as a sentence.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from enum import Enum

from .errors import OntolingError


class PartOfSpeech(str, Enum):
    NOUN = "noun"
    VERB = "verb"
    ADJECTIVE = "adj"
    ADVERB = "adv"


class RelationKind(str, Enum):
    """Typed edge kinds.

    Direction convention: the edge source is the more specific / contained
    element (hyponym, instance, member, part, substance, derived word,
    contained word) and the target is the more general / containing one.
    """

    KIND_OF = "kind_of"
    INSTANCE_OF = "instance_of"
    MEMBER_OF = "member_of"
    PART_OF = "part_of"
    SUBSTANCE_OF = "substance_of"
    DERIVATION = "derivation"
    WORD_FOR = "word_for"


# Kinds whose edges form the taxonomy and must stay acyclic.
TAXONOMY_KINDS = frozenset({RelationKind.KIND_OF, RelationKind.INSTANCE_OF})

# Kinds restricted to noun endpoints on both sides.
_NOUN_ONLY_KINDS = frozenset(
    {
        RelationKind.INSTANCE_OF,
        RelationKind.MEMBER_OF,
        RelationKind.PART_OF,
        RelationKind.SUBSTANCE_OF,
    }
)

# Characters str.splitlines treats as line boundaries.  The file format is
# line-oriented, so text fields containing any of these cannot round-trip.
_LINE_BOUNDARIES = frozenset("\n\r\x0b\x0c\x1c\x1d\x1e\x85  ")


class EmptyTermError(OntolingError):
    code = "EmptyTerm"


class LexiconSyntaxError(OntolingError):
    code = "SyntaxError"

    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class DuplicateIdError(OntolingError):
    code = "DuplicateId"

    def __init__(self, synset_id: str):
        super().__init__(f"duplicate synset id {synset_id!r}")
        self.synset_id = synset_id


class DanglingEndpointError(OntolingError):
    code = "DanglingEndpoint"

    def __init__(self, relation: "Relation", missing_id: str):
        super().__init__(
            f"relation {relation.kind.value} {relation.source} -> {relation.target} "
            f"references unknown synset {missing_id!r}"
        )
        self.relation = relation
        self.missing_id = missing_id


class PosViolationError(OntolingError):
    code = "PosViolation"

    def __init__(self, relation: "Relation", detail: str):
        super().__init__(
            f"relation {relation.kind.value} {relation.source} -> {relation.target}: {detail}"
        )
        self.relation = relation


class SelfLoopError(OntolingError):
    code = "SelfLoop"

    def __init__(self, relation: "Relation"):
        super().__init__(f"relation {relation.kind.value} loops on {relation.source!r}")
        self.relation = relation


class DuplicateRelationError(OntolingError):
    code = "DuplicateRelation"

    def __init__(self, relation: "Relation"):
        super().__init__(
            f"duplicate relation {relation.kind.value} {relation.source} -> {relation.target}"
        )
        self.relation = relation


class TaxonomyCycleError(OntolingError):
    code = "TaxonomyCycle"

    def __init__(self, cycle: list[str]):
        super().__init__("taxonomy cycle: " + " -> ".join(cycle))
        self.cycle = cycle


class EmptyLexiconError(OntolingError):
    code = "EmptyLexicon"

    def __init__(self):
        super().__init__("lexicon declares no synsets")


class UnknownSynsetError(OntolingError):
    code = "UnknownSynset"

    def __init__(self, synset_id: str):
        super().__init__(f"unknown synset id {synset_id!r}")
        self.synset_id = synset_id


class InvalidCombinationError(OntolingError):
    code = "InvalidCombination"


def normalize_term(raw: str) -> str:
    """Normalize a term: lowercase, trim, fold whitespace/underscore runs.

    Runs of internal whitespace and underscores collapse to a single space,
    so typed input, WordNet-style underscore lemmas, and display forms all
    map to one canonical spelling.
    """
    parts = raw.lower().replace("_", " ").split()
    if not parts:
        raise EmptyTermError(f"term {raw!r} is empty after normalization")
    return " ".join(parts)


@dataclass(frozen=True)
class Synset:
    id: str
    pos: PartOfSpeech
    gloss: str
    lemmas: tuple[str, ...]
    examples: tuple[str, ...] = ()


@dataclass(frozen=True, order=True)
class Relation:
    kind: RelationKind
    source: str
    target: str

    @property
    def sort_key(self) -> tuple[str, str, str]:
        return (self.kind.value, self.source, self.target)


@dataclass(frozen=True)
class Violation:
    """One broken invariant: a stable rule code plus the offending element."""

    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


@dataclass(frozen=True)
class Lexicon:
    """Immutable synset graph.

    Relations are stored canonically sorted by (kind, source, target), so
    two lexicons with the same synsets and the same relation set compare
    equal regardless of declaration order.
    """

    synsets: dict[str, Synset]
    relations: tuple[Relation, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "relations", tuple(sorted(self.relations, key=lambda r: r.sort_key))
        )

    def synset(self, synset_id: str) -> Synset:
        try:
            return self.synsets[synset_id]
        except KeyError:
            raise UnknownSynsetError(synset_id) from None


def pos_compatible(kind: RelationKind, source_pos: PartOfSpeech, target_pos: PartOfSpeech) -> bool:
    """POS compatibility rule for one edge."""
    if kind is RelationKind.KIND_OF:
        return source_pos == target_pos and source_pos in (
            PartOfSpeech.NOUN,
            PartOfSpeech.VERB,
        )
    if kind in _NOUN_ONLY_KINDS:
        return source_pos is PartOfSpeech.NOUN and target_pos is PartOfSpeech.NOUN
    return True  # Derivation and WordFor allow any POS pair


def find_taxonomy_cycle(lex: Lexicon) -> list[str] | None:
    """First cycle on the {KindOf, InstanceOf} subgraph, as an id path, or None.

    Iterative three-color DFS over ids in sorted order; the returned path
    starts and ends on the same id.
    """
    adjacency: dict[str, list[str]] = {sid: [] for sid in lex.synsets}
    for rel in lex.relations:
        if rel.kind in TAXONOMY_KINDS and rel.source in adjacency and rel.target in adjacency:
            adjacency[rel.source].append(rel.target)
    for targets in adjacency.values():
        targets.sort()

    WHITE, GRAY, BLACK = 0, 1, 2
    color = {sid: WHITE for sid in adjacency}
    for start in sorted(adjacency):
        if color[start] != WHITE:
            continue
        stack: list[tuple[str, int]] = [(start, 0)]
        path = [start]
        color[start] = GRAY
        while stack:
            node, idx = stack[-1]
            targets = adjacency[node]
            if idx < len(targets):
                stack[-1] = (node, idx + 1)
                nxt = targets[idx]
                if color[nxt] == GRAY:
                    return path[path.index(nxt):] + [nxt]
                if color[nxt] == WHITE:
                    color[nxt] = GRAY
                    stack.append((nxt, 0))
                    path.append(nxt)
            else:
                color[node] = BLACK
                stack.pop()
                path.pop()
    return None


def validate_lexicon(lex: Lexicon) -> list[Violation]:
    """All invariant violations of ``lex``; empty list iff well-formed.

    Accepts structurally arbitrary lexicons, including invalid ones built
    programmatically.  Each violation names the broken rule and the
    offending element.
    """
    violations: list[Violation] = []

    if not lex.synsets:
        violations.append(Violation("EmptyLexicon", "lexicon declares no synsets"))

    for sid, syn in sorted(lex.synsets.items()):
        if not sid or any(ch.isspace() for ch in sid):
            violations.append(Violation("InvalidId", f"synset id {sid!r} is empty or has whitespace"))
        if syn.id != sid:
            violations.append(Violation("InvalidId", f"synset keyed {sid!r} carries id {syn.id!r}"))
        if not syn.gloss.strip():
            violations.append(Violation("EmptyGloss", f"synset {sid!r} has an empty gloss"))
        if any(ch in _LINE_BOUNDARIES for text in (syn.gloss, *syn.examples, *syn.lemmas) for ch in text):
            violations.append(
                Violation(
                    "LineBreakInText",
                    f"synset {sid!r} has a line-boundary character in its gloss, examples, or lemmas",
                )
            )
        if not syn.lemmas:
            violations.append(Violation("NoLemmas", f"synset {sid!r} has no lemmas"))
        normalized: list[str] = []
        for lemma in syn.lemmas:
            try:
                normalized.append(normalize_term(lemma))
            except EmptyTermError:
                violations.append(Violation("EmptyTerm", f"synset {sid!r} has an empty lemma"))
        if normalized != list(syn.lemmas):
            violations.append(Violation("UnnormalizedLemma", f"synset {sid!r} lemmas are not normalized"))
        if len(set(normalized)) != len(normalized):
            violations.append(Violation("DuplicateLemma", f"synset {sid!r} repeats a lemma"))

    seen: set[Relation] = set()
    for rel in lex.relations:
        dangling = [sid for sid in (rel.source, rel.target) if sid not in lex.synsets]
        if dangling:
            violations.append(
                Violation(
                    "DanglingEndpoint",
                    f"relation {rel.kind.value} {rel.source} -> {rel.target} "
                    f"references unknown synset {dangling[0]!r}",
                )
            )
            continue
        if rel.source == rel.target:
            violations.append(
                Violation("SelfLoop", f"relation {rel.kind.value} loops on {rel.source!r}")
            )
            continue
        src, tgt = lex.synsets[rel.source], lex.synsets[rel.target]
        if not pos_compatible(rel.kind, src.pos, tgt.pos):
            violations.append(
                Violation(
                    "PosViolation",
                    f"relation {rel.kind.value} {rel.source} -> {rel.target} joins "
                    f"{src.pos.value}/{tgt.pos.value}",
                )
            )
        if rel in seen:
            violations.append(
                Violation(
                    "DuplicateRelation",
                    f"duplicate relation {rel.kind.value} {rel.source} -> {rel.target}",
                )
            )
        seen.add(rel)

    cycle = find_taxonomy_cycle(lex)
    if cycle is not None:
        violations.append(Violation("TaxonomyCycle", "taxonomy cycle: " + " -> ".join(cycle)))

    return violations


_POS_TOKENS = {pos.value: pos for pos in PartOfSpeech}
_KIND_TOKENS = {kind.value: kind for kind in RelationKind}


@dataclass(frozen=True)
class _Token:
    text: str
    quoted: bool


def _tokenize(line: str, line_no: int) -> list[_Token]:
    tokens: list[_Token] = []
    i, n = 0, len(line)
    while i < n:
        if line[i].isspace():
            i += 1
            continue
        if line[i] == '"':
            i += 1
            buf: list[str] = []
            closed = False
            while i < n:
                ch = line[i]
                if ch == "\\" and i + 1 < n and line[i + 1] in ('"', "\\"):
                    buf.append(line[i + 1])
                    i += 2
                    continue
                if ch == '"':
                    closed = True
                    i += 1
                    break
                buf.append(ch)
                i += 1
            if not closed:
                raise LexiconSyntaxError(line_no, "unterminated quoted string")
            if i < n and not line[i].isspace():
                raise LexiconSyntaxError(line_no, "expected whitespace after quoted string")
            tokens.append(_Token("".join(buf), quoted=True))
        else:
            start = i
            while i < n and not line[i].isspace():
                if line[i] == '"':
                    raise LexiconSyntaxError(line_no, "unexpected quote inside token")
                i += 1
            tokens.append(_Token(line[start:i], quoted=False))
    return tokens


def _parse_synset_line(tokens: list[_Token], line_no: int) -> Synset:
    if len(tokens) < 5:
        raise LexiconSyntaxError(
            line_no, 'synset line needs: synset <id> <pos> "<gloss>" <lemmas>'
        )
    sid, pos_tok, gloss_tok, lemma_tok = tokens[1], tokens[2], tokens[3], tokens[4]
    if sid.quoted or not sid.text:
        raise LexiconSyntaxError(line_no, "synset id must be a bare non-empty token")
    if pos_tok.quoted or pos_tok.text not in _POS_TOKENS:
        raise LexiconSyntaxError(
            line_no, f"unknown part of speech {pos_tok.text!r} (expected noun|verb|adj|adv)"
        )
    if not gloss_tok.quoted:
        raise LexiconSyntaxError(line_no, "gloss must be double-quoted")
    if not gloss_tok.text.strip():
        raise LexiconSyntaxError(line_no, "gloss must be non-empty")
    if lemma_tok.quoted:
        raise LexiconSyntaxError(line_no, "lemma list must be a bare token (use | between lemmas)")

    lemmas: list[str] = []
    for piece in lemma_tok.text.split("|"):
        try:
            lemmas.append(normalize_term(piece))
        except EmptyTermError:
            raise LexiconSyntaxError(line_no, "empty lemma in lemma list") from None
    if len(set(lemmas)) != len(lemmas):
        raise LexiconSyntaxError(line_no, "duplicate lemma after normalization")

    examples: list[str] = []
    for tok in tokens[5:]:
        if not tok.quoted:
            raise LexiconSyntaxError(line_no, f"unexpected bare token {tok.text!r} after lemmas")
        examples.append(tok.text)

    return Synset(
        id=sid.text,
        pos=_POS_TOKENS[pos_tok.text],
        gloss=gloss_tok.text,
        lemmas=tuple(lemmas),
        examples=tuple(examples),
    )


def _parse_relation_line(tokens: list[_Token], line_no: int) -> Relation:
    if len(tokens) != 4 or any(tok.quoted for tok in tokens[1:]):
        raise LexiconSyntaxError(line_no, "relation line needs: rel <kind> <source-id> <target-id>")
    kind_tok = tokens[1].text
    if kind_tok not in _KIND_TOKENS:
        raise LexiconSyntaxError(line_no, f"unknown relation kind {kind_tok!r}")
    return Relation(kind=_KIND_TOKENS[kind_tok], source=tokens[2].text, target=tokens[3].text)


def read_declarations(text: str) -> tuple[dict[str, Synset], list[Relation]]:
    """First parsing pass: collect synset and relation declarations.

    Enforces line syntax and id uniqueness only; relations may reference
    synsets declared later (or, in a broken file, not at all), so graph
    invariants are left to the caller.
    """
    synsets: dict[str, Synset] = {}
    relations: list[Relation] = []

    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = _tokenize(line, line_no)
        head = tokens[0]
        if head.quoted:
            raise LexiconSyntaxError(line_no, "line must start with 'synset' or 'rel'")
        if head.text == "synset":
            syn = _parse_synset_line(tokens, line_no)
            if syn.id in synsets:
                raise DuplicateIdError(syn.id)
            synsets[syn.id] = syn
        elif head.text == "rel":
            relations.append(_parse_relation_line(tokens, line_no))
        else:
            raise LexiconSyntaxError(line_no, f"unknown declaration {head.text!r}")

    return synsets, relations


def parse_lexicon(text: str) -> Lexicon:
    """Parse lexicon file content into a validated :class:`Lexicon`.

    Two passes: collect declarations line by line (relations may reference
    synsets declared later), then enforce the graph invariants.  The first
    broken invariant is raised as its typed error.
    """
    synsets, relations = read_declarations(text)

    if not synsets:
        raise EmptyLexiconError()

    for rel in relations:
        for endpoint in (rel.source, rel.target):
            if endpoint not in synsets:
                raise DanglingEndpointError(rel, endpoint)
        if rel.source == rel.target:
            raise SelfLoopError(rel)
        src, tgt = synsets[rel.source], synsets[rel.target]
        if not pos_compatible(rel.kind, src.pos, tgt.pos):
            raise PosViolationError(
                rel, f"{rel.kind.value} forbids {src.pos.value}/{tgt.pos.value} endpoints"
            )

    seen: set[Relation] = set()
    for rel in relations:
        if rel in seen:
            raise DuplicateRelationError(rel)
        seen.add(rel)

    lex = Lexicon(synsets=synsets, relations=tuple(relations))
    cycle = find_taxonomy_cycle(lex)
    if cycle is not None:
        raise TaxonomyCycleError(cycle)
    return lex


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def serialize_lexicon(lex: Lexicon) -> str:
    """Canonical text form: synsets sorted by id, relations by (kind, source, target).

    Lemma-internal spaces are written as underscores so the lemma list stays
    a single bare token; parsing folds them back.  The output is a pure
    function of the lexicon's structure, so declaration order of the input
    never shows through.
    """
    lines: list[str] = []
    for sid in sorted(lex.synsets):
        syn = lex.synsets[sid]
        lemma_field = "|".join(lemma.replace(" ", "_") for lemma in syn.lemmas)
        parts = ["synset", sid, syn.pos.value, _quote(syn.gloss), lemma_field]
        parts.extend(_quote(example) for example in syn.examples)
        lines.append(" ".join(parts))
    for rel in sorted(lex.relations, key=lambda r: r.sort_key):
        lines.append(f"rel {rel.kind.value} {rel.source} {rel.target}")
    return "\n".join(lines) + "\n"


def lexicon_fingerprint(lex: Lexicon) -> str:
    """Stable short identifier derived from the canonical serialization."""
    digest = hashlib.sha256(serialize_lexicon(lex).encode("utf-8")).hexdigest()
    return f"lex-{digest[:12]}"


def neighbors(
    lex: Lexicon, synset_id: str, kinds: frozenset[RelationKind] | set[RelationKind]
) -> list[tuple[Relation, Synset]]:
    """Relations incident to ``synset_id`` (either direction) with kind in ``kinds``.

    Each entry pairs the relation with the opposite endpoint's synset.
    Ordered by (kind token, source, target).
    """
    if synset_id not in lex.synsets:
        raise UnknownSynsetError(synset_id)
    found: list[tuple[Relation, Synset]] = []
    for rel in lex.relations:
        if rel.kind not in kinds:
            continue
        if rel.source == synset_id:
            found.append((rel, lex.synsets[rel.target]))
        elif rel.target == synset_id:
            found.append((rel, lex.synsets[rel.source]))
    found.sort(key=lambda pair: pair[0].sort_key)
    return found


# Sentence templates keyed by relation kind; KindOf additionally splits on
# the source part of speech (noun reading vs verb reading).
_TEMPLATES = {
    RelationKind.INSTANCE_OF: "{s} is an instance of {t}",
    RelationKind.MEMBER_OF: "{s} is a member of {t}",
    RelationKind.PART_OF: "{s} is a part of {t}",
    RelationKind.SUBSTANCE_OF: "{s} is a substance of {t}",
    RelationKind.DERIVATION: "{s} derives from {t}",
    RelationKind.WORD_FOR: "{s} is a word for {t}",
}


def render_expression(
    kind: RelationKind,
    source_term: str,
    target_term: str,
    source_pos: PartOfSpeech,
) -> str:
    """Read one edge back as a sentence, e.g. ``wheat is a kind of grain``."""
    if kind is RelationKind.KIND_OF:
        if source_pos is PartOfSpeech.NOUN:
            return f"{source_term} is a kind of {target_term}"
        if source_pos is PartOfSpeech.VERB:
            return f"{source_term} is one way to {target_term}"
        raise InvalidCombinationError(
            f"kind_of cannot be rendered for {source_pos.value} source"
        )
    return _TEMPLATES[kind].format(s=source_term, t=target_term)
