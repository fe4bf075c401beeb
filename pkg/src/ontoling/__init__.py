"""Onto-ling: a serious game for learning linguistic ontologies.

Players fill term slots in networks of synsets connected by typed lexical
relations.  The package bundles a starter lexicon, a deterministic puzzle
generator for four levels of increasing difficulty, a scoring engine with
star ratings, a JSON-file session store, an HTTP service, and a CLI.
"""

from __future__ import annotations

from importlib import resources

from .errors import OntolingError
from .lexicon import (
    Lexicon,
    PartOfSpeech,
    Relation,
    RelationKind,
    Synset,
    Violation,
    lexicon_fingerprint,
    normalize_term,
    parse_lexicon,
    render_expression,
    serialize_lexicon,
    validate_lexicon,
)
from .levels import (
    LevelSpec,
    Network,
    Puzzle,
    Slot,
    TermBank,
    builtin_level_specs,
    generate_puzzle,
    validate_puzzle,
)
from .rng import SplitMix64, derive_seed

__all__ = [
    "Lexicon",
    "LevelSpec",
    "Network",
    "OntolingError",
    "PartOfSpeech",
    "Puzzle",
    "Relation",
    "RelationKind",
    "Slot",
    "SplitMix64",
    "Synset",
    "TermBank",
    "Violation",
    "builtin_level_specs",
    "derive_seed",
    "generate_puzzle",
    "lexicon_fingerprint",
    "load_bundled_lexicon",
    "normalize_term",
    "parse_lexicon",
    "render_expression",
    "serialize_lexicon",
    "validate_lexicon",
    "validate_puzzle",
]

__version__ = "0.1.0"


def bundled_lexicon_text() -> str:
    """Source text of the starter lexicon shipped with the package."""
    return (resources.files(__name__) / "data" / "starter.lex").read_text(encoding="utf-8")


def load_bundled_lexicon() -> Lexicon:
    return parse_lexicon(bundled_lexicon_text())
