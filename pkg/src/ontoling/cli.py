"""Command-line tool for lexicon authors and teachers.

Subcommands: ``validate-lexicon`` (list every broken rule in a lexicon
file), ``gen`` (write a puzzle file for a level and seed), ``grade``
(score an answers file against a with-answers puzzle file), ``serve``
(run the HTTP service).

Exit codes: 0 success, 1 domain failure (violations, unsatisfiable spec,
wrong answers file), 2 usage or I/O error.  Results go to stdout,
diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import engine
from .errors import OntolingError
from .lexicon import (
    DuplicateIdError,
    Lexicon,
    LexiconSyntaxError,
    Violation,
    normalize_term,
    parse_lexicon,
    read_declarations,
    validate_lexicon,
)
from .levels import builtin_level_specs, generate_puzzle, puzzle_from_dict, puzzle_to_json


def _seed_type(raw: str) -> int:
    try:
        value = int(raw, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed {raw!r} is not an integer") from None
    if not 0 <= value < (1 << 64):
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ontoling",
        description="Onto-ling: lexicon validation, puzzle generation, grading, and the game service.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser(
        "validate-lexicon", help="check a lexicon file against every well-formedness rule"
    )
    p_validate.add_argument("lexicon", help="path to the lexicon file")
    p_validate.add_argument("--format", choices=("text", "json"), default="text")
    p_validate.set_defaults(func=cmd_validate)

    p_gen = sub.add_parser("gen", help="generate a puzzle file for one level and seed")
    p_gen.add_argument("--lexicon", required=True, help="path to the lexicon file")
    p_gen.add_argument("--level", type=int, choices=(1, 2, 3, 4), required=True)
    p_gen.add_argument("--seed", type=_seed_type, default=0)
    p_gen.add_argument("--out", default="-", help="output path (default: stdout)")
    p_gen.add_argument(
        "--with-answers",
        action="store_true",
        help="include the answers section (for grading; not for players)",
    )
    p_gen.set_defaults(func=cmd_gen)

    p_grade = sub.add_parser("grade", help="score an answers file against a puzzle file")
    p_grade.add_argument("--puzzle", required=True, help="puzzle file generated with --with-answers")
    p_grade.add_argument("--answers", required=True, help="JSON file mapping slot_id to term")
    p_grade.add_argument("--format", choices=("text", "json"), default="text")
    p_grade.set_defaults(func=cmd_grade)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--lexicon", required=True, help="path to the lexicon file")
    p_serve.add_argument(
        "--data-dir", default=None, help="data directory (default: $ONTOLING_DATA_DIR or ./data)"
    )
    p_serve.add_argument("--bind", default="127.0.0.1")
    p_serve.add_argument(
        "--port", type=int, default=None, help="port (default: $ONTOLING_PORT or 8000; 0 = any free)"
    )
    p_serve.add_argument(
        "--app-dir", default=None, help="optional static web app directory served at /app"
    )
    p_serve.set_defaults(func=cmd_serve)

    return parser


def cmd_validate(args: argparse.Namespace) -> int:
    text = Path(args.lexicon).read_text(encoding="utf-8")
    synset_count = relation_count = 0
    try:
        synsets, relations = read_declarations(text)
    except (LexiconSyntaxError, DuplicateIdError) as exc:
        violations = [Violation(exc.code, str(exc))]
    else:
        synset_count, relation_count = len(synsets), len(relations)
        violations = validate_lexicon(Lexicon(synsets=synsets, relations=tuple(relations)))

    if args.format == "json":
        print(
            json.dumps(
                {
                    "ok": not violations,
                    "synsets": synset_count,
                    "relations": relation_count,
                    "violations": [{"code": v.code, "message": v.message} for v in violations],
                },
                indent=2,
            )
        )
    elif violations:
        for violation in violations:
            print(violation)
    else:
        print(f"OK: {synset_count} synsets, {relation_count} relations")
    return 1 if violations else 0


def cmd_gen(args: argparse.Namespace) -> int:
    lex = parse_lexicon(Path(args.lexicon).read_text(encoding="utf-8"))
    spec = builtin_level_specs()[args.level - 1]
    puzzle = generate_puzzle(lex, spec, args.seed)
    text = puzzle_to_json(puzzle, with_answers=args.with_answers)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8")
    return 0


def _load_graded_puzzle(path: str):
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        print(f"puzzle file is not valid JSON: {exc}", file=sys.stderr)
        return None
    if not isinstance(doc, dict) or "answers" not in doc or "answer_lemmas" not in doc:
        print(
            "puzzle file lacks the answers section; generate it with gen --with-answers",
            file=sys.stderr,
        )
        return None
    try:
        return puzzle_from_dict(doc)
    except (KeyError, TypeError, ValueError) as exc:
        print(f"puzzle file is malformed: {exc!r}", file=sys.stderr)
        return None


def cmd_grade(args: argparse.Namespace) -> int:
    puzzle = _load_graded_puzzle(args.puzzle)
    if puzzle is None:
        return 2

    try:
        answers_doc = json.loads(Path(args.answers).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        print(f"answers file is not valid JSON: {exc}", file=sys.stderr)
        return 1
    if not isinstance(answers_doc, dict):
        print("answers file must be a JSON object mapping slot_id to term", file=sys.stderr)
        return 1

    slot_ids = {slot.slot_id for slot in puzzle.all_slots()}
    placements: dict[str, str] = {}
    for slot_id, term in answers_doc.items():
        if slot_id not in slot_ids:
            print(f"answers file names unknown slot {slot_id!r}", file=sys.stderr)
            return 1
        if not isinstance(term, str):
            print(f"answer for slot {slot_id} must be a string", file=sys.stderr)
            return 1
        try:
            placements[slot_id] = normalize_term(term)
        except OntolingError as exc:
            print(f"answer for slot {slot_id}: {exc}", file=sys.stderr)
            return 1
    missing = sorted(slot_ids - placements.keys())
    if missing:
        print("answers file misses slots: " + ", ".join(missing), file=sys.stderr)
        return 1

    report = engine.score_placements(puzzle, placements)
    if args.format == "json":
        print(json.dumps(engine.report_to_dict(report), indent=2))
        return 0

    by_network = {ns.network_id: ns for ns in report.per_network}
    for network in puzzle.networks:
        for verdict in report.verdicts:
            if puzzle.network_of_slot(verdict.slot_id) is not network:
                continue
            mark = "correct" if verdict.correct else "wrong"
            print(f"{verdict.slot_id}: {verdict.placed} [{mark}]")
            for expression in verdict.expressions:
                print(f"    {expression}")
        ns = by_network[network.network_id]
        print(
            f"network {ns.network_id}: {ns.correct_count}/{ns.slot_count} correct, "
            f"{ns.score_percent}%"
        )
    print(
        f"level score: {report.level_score}  stars: {report.stars}  "
        f"passed: {'yes' if report.passed else 'no'}"
    )
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    from .service import ServiceConfig, serve

    port = args.port
    if port is None:
        port = int(os.environ.get("ONTOLING_PORT", "8000"))
    serve(
        ServiceConfig(
            lexicon_path=args.lexicon,
            data_dir=args.data_dir,
            bind=args.bind,
            port=port,
            app_dir=args.app_dir,
        )
    )
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except OntolingError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
