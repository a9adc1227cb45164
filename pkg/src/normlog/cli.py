"""Command-line harness.

::

    normlog compile THEORY.deon [-o OUT.asp] [--trace] [--json]
    normlog solve PROGRAM.asp [--query Q] [--max-models N] [--json]
                  [--dump-ground] [--show-naf]
    normlog check BASE.asp --narrative FACTS.asp [--json]
    normlog corpus [--filter NAME] [--write-goldens]

Exit codes are uniform across subcommands: 0 success (for ``solve``: at
least one model satisfies the query; for ``check``: satisfiable; for
``corpus``: all cases match), 1 for a clean negative result (no model /
unsatisfiable narrative / golden mismatch), 2 for any error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .ast import Literal, LogicError, Naf, Program, Variable, signature
from .deontic import CompilationTrace, compile_theory
from .grounder import GroundProgram, ground
from .parser import parse_deontic, parse_program, parse_query, render_program
from .solver import (
    AnswerSet,
    enumerate_models,
    justify,
    models_payload,
    query as run_query,
    solve_program,
)

__all__ = ["main", "NonFactNarrative", "check_narrative", "ComplianceReport"]


class NonFactNarrative(LogicError):
    """A narrative file contained something other than ground facts."""


def _dump_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _model_line(index: int, model: AnswerSet, show_naf: bool) -> str:
    parts = [str(l) for l in model.shown()]
    if show_naf:
        parts += [f"not {l}" for l in model.naf_complements()]
    inner = ", ".join(parts)
    return f"Model {index}: {{ {inner} }}"


# ---------------------------------------------------------------------------
# compile
# ---------------------------------------------------------------------------


def cmd_compile(args: argparse.Namespace) -> int:
    theory = parse_deontic(Path(args.input).read_text())
    program, trace = compile_theory(theory)
    text = render_program(program)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    if args.trace:
        sys.stderr.write(trace.to_json() if args.json else trace.to_text())
    return 0


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------


def cmd_solve(args: argparse.Namespace) -> int:
    program = parse_program(Path(args.input).read_text())
    goals = parse_query(args.query) if args.query else ()
    g, models = solve_program(program)
    matching = run_query(g, goals, models) if goals else models
    shown = matching if args.max_models is None else matching[: args.max_models]

    if args.json:
        payload = models_payload(shown, show_naf=args.show_naf)
        payload["count"] = len(matching)
        if args.query:
            payload["query"] = args.query
        if args.dump_ground:
            payload["ground"] = g.render().splitlines()
        sys.stdout.write(_dump_json(payload))
    else:
        if args.dump_ground:
            sys.stdout.write(g.render())
            sys.stdout.write("\n")
        for i, model in enumerate(shown, 1):
            print(_model_line(i, model, args.show_naf))
        print(f"Models: {len(matching)}")
        if args.query:
            print(f"Query '{args.query}' satisfied in {len(matching)} of {len(models)} models")
    return 0 if matching else 1


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------


class ComplianceReport:
    """Outcome of checking one narrative against a normative base."""

    def __init__(
        self,
        narrative: str,
        models: list[AnswerSet],
        triggered: list[Literal],
        ground_program: GroundProgram,
    ):
        self.narrative = narrative
        self.models = models
        self.triggered = triggered
        self.ground_program = ground_program

    @property
    def satisfiable(self) -> bool:
        return bool(self.models)

    def to_payload(self) -> dict:
        return {
            "narrative": self.narrative,
            "satisfiable": self.satisfiable,
            "count": len(self.models),
            "triggered_exceptions": [str(l) for l in self.triggered],
            "models": [m.to_dict() for m in self.models],
        }


def _exception_predicates(base: Program) -> set[tuple[str, int]]:
    """#exceptions pairs plus heads of rules that loop through their own naf."""
    pairs = set(base.exceptions)
    for rule in base.rules:
        if rule.head is None:
            continue
        for elem in rule.body:
            if isinstance(elem, Naf) and elem.literal == rule.head:
                pairs.add((rule.head.atom.predicate, rule.head.atom.arity))
    return pairs


def check_narrative(base: Program, narrative: Program, name: str) -> ComplianceReport:
    """Solve base + narrative facts; report which norm exceptions triggered.

    An exception atom counts as triggered when it holds in every model: its
    presence is then forced by the narrative, not by a particular choice.
    """
    for rule in narrative.rules:
        if not rule.is_fact or rule.head is None or not _is_ground_literal(rule.head):
            raise NonFactNarrative(f"narrative must contain only ground facts: {rule}")
    if narrative.abducibles or narrative.show or narrative.exceptions:
        raise NonFactNarrative("narrative must contain only ground facts, no directives")

    merged = Program(
        base.rules + narrative.rules, base.abducibles, base.show, base.exceptions
    )
    signature(merged)  # arity agreement across the merge
    g, models = solve_program(merged)

    triggered: list[Literal] = []
    if models:
        exception_pairs = _exception_predicates(base)
        common = frozenset.intersection(*(m.literals for m in models))
        triggered = sorted(
            (
                l
                for l in common
                if not l.strong_neg
                and (l.atom.predicate, l.atom.arity) in exception_pairs
            ),
            key=str,
        )
    return ComplianceReport(name, models, triggered, g)


def _is_ground_literal(lit: Literal) -> bool:
    return not any(isinstance(t, Variable) for t in lit.atom.args)


def cmd_check(args: argparse.Namespace) -> int:
    base = parse_program(Path(args.base).read_text())
    narrative = parse_program(Path(args.narrative).read_text())
    report = check_narrative(base, narrative, Path(args.narrative).stem)
    if args.json:
        sys.stdout.write(_dump_json(report.to_payload()))
    else:
        print(f"Narrative: {report.narrative}")
        n = len(report.models)
        print(f"Satisfiable: {'yes' if report.satisfiable else 'no'} ({n} model{'s' if n != 1 else ''})")
        if report.triggered:
            print("Triggered exceptions: " + ", ".join(str(l) for l in report.triggered))
            first = report.models[0]
            for lit in report.triggered:
                print(f"Justification of {lit}:")
                print(justify(report.ground_program, first, lit).to_text(1))
        elif report.satisfiable:
            print("Triggered exceptions: none")
    return 0 if report.satisfiable else 1


# ---------------------------------------------------------------------------
# corpus
# ---------------------------------------------------------------------------


def cmd_corpus(args: argparse.Namespace) -> int:
    from . import corpus

    cases = [c for c in corpus.CASES if c.name.startswith(args.filter)] if args.filter else list(corpus.CASES)
    if not cases:
        print(f"no corpus case matches {args.filter!r}", file=sys.stderr)
        return 2
    width = max(len(c.name) for c in cases)
    failures = 0
    for case in cases:
        actual = corpus.run_case(case)
        golden_file = corpus.golden_path(case)
        if args.write_goldens:
            golden_file.write_bytes(actual)
            print(f"{case.name:<{width}}  WROTE")
            continue
        expected = golden_file.read_bytes() if golden_file.exists() else None
        ok = actual == expected
        failures += 0 if ok else 1
        print(f"{case.name:<{width}}  {'PASS' if ok else 'FAIL'}")
    if not args.write_goldens:
        print(f"{len(cases) - failures}/{len(cases)} cases match")
    return 1 if failures else 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="normlog",
        description="Compile normative statements to answer-set programs and reason over their stable models.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="translate a .deon theory to an .asp program")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.add_argument("--trace", action="store_true", help="write the per-statement translation trace to stderr")
    p.add_argument("--json", action="store_true", help="JSON trace (with --trace)")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("solve", help="enumerate the stable models of an .asp program")
    p.add_argument("input")
    p.add_argument("--query", help="goal literals, e.g. 'warning_sign, not -dog' (default: true)")
    p.add_argument("--max-models", type=int)
    p.add_argument("--json", action="store_true")
    p.add_argument("--dump-ground", action="store_true", help="also emit the ground program")
    p.add_argument("--show-naf", action="store_true", help="display absent complements as naf literals")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", help="check a fact narrative against a normative base")
    p.add_argument("base")
    p.add_argument("--narrative", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("corpus", help="run the built-in regression corpus against its goldens")
    p.add_argument("--filter", default="", help="only run cases whose name starts with this prefix")
    p.add_argument("--write-goldens", action="store_true", help="refresh golden files instead of comparing")
    p.set_defaults(func=cmd_corpus)
    return top


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LogicError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
