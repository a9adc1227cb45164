"""Compilation of normative statements into answer-set rules.

The six statement forms and their translations:

* obligation            ``obligatory p.``            -> ``:- not p.``
* prohibition           ``forbidden p.``             -> ``:- not -p.``
* conditional versions  ``... when B``               -> denial with B prepended
* preemptable versions  ``... unless c``             -> odd loop ``c :- ..., not c.``
  (the exception atom c is derived exactly when the norm body would otherwise
  be violated, so asserting c independently preempts the norm)
* explicit permission   ``permitted p except e``     -> ``p :- not e.``
* abducible declaration ``abducible p.``             -> even loop over a fresh atom,
  making p's truth value a free choice

Obligations and prohibitions become denials rather than inference rules:
``:- not p`` rejects worlds where p fails without ever *deriving* p, which
is what keeps factual and deontic detachment apart.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Optional, Union

from .ast import (
    Atom,
    BodyElem,
    Literal,
    LogicError,
    Naf,
    Pos,
    Program,
    RESERVED_PREFIX,
    Rule,
    SourceSpan,
    Variable,
    atoms_of_rule,
    complement,
    signature,
)

__all__ = [
    "DeonticError",
    "UnlessEqualsTarget",
    "EmptyConditions",
    "FreshNameCollision",
    "CompileErrors",
    "Obligation",
    "Impermissibility",
    "Permission",
    "Fact",
    "AsRule",
    "Abducible",
    "DeonticStatement",
    "DeonticTheory",
    "TraceEntry",
    "CompilationTrace",
    "AlethicNotion",
    "DeonticNotion",
    "NotionPattern",
    "alethic_pattern",
    "compile_obligation",
    "compile_conditional",
    "compile_preemptable",
    "compile_permission",
    "expand_abducible",
    "expand_program_abducibles",
    "compile_theory",
]


class DeonticError(LogicError):
    """Base class for statement-level compilation errors."""


class UnlessEqualsTarget(DeonticError):
    """The unless-literal of a preemptable norm equals its target."""


class EmptyConditions(DeonticError):
    """A conditional norm was built with an empty condition list."""


class FreshNameCollision(DeonticError):
    """An abducible expansion would reuse a predicate already in the theory."""


class CompileErrors(DeonticError):
    """Aggregate of per-statement compilation failures."""

    def __init__(self, failures: list[tuple[Optional[SourceSpan], DeonticError]]):
        self.failures = failures
        lines = []
        for span, err in failures:
            where = f"{span}: " if span is not None else ""
            lines.append(f"{where}{err}")
        super().__init__("\n".join(lines))


# ---------------------------------------------------------------------------
# Statement forms
# ---------------------------------------------------------------------------


def _check_unless(target: Literal, unless: Optional[Literal]) -> None:
    if unless is not None and unless == target:
        raise UnlessEqualsTarget(
            f"unless-literal {unless} must differ from the norm target"
        )


@dataclass(frozen=True)
class Obligation:
    target: Literal
    conditions: tuple[BodyElem, ...] = ()
    unless: Optional[Literal] = None
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        _check_unless(self.target, self.unless)

    def __str__(self) -> str:
        return f"obligatory {_norm_text(self)}."


@dataclass(frozen=True)
class Impermissibility:
    target: Literal
    conditions: tuple[BodyElem, ...] = ()
    unless: Optional[Literal] = None
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        _check_unless(self.target, self.unless)

    def __str__(self) -> str:
        return f"forbidden {_norm_text(self)}."


def _norm_text(st: Union[Obligation, Impermissibility]) -> str:
    text = str(st.target)
    if st.conditions:
        text += " when " + ", ".join(str(e) for e in st.conditions)
    if st.unless is not None:
        text += f" unless {st.unless}"
    return text


@dataclass(frozen=True)
class Permission:
    target: Literal
    conditions: tuple[BodyElem, ...] = ()
    exceptions: tuple[Literal, ...] = ()
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)

    def __str__(self) -> str:
        text = f"permitted {self.target}"
        if self.conditions:
            text += " when " + ", ".join(str(e) for e in self.conditions)
        if self.exceptions:
            text += " except " + ", ".join(str(l) for l in self.exceptions)
        return text + "."


@dataclass(frozen=True)
class Fact:
    literal: Literal
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)

    def __str__(self) -> str:
        return f"fact {self.literal}."


@dataclass(frozen=True)
class AsRule:
    """A raw answer-set rule embedded in a theory."""

    rule: Rule
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)

    def __str__(self) -> str:
        return f"rule {self.rule}"


@dataclass(frozen=True)
class Abducible:
    """Declares a ground literal whose truth value is a free choice."""

    literal: Literal
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)

    def __str__(self) -> str:
        return f"abducible {self.literal}."


DeonticStatement = Union[Obligation, Impermissibility, Permission, Fact, AsRule, Abducible]


@dataclass(frozen=True)
class DeonticTheory:
    statements: tuple[DeonticStatement, ...] = ()
    show: tuple[tuple[str, int], ...] = ()

    def __post_init__(self) -> None:
        seen: set[Literal] = set()
        for st in self.statements:
            if isinstance(st, Abducible):
                if st.literal in seen:
                    raise DeonticError(f"duplicate abducible declaration: {st.literal}")
                seen.add(st.literal)


# ---------------------------------------------------------------------------
# Compilation trace
# ---------------------------------------------------------------------------

#: Tags naming the translation pattern applied to each statement.
OB_DENIAL = "OB-denial"
IM_DENIAL = "IM-denial"
COND_OB = "COND-OB"
COND_IM = "COND-IM"
OLON_OB = "OLON-OB"
OLON_IM = "OLON-IM"
PERM_DEFAULT = "PERM-DEFAULT"
EVEN_LOOP = "EVEN-LOOP"
FACT = "FACT"
RAW = "RAW"


@dataclass(frozen=True)
class TraceEntry:
    index: int
    statement: DeonticStatement
    tag: str
    rules: tuple[Rule, ...]


@dataclass(frozen=True)
class CompilationTrace:
    entries: tuple[TraceEntry, ...] = ()

    def to_json(self) -> str:
        payload = [
            {
                "index": e.index,
                "statement": str(e.statement),
                "tag": e.tag,
                "rules": [str(r) for r in e.rules],
            }
            for e in self.entries
        ]
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        lines = []
        for e in self.entries:
            lines.append(f"[{e.index}] {e.statement}   % {e.tag}")
            for r in e.rules:
                lines.append(f"      {r}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Translation patterns
# ---------------------------------------------------------------------------


def compile_obligation(target: Literal, *, forbidden: bool = False) -> Rule:
    """Unconditional norm as a denial.

    ``obligatory p``  ->  ``:- not p.``   (reject worlds where p fails)
    ``forbidden p``   ->  ``:- not -p.``  (reject worlds where -p fails)
    """
    wanted = complement(target) if forbidden else target
    return Rule(None, (Naf(wanted),))


def compile_conditional(
    target: Literal, conditions: tuple[BodyElem, ...], *, forbidden: bool = False
) -> Rule:
    """Conditional norm as a denial with the conditions prepended."""
    if not conditions:
        raise EmptyConditions("conditional norm needs at least one condition")
    wanted = complement(target) if forbidden else target
    return Rule(None, (*conditions, Naf(wanted)))


def compile_preemptable(
    target: Literal,
    unless: Literal,
    conditions: tuple[BodyElem, ...] = (),
    *,
    forbidden: bool = False,
) -> Rule:
    """Preemptable norm as an odd loop over the exception atom.

    ``obligatory p unless c``  ->  ``c :- not p, not c.``
    ``forbidden p unless c``   ->  ``c :- p, not c.``

    When nothing else derives c the loop is unsatisfiable exactly when the
    norm is violated; a rule that derives c independently switches the norm
    off instead.
    """
    _check_unless(target, unless)
    trigger: BodyElem = Pos(target) if forbidden else Naf(target)
    return Rule(unless, (*conditions, trigger, Naf(unless)))


def compile_permission(
    target: Literal,
    conditions: tuple[BodyElem, ...] = (),
    exceptions: tuple[Literal, ...] = (),
) -> Rule:
    """Explicit permission as a default rule: holds unless an exception does."""
    body = (*conditions, *(Naf(e) for e in exceptions))
    return Rule(target, body)


def _fresh_predicate(lit: Literal) -> str:
    side = "neg_" if lit.strong_neg else ""
    return f"{RESERVED_PREFIX}not_{side}{lit.atom.predicate}"


def expand_abducible(lit: Literal, taken: frozenset[str] = frozenset()) -> tuple[Rule, Rule]:
    """Even loop making ``lit`` a free choice.

    ``abducible g`` ->  ``g :- not o_not_g.``  and  ``o_not_g :- not g.``

    The fresh atom is hidden from model display; each stable model commits
    to exactly one side of the loop.
    """
    for term in lit.atom.args:
        if isinstance(term, Variable):
            raise DeonticError(f"abducible must be ground: {lit}")
    fresh_name = _fresh_predicate(lit)
    if fresh_name in taken:
        raise FreshNameCollision(f"cannot generate fresh atom {fresh_name}: name in use")
    fresh = Literal(Atom(fresh_name, lit.atom.args))
    return (Rule(lit, (Naf(fresh),)), Rule(fresh, (Naf(lit),)))


def expand_program_abducibles(program: Program) -> Program:
    """Replace every abducible declaration with its even loop."""
    if not program.abducibles:
        return program
    taken = frozenset(pred for pred, _ in signature(program))
    rules = list(program.rules)
    for lit in program.abducibles:
        rules.extend(expand_abducible(lit, taken))
    return Program(tuple(rules), (), program.show, program.exceptions)


def compile_theory(theory: DeonticTheory) -> tuple[Program, CompilationTrace]:
    """Translate a whole theory, statement by statement, keeping a trace.

    Abducible declarations are expanded inline, so the resulting program is
    directly solvable and carries no residual declarations.  Per-statement
    failures are collected and raised together as `CompileErrors`.
    """
    taken: set[str] = set()
    for st in theory.statements:
        if isinstance(st, AsRule):
            for atom in atoms_of_rule(st.rule):
                taken.add(atom.predicate)
        elif isinstance(st, (Fact, Abducible)):
            taken.add(st.literal.atom.predicate)
        else:
            taken.add(st.target.atom.predicate)
            for elem in st.conditions:
                if isinstance(elem, (Pos, Naf)):
                    taken.add(elem.literal.atom.predicate)

    rules: list[Rule] = []
    entries: list[TraceEntry] = []
    failures: list[tuple[Optional[SourceSpan], DeonticError]] = []

    for index, st in enumerate(theory.statements):
        try:
            produced: tuple[Rule, ...]
            if isinstance(st, (Obligation, Impermissibility)):
                forbidden = isinstance(st, Impermissibility)
                if st.unless is not None:
                    produced = (
                        compile_preemptable(
                            st.target, st.unless, st.conditions, forbidden=forbidden
                        ),
                    )
                    tag = OLON_IM if forbidden else OLON_OB
                elif st.conditions:
                    produced = (
                        compile_conditional(st.target, st.conditions, forbidden=forbidden),
                    )
                    tag = COND_IM if forbidden else COND_OB
                else:
                    produced = (compile_obligation(st.target, forbidden=forbidden),)
                    tag = IM_DENIAL if forbidden else OB_DENIAL
            elif isinstance(st, Permission):
                produced = (compile_permission(st.target, st.conditions, st.exceptions),)
                tag = PERM_DEFAULT
            elif isinstance(st, Fact):
                produced = (Rule(st.literal, ()),)
                tag = FACT
            elif isinstance(st, AsRule):
                produced = (st.rule,)
                tag = RAW
            elif isinstance(st, Abducible):
                produced = expand_abducible(st.literal, frozenset(taken))
                taken.add(produced[1].head.predicate)
                tag = EVEN_LOOP
            else:  # pragma: no cover - union is closed
                raise DeonticError(f"unknown statement type: {st!r}")
        except DeonticError as err:
            failures.append((st.span, err))
            continue
        rules.extend(produced)
        entries.append(TraceEntry(index, st, tag, produced))

    if failures:
        raise CompileErrors(failures)

    program = Program(tuple(rules), (), theory.show, ())
    signature(program)  # arity check over the compiled result
    return program, CompilationTrace(tuple(entries))


# ---------------------------------------------------------------------------
# Modal notions
# ---------------------------------------------------------------------------


class AlethicNotion(enum.Enum):
    NECESSARY = "necessary"
    POSSIBLE = "possible"
    IMPOSSIBLE = "impossible"
    NON_NECESSARY = "non_necessary"
    CONTINGENT = "contingent"
    NON_CONTINGENT = "non_contingent"


class DeonticNotion(enum.Enum):
    """The six classical deontic notions, each the image of an alethic one."""

    OBLIGATORY = "obligatory"
    PERMITTED = "permitted"
    IMPERMISSIBLE = "impermissible"
    OMISSIBLE = "omissible"
    OPTIONAL = "optional"
    NON_OPTIONAL = "non_optional"

    @property
    def alethic(self) -> AlethicNotion:
        return _DEONTIC_TO_ALETHIC[self]


_DEONTIC_TO_ALETHIC = {
    DeonticNotion.OBLIGATORY: AlethicNotion.NECESSARY,
    DeonticNotion.PERMITTED: AlethicNotion.POSSIBLE,
    DeonticNotion.IMPERMISSIBLE: AlethicNotion.IMPOSSIBLE,
    DeonticNotion.OMISSIBLE: AlethicNotion.NON_NECESSARY,
    DeonticNotion.OPTIONAL: AlethicNotion.CONTINGENT,
    DeonticNotion.NON_OPTIONAL: AlethicNotion.NON_CONTINGENT,
}


@dataclass(frozen=True)
class NotionPattern:
    """Body elements testing a notion inside one world.

    ``elems`` is read conjunctively unless ``disjunctive`` is set (needed
    only for the non-contingent notion: provably true or provably false).
    """

    elems: tuple[BodyElem, ...]
    disjunctive: bool = False


def alethic_pattern(notion: AlethicNotion, atom: Atom) -> NotionPattern:
    """Negation-as-failure pattern testing ``notion`` of ``atom``."""
    p = Literal(atom)
    np = Literal(atom, True)
    if notion is AlethicNotion.NECESSARY:
        return NotionPattern((Pos(p),))
    if notion is AlethicNotion.POSSIBLE:
        return NotionPattern((Naf(np),))
    if notion is AlethicNotion.IMPOSSIBLE:
        return NotionPattern((Pos(np),))
    if notion is AlethicNotion.NON_NECESSARY:
        return NotionPattern((Naf(p),))
    if notion is AlethicNotion.CONTINGENT:
        return NotionPattern((Naf(p), Naf(np)))
    if notion is AlethicNotion.NON_CONTINGENT:
        return NotionPattern((Pos(p), Pos(np)), disjunctive=True)
    raise DeonticError(f"unknown notion: {notion!r}")
