"""Core object language: terms, literals, rules and programs.

A program is a set of rules over classical literals (an atom or its strong
negation ``-atom``).  Rule bodies mix positive literals, default-negated
literals (``not lit``) and arithmetic comparison builtins over exact
rationals.  A rule with no head is a denial: its body must never hold.

All values are immutable and hashable; numbers are `fractions.Fraction`
so arithmetic never loses precision.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Union

__all__ = [
    "LogicError",
    "ArityConflict",
    "SourceSpan",
    "Variable",
    "Constant",
    "Number",
    "Term",
    "Atom",
    "Literal",
    "complement",
    "Pos",
    "Naf",
    "Arith",
    "ArithExpr",
    "Builtin",
    "BodyElem",
    "Rule",
    "Program",
    "signature",
    "format_rational",
    "COMPARISON_OPS",
    "ORDER_OPS",
    "RESERVED_PREFIX",
]


class LogicError(Exception):
    """Base class for every error raised by this package."""


class ArityConflict(LogicError):
    """A predicate name is used with two different arities in one program."""


#: Predicates with this prefix are generated internally (abducible expansion)
#: and are hidden from displayed models.
RESERVED_PREFIX = "o_"

#: Comparison builtins.  ``.=.`` additionally binds an unbound left variable.
COMPARISON_OPS = (".>.", ".<.", ".>=.", ".=<.", ".=.", "\\=")

#: The subset of builtins that require numeric operands on both sides.
ORDER_OPS = (".>.", ".<.", ".>=.", ".=<.")

_PREDICATE_RE = re.compile(r"[a-z][A-Za-z0-9_]*\Z")
_VARIABLE_RE = re.compile(r"[A-Z][A-Za-z0-9_]*\Z")


def format_rational(q: Fraction) -> str:
    """Render a rational exactly: integers bare, finite decimals as decimals
    (``1/20`` -> ``0.05``), everything else as ``numerator/denominator``."""
    if q.denominator == 1:
        return str(q.numerator)
    d = q.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{q.numerator}/{q.denominator}"
    scale = max(twos, fives)
    digits = str(abs(q.numerator) * 10**scale // q.denominator).rjust(scale + 1, "0")
    sign = "-" if q.numerator < 0 else ""
    return f"{sign}{digits[:-scale]}.{digits[-scale:]}"


@dataclass(frozen=True)
class SourceSpan:
    """Byte range inside a source text, with the line/column of its start."""

    start: int
    end: int
    line: int
    column: int

    def __post_init__(self) -> None:
        if self.start > self.end:
            raise ValueError("span start must not exceed end")

    def __str__(self) -> str:
        return f"line {self.line}, column {self.column}"


@dataclass(frozen=True)
class Variable:
    name: str

    def __post_init__(self) -> None:
        if not _VARIABLE_RE.match(self.name):
            raise LogicError(f"invalid variable name: {self.name!r}")

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Constant:
    name: str

    def __post_init__(self) -> None:
        if not _PREDICATE_RE.match(self.name):
            raise LogicError(f"invalid constant name: {self.name!r}")

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Number:
    value: Fraction

    def __post_init__(self) -> None:
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))

    def __str__(self) -> str:
        return format_rational(self.value)


Term = Union[Variable, Constant, Number]


@dataclass(frozen=True)
class Atom:
    predicate: str
    args: tuple[Term, ...] = ()

    def __post_init__(self) -> None:
        if not _PREDICATE_RE.match(self.predicate):
            raise LogicError(f"invalid predicate name: {self.predicate!r}")

    @property
    def arity(self) -> int:
        return len(self.args)

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(str(a) for a in self.args)})"


@dataclass(frozen=True)
class Literal:
    """An atom or its strong negation (``-atom``)."""

    atom: Atom
    strong_neg: bool = False

    @property
    def predicate(self) -> str:
        return self.atom.predicate

    def __str__(self) -> str:
        return f"-{self.atom}" if self.strong_neg else str(self.atom)


def complement(lit: Literal) -> Literal:
    """The strongly-negated counterpart: ``p`` <-> ``-p``."""
    return Literal(lit.atom, not lit.strong_neg)


@dataclass(frozen=True)
class Arith:
    """Binary arithmetic over terms: ``+``, ``-``, ``*``."""

    op: str
    lhs: "ArithExpr"
    rhs: "ArithExpr"

    def __post_init__(self) -> None:
        if self.op not in ("+", "-", "*"):
            raise LogicError(f"unknown arithmetic operator: {self.op!r}")

    def __str__(self) -> str:
        return _arith_str(self, 0)


ArithExpr = Union[Variable, Constant, Number, Arith]

_PRECEDENCE = {"+": 1, "-": 1, "*": 2}


def _arith_str(e: ArithExpr, parent: int) -> str:
    if not isinstance(e, Arith):
        return str(e)
    prec = _PRECEDENCE[e.op]
    left = _arith_str(e.lhs, prec)
    right = _arith_str(e.rhs, prec + 1)  # left-associative
    text = f"{left} {e.op} {right}"
    return f"({text})" if prec < parent else text


@dataclass(frozen=True)
class Pos:
    literal: Literal

    def __str__(self) -> str:
        return str(self.literal)


@dataclass(frozen=True)
class Naf:
    """Default negation: holds when the literal is not derivable."""

    literal: Literal

    def __str__(self) -> str:
        return f"not {self.literal}"


@dataclass(frozen=True)
class Builtin:
    """Comparison between two arithmetic expressions.

    ``.=.`` with an unbound left-hand variable acts as assignment during
    grounding; the strictly relational operators only test.
    """

    op: str
    lhs: ArithExpr
    rhs: ArithExpr

    def __post_init__(self) -> None:
        if self.op not in COMPARISON_OPS:
            raise LogicError(f"unknown comparison operator: {self.op!r}")

    def __str__(self) -> str:
        return f"{_arith_str(self.lhs, 0)} {self.op} {_arith_str(self.rhs, 0)}"


BodyElem = Union[Pos, Naf, Builtin]


@dataclass(frozen=True)
class Rule:
    """``head :- body.``  A ``None`` head makes the rule a denial."""

    head: Optional[Literal]
    body: tuple[BodyElem, ...] = ()
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.head is None and not self.body:
            raise LogicError("a denial needs a non-empty body")

    @property
    def is_denial(self) -> bool:
        return self.head is None

    @property
    def is_fact(self) -> bool:
        return self.head is not None and not self.body

    def __str__(self) -> str:
        body = ", ".join(str(e) for e in self.body)
        if self.head is None:
            return f":- {body}."
        if not self.body:
            return f"{self.head}."
        return f"{self.head} :- {body}."


@dataclass(frozen=True)
class Program:
    """Rules plus the directives that travel with them.

    ``abducibles`` lists ground literals whose truth value may be freely
    chosen (expanded into even loops before solving).  ``show`` restricts
    model display to the named predicate/arity pairs; ``exceptions`` names
    the predicates that act as norm-exception flags for compliance checks.
    """

    rules: tuple[Rule, ...] = ()
    abducibles: tuple[Literal, ...] = ()
    show: tuple[tuple[str, int], ...] = ()
    exceptions: tuple[tuple[str, int], ...] = ()

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.rules)


def _atoms_of_expr(e: ArithExpr) -> Iterator[Atom]:
    if isinstance(e, Arith):
        yield from _atoms_of_expr(e.lhs)
        yield from _atoms_of_expr(e.rhs)


def atoms_of_rule(rule: Rule) -> Iterator[Atom]:
    """Every atom occurring in the rule (head, positive and naf body)."""
    if rule.head is not None:
        yield rule.head.atom
    for elem in rule.body:
        if isinstance(elem, (Pos, Naf)):
            yield elem.literal.atom


def terms_of_atom(atom: Atom) -> Iterator[Term]:
    yield from atom.args


def terms_of_expr(e: ArithExpr) -> Iterator[Term]:
    if isinstance(e, Arith):
        yield from terms_of_expr(e.lhs)
        yield from terms_of_expr(e.rhs)
    else:
        yield e


def terms_of_rule(rule: Rule) -> Iterator[Term]:
    if rule.head is not None:
        yield from rule.head.atom.args
    for elem in rule.body:
        if isinstance(elem, (Pos, Naf)):
            yield from elem.literal.atom.args
        else:
            yield from terms_of_expr(elem.lhs)
            yield from terms_of_expr(elem.rhs)


def variables_of_rule(rule: Rule) -> set[str]:
    return {t.name for t in terms_of_rule(rule) if isinstance(t, Variable)}


def signature(program: Program) -> set[tuple[str, int]]:
    """Predicate/arity pairs used anywhere in the program.

    Raises `ArityConflict` when one predicate appears with two arities;
    arity is fixed per predicate within a program.
    """
    seen: dict[str, int] = {}
    pairs: set[tuple[str, int]] = set()

    def visit(atom: Atom) -> None:
        old = seen.get(atom.predicate)
        if old is not None and old != atom.arity:
            raise ArityConflict(
                f"predicate {atom.predicate}/{atom.arity} also used with arity {old}"
            )
        seen[atom.predicate] = atom.arity
        pairs.add((atom.predicate, atom.arity))

    for rule in program.rules:
        for atom in atoms_of_rule(rule):
            visit(atom)
    for lit in program.abducibles:
        visit(lit.atom)
    return pairs
