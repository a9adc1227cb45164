"""Surface syntax for answer-set programs and for the normative DSL.

Answer-set syntax (.asp)::

    flies(X) :- bird(X), alive(X), not -flies(X).
    :- person(X), dead(X), breathe(X).      % denial; "false :- B." also accepted
    #abducible go.                           % truth value becomes a free choice
    #show fail_to_return_car/0.              % restrict model display
    #exceptions fail_to_return_car/0.        % norm-exception atoms, for checks

Normative DSL (.deon)::

    obligatory go unless -go.
    forbidden tell when go.
    permitted stay except join.
    fact -go.
    abducible tell.
    rule warning_sign :- dog.
    show go/0.

Comments run from ``%`` to end of line.  ``not`` and ``false`` are reserved.
Comparison builtins are ``.>.  .<.  .>=.  .=<.  .=.  \\=`` between arithmetic
expressions (``+ - *`` over exact rationals; ``1/20`` and ``0.05`` both read
as the rational one-twentieth).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .ast import (
    Arith,
    ArithExpr,
    Atom,
    BodyElem,
    Builtin,
    Constant,
    Literal,
    LogicError,
    Naf,
    Number,
    Pos,
    Program,
    Rule,
    SourceSpan,
    Term,
    Variable,
    signature,
)
from .deontic import (
    Abducible,
    AsRule,
    DeonticStatement,
    DeonticTheory,
    Fact,
    Impermissibility,
    Obligation,
    Permission,
)

__all__ = [
    "ParseError",
    "NafOnBuiltin",
    "parse_program",
    "parse_deontic",
    "parse_query",
    "render_program",
]

RESERVED_WORDS = ("not", "false")

_DSL_KEYWORDS = ("obligatory", "forbidden", "permitted", "fact", "abducible", "rule", "show")


class ParseError(LogicError):
    """Syntax error, carrying the source span where parsing failed."""

    def __init__(self, message: str, span: Optional[SourceSpan] = None):
        self.span = span
        where = f"{span}: " if span is not None else ""
        super().__init__(f"{where}{message}")


class NafOnBuiltin(ParseError):
    """Default negation applied to a comparison builtin."""


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
      (?P<WS>\s+)
    | (?P<COMMENT>%[^\n]*)
    | (?P<CMP>\.=<\.|\.>=\.|\.>\.|\.<\.|\.=\.|\\=)
    | (?P<ARROW>:-)
    | (?P<NUMBER>\d+(?:\.\d+)?)
    | (?P<NAME>[a-z][A-Za-z0-9_]*)
    | (?P<VAR>[A-Z][A-Za-z0-9_]*)
    | (?P<DIRECTIVE>\#[a-z][A-Za-z0-9_]*)
    | (?P<PUNCT>[().,+\-*/])
    """,
    re.VERBOSE,
)

_PUNCT_KINDS = {
    "(": "LPAREN",
    ")": "RPAREN",
    ".": "DOT",
    ",": "COMMA",
    "+": "PLUS",
    "-": "MINUS",
    "*": "STAR",
    "/": "SLASH",
}


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    span: SourceSpan
    value: Optional[Fraction] = None


def _tokenize(text: str) -> list[_Token]:
    line_starts = [0] + [m.end() for m in re.finditer(r"\n", text)]

    def locate(pos: int) -> tuple[int, int]:
        lo, hi = 0, len(line_starts) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if line_starts[mid] <= pos:
                lo = mid
            else:
                hi = mid - 1
        return lo + 1, pos - line_starts[lo] + 1

    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            line, col = locate(pos)
            raise ParseError(
                f"unexpected character {text[pos]!r}",
                SourceSpan(pos, pos + 1, line, col),
            )
        kind = m.lastgroup or ""
        tok_text = m.group()
        if kind not in ("WS", "COMMENT"):
            line, col = locate(m.start())
            span = SourceSpan(m.start(), m.end(), line, col)
            value = Fraction(tok_text) if kind == "NUMBER" else None
            if kind == "PUNCT":
                kind = _PUNCT_KINDS[tok_text]
            tokens.append(_Token(kind, tok_text, span, value))
        pos = m.end()
    line, col = locate(len(text))
    tokens.append(_Token("EOF", "", SourceSpan(len(text), len(text), line, col)))
    return tokens


# ---------------------------------------------------------------------------
# Recursive-descent parser
# ---------------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.index = 0

    # -- token plumbing ----------------------------------------------------

    def peek(self, ahead: int = 0) -> _Token:
        return self.tokens[min(self.index + ahead, len(self.tokens) - 1)]

    def advance(self) -> _Token:
        tok = self.tokens[self.index]
        if tok.kind != "EOF":
            self.index += 1
        return tok

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"expected {what}, found {tok.text or 'end of input'!r}", tok.span)
        return self.advance()

    def fail(self, message: str) -> ParseError:
        return ParseError(message, self.peek().span)

    def span_from(self, start: SourceSpan) -> SourceSpan:
        end = self.tokens[self.index - 1].span if self.index else start
        return SourceSpan(start.start, end.end, start.line, start.column)

    # -- shared pieces -----------------------------------------------------

    def name(self, what: str) -> str:
        tok = self.expect("NAME", what)
        if tok.text in RESERVED_WORDS:
            raise ParseError(f"{tok.text!r} is a reserved word", tok.span)
        return tok.text

    def term(self) -> Term:
        tok = self.peek()
        if tok.kind == "VAR":
            return Variable(self.advance().text)
        if tok.kind == "NUMBER":
            return Number(self.rational())
        if tok.kind == "NAME":
            return Constant(self.name("a term"))
        raise self.fail(f"expected a term, found {tok.text or 'end of input'!r}")

    def rational(self) -> Fraction:
        tok = self.expect("NUMBER", "a number")
        value = tok.value
        assert value is not None
        if self.peek().kind == "SLASH" and self.peek(1).kind == "NUMBER":
            if value.denominator != 1:
                raise ParseError("rational numerator must be an integer", tok.span)
            self.advance()
            denom_tok = self.advance()
            denom = denom_tok.value
            assert denom is not None
            if denom.denominator != 1 or denom == 0:
                raise ParseError("rational denominator must be a nonzero integer", denom_tok.span)
            return Fraction(int(value), int(denom))
        return value

    def literal(self) -> Literal:
        strong = False
        if self.peek().kind == "MINUS":
            self.advance()
            strong = True
        pred = self.name("a predicate name")
        args: tuple[Term, ...] = ()
        if self.peek().kind == "LPAREN":
            self.advance()
            parts = [self.term()]
            while self.peek().kind == "COMMA":
                self.advance()
                parts.append(self.term())
            self.expect("RPAREN", "')'")
            args = tuple(parts)
        return Literal(Atom(pred, args), strong)

    def arith_expr(self) -> ArithExpr:
        e = self.arith_mul()
        while self.peek().kind in ("PLUS", "MINUS"):
            op = self.advance().text
            e = Arith(op, e, self.arith_mul())
        return e

    def arith_mul(self) -> ArithExpr:
        e = self.arith_primary()
        while self.peek().kind == "STAR":
            self.advance()
            e = Arith("*", e, self.arith_primary())
        return e

    def arith_primary(self) -> ArithExpr:
        tok = self.peek()
        if tok.kind == "NUMBER":
            return Number(self.rational())
        if tok.kind == "VAR":
            return Variable(self.advance().text)
        if tok.kind == "NAME":
            return Constant(self.name("an operand"))
        if tok.kind == "LPAREN":
            self.advance()
            e = self.arith_expr()
            self.expect("RPAREN", "')'")
            return e
        raise self.fail(f"expected an arithmetic operand, found {tok.text or 'end of input'!r}")

    def body_elem(self) -> BodyElem:
        tok = self.peek()
        if tok.kind == "NAME" and tok.text == "not":
            naf_tok = self.advance()
            after = self.peek()
            if after.kind in ("VAR", "NUMBER", "LPAREN"):
                raise NafOnBuiltin(
                    "default negation cannot be applied to a builtin", naf_tok.span
                )
            lit = self.literal()
            if self.peek().kind == "CMP":
                raise NafOnBuiltin(
                    "default negation cannot be applied to a builtin", naf_tok.span
                )
            return Naf(lit)
        if tok.kind in ("VAR", "NUMBER", "LPAREN"):
            lhs = self.arith_expr()
            op = self.expect("CMP", "a comparison operator")
            return Builtin(op.text, lhs, self.arith_expr())
        lit_span = tok.span
        lit = self.literal()
        if self.peek().kind == "CMP":
            if lit.strong_neg or lit.atom.args:
                raise ParseError("only a plain constant can start a comparison", lit_span)
            op = self.advance()
            return Builtin(op.text, Constant(lit.atom.predicate), self.arith_expr())
        return Pos(lit)

    def body(self) -> tuple[BodyElem, ...]:
        elems = [self.body_elem()]
        while self.peek().kind == "COMMA":
            self.advance()
            elems.append(self.body_elem())
        return tuple(elems)

    def predicate_arity_list(self) -> tuple[tuple[str, int], ...]:
        pairs = []
        while True:
            pred = self.name("a predicate name")
            self.expect("SLASH", "'/'")
            tok = self.expect("NUMBER", "an arity")
            assert tok.value is not None
            if tok.value.denominator != 1 or tok.value < 0:
                raise ParseError("arity must be a non-negative integer", tok.span)
            pairs.append((pred, int(tok.value)))
            if self.peek().kind != "COMMA":
                break
            self.advance()
        return tuple(pairs)

    # -- answer-set programs -------------------------------------------------

    def rule_statement(self) -> Rule:
        start = self.peek().span
        head: Optional[Literal] = None
        if self.peek().kind == "ARROW":
            self.advance()
        else:
            if self.peek().kind == "NAME" and self.peek().text == "false":
                self.advance()  # "false :- B." is the spelled-out denial
                self.expect("ARROW", "':-' after 'false'")
            else:
                head = self.literal()
                if self.peek().kind == "DOT":
                    self.advance()
                    return Rule(head, (), self.span_from(start))
                self.expect("ARROW", "':-' or '.'")
        body = self.body()
        self.expect("DOT", "'.'")
        if head is None and not body:
            raise ParseError("a denial needs a non-empty body", start)
        return Rule(head, body, self.span_from(start))

    def program(self) -> Program:
        rules: list[Rule] = []
        abducibles: list[Literal] = []
        show: list[tuple[str, int]] = []
        exceptions: list[tuple[str, int]] = []
        while self.peek().kind != "EOF":
            tok = self.peek()
            if tok.kind == "DIRECTIVE":
                self.advance()
                if tok.text == "#abducible":
                    abducibles.append(self.literal())
                    while self.peek().kind == "COMMA":
                        self.advance()
                        abducibles.append(self.literal())
                elif tok.text == "#show":
                    show.extend(self.predicate_arity_list())
                elif tok.text == "#exceptions":
                    exceptions.extend(self.predicate_arity_list())
                else:
                    raise ParseError(f"unknown directive {tok.text!r}", tok.span)
                self.expect("DOT", "'.'")
            else:
                rules.append(self.rule_statement())
        for lit in abducibles:
            if any(isinstance(t, Variable) for t in lit.atom.args):
                raise ParseError(f"abducible must be ground: {lit}")
        program = Program(tuple(rules), tuple(abducibles), tuple(show), tuple(exceptions))
        signature(program)  # arity collision is a load error
        return program

    # -- normative DSL -------------------------------------------------------

    def norm_tail(
        self,
    ) -> tuple[tuple[BodyElem, ...], Optional[Literal], tuple[Literal, ...]]:
        conditions: tuple[BodyElem, ...] = ()
        unless: Optional[Literal] = None
        excepts: tuple[Literal, ...] = ()
        while self.peek().kind == "NAME" and self.peek().text in ("when", "unless", "except"):
            word = self.advance().text
            if word == "when":
                conditions = self.body()
            elif word == "unless":
                unless = self.literal()
            else:
                lits = [self.literal()]
                while self.peek().kind == "COMMA":
                    self.advance()
                    lits.append(self.literal())
                excepts = tuple(lits)
        return conditions, unless, excepts

    def deontic_statement(self) -> tuple[Optional[DeonticStatement], tuple[tuple[str, int], ...]]:
        tok = self.peek()
        if tok.kind != "NAME" or tok.text not in _DSL_KEYWORDS:
            raise ParseError(
                f"expected one of {', '.join(_DSL_KEYWORDS)}; found {tok.text or 'end of input'!r}",
                tok.span,
            )
        keyword = self.advance().text
        start = tok.span
        if keyword == "rule":
            rule = self.rule_statement()
            return AsRule(rule, self.span_from(start)), ()
        if keyword == "show":
            pairs = self.predicate_arity_list()
            self.expect("DOT", "'.'")
            return None, pairs
        if keyword == "fact":
            lit = self.literal()
            self.expect("DOT", "'.'")
            return Fact(lit, self.span_from(start)), ()
        if keyword == "abducible":
            lit = self.literal()
            self.expect("DOT", "'.'")
            if any(isinstance(t, Variable) for t in lit.atom.args):
                raise ParseError(f"abducible must be ground: {lit}", start)
            return Abducible(lit, self.span_from(start)), ()
        target = self.literal()
        conditions, unless, excepts = self.norm_tail()
        self.expect("DOT", "'.'")
        span = self.span_from(start)
        if keyword == "permitted":
            if unless is not None:
                raise ParseError("permissions take 'except', not 'unless'", span)
            return Permission(target, conditions, excepts, span), ()
        if excepts:
            raise ParseError(f"'{keyword}' takes 'unless', not 'except'", span)
        cls = Obligation if keyword == "obligatory" else Impermissibility
        return cls(target, conditions, unless, span), ()

    def deontic_theory(self) -> DeonticTheory:
        statements: list[DeonticStatement] = []
        show: list[tuple[str, int]] = []
        while self.peek().kind != "EOF":
            statement, pairs = self.deontic_statement()
            if statement is not None:
                statements.append(statement)
            show.extend(pairs)
        return DeonticTheory(tuple(statements), tuple(show))

    # -- queries ---------------------------------------------------------------

    def query(self) -> tuple[BodyElem, ...]:
        if self.peek().kind == "NAME" and self.peek().text == "true":
            tok = self.advance()
            if self.peek().kind != "EOF":
                raise ParseError("'true' must stand alone", tok.span)
            return ()
        goals: list[BodyElem] = []
        while True:
            tok = self.peek()
            if tok.kind == "NAME" and tok.text == "not":
                self.advance()
                goals.append(Naf(self.literal()))
            else:
                goals.append(Pos(self.literal()))
            if self.peek().kind != "COMMA":
                break
            self.advance()
        self.expect("EOF", "end of query")
        return tuple(goals)


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------


def parse_program(text: str) -> Program:
    """Parse answer-set surface syntax into a `Program`."""
    return _Parser(text).program()


def parse_deontic(text: str) -> DeonticTheory:
    """Parse the normative DSL into a `DeonticTheory`."""
    return _Parser(text).deontic_theory()


def parse_query(text: str) -> tuple[BodyElem, ...]:
    """Parse a query: ``true`` (empty conjunction) or literals/naf-literals."""
    return _Parser(text).query()


def render_program(program: Program) -> str:
    """Canonical surface text: one rule per line, directives last.

    ``parse_program(render_program(p)) == p`` for every well-formed program.
    """
    lines = [str(rule) for rule in program.rules]
    lines.extend(f"#abducible {lit}." for lit in program.abducibles)
    if program.show:
        lines.append("#show " + ", ".join(f"{p}/{n}" for p, n in program.show) + ".")
    if program.exceptions:
        lines.append("#exceptions " + ", ".join(f"{p}/{n}" for p, n in program.exceptions) + ".")
    return "\n".join(lines) + ("\n" if lines else "")
