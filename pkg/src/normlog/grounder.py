"""Grounding: instantiate rule schemas over the Herbrand universe.

Instantiation is bottom-up: starting from facts, positive body literals are
joined against the optimistically derivable atom base (default negation is
ignored while building that base), so rule schemas whose positive body can
never match are dropped instead of being expanded blindly.  Variable-free
rules pass through verbatim, minus their builtins.

Builtins evaluate over exact rationals.  A variable that appears only in
order comparisons (``.>. .<. .>=. .=<.``) ranges over the numerals written
in the program; ``.=.`` binds its left-hand variable when still unbound.
Computed values (``D .=. L1 - L2``) may introduce new numbers into derived
atoms, but they never enlarge the enumeration universe, which keeps the
fixpoint finite.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Union

from .ast import (
    Arith,
    ArithExpr,
    Atom,
    Builtin,
    Constant,
    Literal,
    LogicError,
    Naf,
    Number,
    ORDER_OPS,
    Pos,
    Program,
    RESERVED_PREFIX,
    Rule,
    Term,
    Variable,
    terms_of_expr,
    variables_of_rule,
)

__all__ = [
    "GroundingError",
    "UnsafeRule",
    "UnboundArithmetic",
    "TypeMismatch",
    "FuelExhausted",
    "SafetyVerdict",
    "SafetyReport",
    "GroundProgram",
    "check_safety",
    "herbrand_universe",
    "eval_builtin",
    "ground",
]

Value = Union[Fraction, str]


class GroundingError(LogicError):
    """Base class for grounding failures."""


class UnsafeRule(GroundingError):
    """A rule variable cannot be bound by any grounding mechanism."""


class UnboundArithmetic(GroundingError):
    """Arithmetic evaluation reached a variable with no binding."""


class TypeMismatch(GroundingError):
    """A symbolic constant reached a numeric operator."""


class FuelExhausted(GroundingError):
    """The grounding fixpoint did not settle within its round budget."""


# ---------------------------------------------------------------------------
# Safety
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SafetyVerdict:
    rule: Rule
    unsafe_vars: tuple[str, ...]

    @property
    def safe(self) -> bool:
        return not self.unsafe_vars


@dataclass(frozen=True)
class SafetyReport:
    verdicts: tuple[SafetyVerdict, ...]

    @property
    def ok(self) -> bool:
        return all(v.safe for v in self.verdicts)

    @property
    def unsafe_rules(self) -> tuple[SafetyVerdict, ...]:
        return tuple(v for v in self.verdicts if not v.safe)


def _expr_vars(e: ArithExpr) -> set[str]:
    return {t.name for t in terms_of_expr(e) if isinstance(t, Variable)}


@dataclass(frozen=True)
class _Plan:
    """Static grounding plan for one rule."""

    rule: Rule
    pos: tuple[Literal, ...]
    nafs: tuple[Literal, ...]
    builtins: tuple[Builtin, ...]
    enum_vars: tuple[str, ...]  # range over program numerals
    all_vars: tuple[str, ...]
    unsafe: tuple[str, ...]


def _plan(rule: Rule) -> _Plan:
    pos = tuple(e.literal for e in rule.body if isinstance(e, Pos))
    nafs = tuple(e.literal for e in rule.body if isinstance(e, Naf))
    builtins = tuple(e for e in rule.body if isinstance(e, Builtin))

    pos_vars: set[str] = set()
    for lit in pos:
        pos_vars |= {t.name for t in lit.atom.args if isinstance(t, Variable)}
    order_vars: set[str] = set()
    for b in builtins:
        if b.op in ORDER_OPS:
            order_vars |= _expr_vars(b.lhs) | _expr_vars(b.rhs)

    def assign_fixpoint(bound: set[str]) -> None:
        changed = True
        while changed:
            changed = False
            for b in builtins:
                if (
                    b.op == ".=."
                    and isinstance(b.lhs, Variable)
                    and b.lhs.name not in bound
                    and _expr_vars(b.rhs) <= bound
                ):
                    bound.add(b.lhs.name)
                    changed = True

    bound = set(pos_vars)
    assign_fixpoint(bound)
    enum_vars = tuple(sorted(order_vars - bound))
    bound |= set(enum_vars)
    assign_fixpoint(bound)

    all_vars = variables_of_rule(rule)
    unsafe = tuple(sorted(all_vars - bound))
    return _Plan(rule, pos, nafs, builtins, enum_vars, tuple(sorted(all_vars)), unsafe)


def check_safety(program: Program) -> SafetyReport:
    """Classify every rule: a variable is safe when a positive body literal,
    an order-comparison range, or a ``.=.`` assignment can bind it.  Variables
    occurring only in the head, only under ``not``, or only on the right of
    ``.=.`` / in ``\\=`` are unsafe."""
    verdicts = tuple(SafetyVerdict(p.rule, p.unsafe) for p in map(_plan, program.rules))
    return SafetyReport(verdicts)


# ---------------------------------------------------------------------------
# Builtin evaluation
# ---------------------------------------------------------------------------


def _eval_expr(e: ArithExpr, binding: dict[str, Value]) -> Value:
    if isinstance(e, Number):
        return e.value
    if isinstance(e, Constant):
        return e.name
    if isinstance(e, Variable):
        try:
            return binding[e.name]
        except KeyError:
            raise UnboundArithmetic(f"variable {e.name} is unbound in arithmetic") from None
    lhs = _eval_expr(e.lhs, binding)
    rhs = _eval_expr(e.rhs, binding)
    if not isinstance(lhs, Fraction) or not isinstance(rhs, Fraction):
        raise TypeMismatch(f"arithmetic over non-numeric operand in {e}")
    if e.op == "+":
        return lhs + rhs
    if e.op == "-":
        return lhs - rhs
    return lhs * rhs


def eval_builtin(op: str, lhs: Value, rhs: Value) -> bool:
    """Evaluate a comparison over already-computed values."""
    if op in ORDER_OPS:
        if not isinstance(lhs, Fraction) or not isinstance(rhs, Fraction):
            raise TypeMismatch(f"{op} needs numeric operands, got {lhs!r} and {rhs!r}")
        if op == ".>.":
            return lhs > rhs
        if op == ".<.":
            return lhs < rhs
        if op == ".>=.":
            return lhs >= rhs
        return lhs <= rhs
    if op == ".=.":
        return lhs == rhs
    if op == "\\=":
        return lhs != rhs
    raise GroundingError(f"unknown builtin {op!r}")


def _apply_builtins(builtins: tuple[Builtin, ...], binding: dict[str, Value]) -> bool:
    """Evaluate builtins left to right, letting ``.=.`` bind as it goes."""
    for b in builtins:
        if (
            b.op == ".=."
            and isinstance(b.lhs, Variable)
            and b.lhs.name not in binding
        ):
            binding[b.lhs.name] = _eval_expr(b.rhs, binding)
            continue
        if not eval_builtin(b.op, _eval_expr(b.lhs, binding), _eval_expr(b.rhs, binding)):
            return False
    return True


# ---------------------------------------------------------------------------
# Universe and substitution
# ---------------------------------------------------------------------------


def herbrand_universe(program: Program) -> set[Term]:
    """Every constant and numeral written anywhere in the program."""
    universe: set[Term] = set()
    for rule in program.rules:
        if rule.head is not None:
            universe |= {t for t in rule.head.atom.args if not isinstance(t, Variable)}
        for elem in rule.body:
            if isinstance(elem, (Pos, Naf)):
                universe |= {
                    t for t in elem.literal.atom.args if not isinstance(t, Variable)
                }
            else:
                for expr in (elem.lhs, elem.rhs):
                    universe |= {
                        t for t in terms_of_expr(expr) if not isinstance(t, Variable)
                    }
    for lit in program.abducibles:
        universe |= set(lit.atom.args)
    return universe


def _term_value(t: Term) -> Value:
    return t.value if isinstance(t, Number) else t.name  # type: ignore[union-attr]


def _value_term(v: Value) -> Term:
    return Number(v) if isinstance(v, Fraction) else Constant(v)


def _subst_literal(lit: Literal, binding: dict[str, Value]) -> Literal:
    if not lit.atom.args:
        return lit
    args = tuple(
        _value_term(binding[t.name]) if isinstance(t, Variable) else t
        for t in lit.atom.args
    )
    return Literal(Atom(lit.atom.predicate, args), lit.strong_neg)


def _unify(pattern: Literal, fact: Literal, binding: dict[str, Value]) -> Optional[dict[str, Value]]:
    result = binding
    for pat, got in zip(pattern.atom.args, fact.atom.args):
        if isinstance(pat, Variable):
            value = _term_value(got)
            known = result.get(pat.name)
            if known is None:
                if result is binding:
                    result = dict(binding)
                result[pat.name] = value
            elif known != value:
                return None
        elif pat != got:
            return None
    return result


# ---------------------------------------------------------------------------
# Grounding proper
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GroundProgram:
    """A variable- and builtin-free program plus its atom table.

    ``atoms`` lists every ground literal occurring in the rules, sorted by
    rendered text; ``hidden`` holds the internally generated literals that
    model display strips."""

    rules: tuple[Rule, ...]
    atoms: tuple[Literal, ...]
    show: tuple[tuple[str, int], ...] = ()
    exceptions: tuple[tuple[str, int], ...] = ()

    @property
    def hidden(self) -> frozenset[Literal]:
        return frozenset(
            l for l in self.atoms if l.atom.predicate.startswith(RESERVED_PREFIX)
        )

    def index(self) -> dict[Literal, int]:
        return {lit: i for i, lit in enumerate(self.atoms)}

    def render(self) -> str:
        lines = [str(r) for r in self.rules]
        if self.show:
            lines.append("#show " + ", ".join(f"{p}/{n}" for p, n in self.show) + ".")
        return "\n".join(lines) + ("\n" if lines else "")


#: Stand-in body for a denial whose builtins all evaluate to true: the hidden
#: atom has no rule, so its default negation holds in every candidate and the
#: denial fires unconditionally.
_ALWAYS = Naf(Literal(Atom(RESERVED_PREFIX + "unsatisfiable")))


def _collect_atoms(rules: tuple[Rule, ...]) -> tuple[Literal, ...]:
    seen: set[Literal] = set()
    for rule in rules:
        if rule.head is not None:
            seen.add(rule.head)
        for elem in rule.body:
            if isinstance(elem, (Pos, Naf)):
                seen.add(elem.literal)
    return tuple(sorted(seen, key=str))


def _join(
    pos: tuple[Literal, ...],
    index: dict[tuple[str, bool, int], list[Literal]],
    binding: dict[str, Value],
    at: int = 0,
) -> Iterator[dict[str, Value]]:
    if at == len(pos):
        yield dict(binding)
        return
    lit = pos[at]
    key = (lit.atom.predicate, lit.strong_neg, lit.atom.arity)
    # Snapshot: heads derived while this join is being consumed must wait for
    # the next round, or a self-feeding rule would never let the round end.
    for fact in tuple(index.get(key, ())):
        extended = _unify(lit, fact, binding)
        if extended is not None:
            yield from _join(pos, index, extended, at + 1)


def ground(program: Program, *, fuel: int = 10_000) -> GroundProgram:
    """Instantiate ``program`` to a propositional `GroundProgram`.

    Abducible declarations must be expanded away first (see
    `normlog.deontic.expand_program_abducibles`); unsafe rules are rejected.
    For variable-free input this is the identity, minus builtins.
    """
    if program.abducibles:
        raise GroundingError("expand abducible declarations before grounding")
    plans = [_plan(rule) for rule in program.rules]
    for plan in plans:
        if plan.unsafe:
            names = ", ".join(plan.unsafe)
            raise UnsafeRule(f"unsafe variables {names} in rule: {plan.rule}")

    numerals = sorted(
        {t.value for t in herbrand_universe(program) if isinstance(t, Number)}
    )

    # Variable-free rules pass through, minus builtins that evaluate to true.
    passthrough: dict[int, Optional[Rule]] = {}
    base: set[Literal] = set()
    index: dict[tuple[str, bool, int], list[Literal]] = {}

    def derive(lit: Literal) -> bool:
        if lit in base:
            return False
        base.add(lit)
        index.setdefault((lit.atom.predicate, lit.strong_neg, lit.atom.arity), []).append(lit)
        return True

    for i, plan in enumerate(plans):
        if plan.all_vars:
            continue
        binding: dict[str, Value] = {}
        if not _apply_builtins(plan.builtins, binding):
            passthrough[i] = None
            continue
        body = tuple(e for e in plan.rule.body if not isinstance(e, Builtin))
        if plan.rule.head is None and not body:
            body = (_ALWAYS,)  # the denial's builtins always hold
        passthrough[i] = Rule(plan.rule.head, body, plan.rule.span)

    instances: dict[int, dict[tuple[Value, ...], Rule]] = {
        i: {} for i, p in enumerate(plans) if p.all_vars
    }

    rounds = 0
    changed = True
    while changed:
        rounds += 1
        if rounds > fuel:
            raise FuelExhausted(f"grounding did not settle within {fuel} rounds")
        changed = False
        for i, plan in enumerate(plans):
            if not plan.all_vars:
                kept = passthrough[i]
                if kept is not None and kept.head is not None:
                    if all(e.literal in base for e in kept.body if isinstance(e, Pos)):
                        changed |= derive(kept.head)
                continue
            for partial in _join(plan.pos, index, {}):
                for combo in itertools.product(numerals, repeat=len(plan.enum_vars)):
                    binding = dict(partial)
                    binding.update(zip(plan.enum_vars, combo))
                    if not _apply_builtins(plan.builtins, binding):
                        continue
                    key = tuple(binding[v] for v in plan.all_vars)
                    if key in instances[i]:
                        continue
                    head = (
                        _subst_literal(plan.rule.head, binding)
                        if plan.rule.head is not None
                        else None
                    )
                    body = tuple(
                        Pos(_subst_literal(e.literal, binding))
                        if isinstance(e, Pos)
                        else Naf(_subst_literal(e.literal, binding))
                        for e in plan.rule.body
                        if not isinstance(e, Builtin)
                    )
                    if head is None and not body:
                        body = (_ALWAYS,)
                    instances[i][key] = Rule(head, body, plan.rule.span)
                    changed = True
                    if head is not None:
                        changed |= derive(head)

    ordered: list[Rule] = []
    for i, plan in enumerate(plans):
        if not plan.all_vars:
            kept = passthrough[i]
            if kept is not None:
                ordered.append(kept)
        else:
            ordered.extend(sorted(instances[i].values(), key=str))

    rules = tuple(ordered)
    return GroundProgram(rules, _collect_atoms(rules), program.show, program.exceptions)
