"""Stable-model semantics over ground programs.

A candidate set of literals M is stable when it equals the least model of
the reduct: delete every rule whose default-negated body meets M, strip the
remaining naf literals, and close the definite remainder under forward
chaining.  Denials keep a distinguished ``false`` head through the reduct;
a candidate that derives ``false`` (directly, or through the implicit
per-atom consistency denial ``:- p, -p``) is rejected.

Two enumerators are provided:

* `enumerate_models` - branch-and-propagate search.  Propagation only prunes
  candidates that can extend to no stable model (dead support, fired rule
  with a false head, fired denial), and every surviving leaf is re-verified
  with `is_stable`, so the output is exactly the set of stable models.
* `oracle_models` - the brute-force reference: sweep all 2^n candidate sets
  and keep the stable ones.  Deliberately naive; used to cross-check the
  search enumerator.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass
from typing import AbstractSet, Iterable, Optional, Sequence

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
    complement,
)
from .deontic import AlethicNotion, alethic_pattern, expand_program_abducibles
from .grounder import GroundProgram, ground

__all__ = [
    "FALSE",
    "InconsistentCandidate",
    "LiteralNotInModel",
    "OracleInfeasible",
    "UnknownPredicateWarning",
    "AnswerSet",
    "reduct",
    "least_model",
    "is_stable",
    "enumerate_models",
    "oracle_models",
    "query",
    "Justification",
    "justify",
    "ModalStatus",
    "modal_classify",
    "evaluate_notion",
    "solve_program",
]

#: Distinguished head carried by denials through the reduct.
FALSE = Literal(Atom("false"))


class InconsistentCandidate(LogicError):
    """A candidate set contains an atom together with its strong negation."""


class LiteralNotInModel(LogicError):
    """Justification was requested for a literal the model does not contain."""


class OracleInfeasible(LogicError):
    """The brute-force sweep was refused because 2^n is out of reach."""


class UnknownPredicateWarning(UserWarning):
    """A query goal uses a predicate absent from the program signature."""


# ---------------------------------------------------------------------------
# Models
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AnswerSet:
    """One stable model plus the display directives it was computed under."""

    literals: frozenset[Literal]
    show: tuple[tuple[str, int], ...] = ()

    def visible(self) -> list[Literal]:
        """Model literals minus internally generated ones, sorted."""
        return sorted(
            (l for l in self.literals if not l.atom.predicate.startswith(RESERVED_PREFIX)),
            key=str,
        )

    def shown(self) -> list[Literal]:
        """`visible` filtered down to the #show projection, when one is set."""
        lits = self.visible()
        if not self.show:
            return lits
        wanted = set(self.show)
        return [l for l in lits if (l.atom.predicate, l.atom.arity) in wanted]

    def naf_complements(self) -> list[Literal]:
        """Complements of shown literals that the model leaves underivable."""
        return sorted(
            {complement(l) for l in self.shown() if complement(l) not in self.literals},
            key=str,
        )

    def to_dict(self, *, show_naf: bool = False) -> dict:
        payload: dict = {
            "literals": [str(l) for l in self.visible()],
            "shown": {str(l): True for l in self.shown()},
        }
        if show_naf:
            payload["naf"] = [f"not {l}" for l in self.naf_complements()]
        return payload

    def __contains__(self, lit: Literal) -> bool:
        return lit in self.literals


def _sort_key(literals: Iterable[Literal]) -> tuple[str, ...]:
    return tuple(sorted(str(l) for l in literals))


def models_payload(models: Sequence[AnswerSet], *, show_naf: bool = False) -> dict:
    return {
        "count": len(models),
        "models": [m.to_dict(show_naf=show_naf) for m in models],
    }


# ---------------------------------------------------------------------------
# Reduct and least model (literal level)
# ---------------------------------------------------------------------------


def _check_consistent(candidate: AbstractSet[Literal]) -> None:
    for lit in candidate:
        if not lit.strong_neg and complement(lit) in candidate:
            raise InconsistentCandidate(f"candidate holds both {lit} and {complement(lit)}")


def reduct(g: GroundProgram, candidate: AbstractSet[Literal]) -> GroundProgram:
    """Delete rules whose naf body meets the candidate; strip remaining naf."""
    _check_consistent(candidate)
    kept: list[Rule] = []
    for rule in g.rules:
        if any(isinstance(e, Naf) and e.literal in candidate for e in rule.body):
            continue
        body = tuple(e for e in rule.body if isinstance(e, Pos))
        if rule.head is None and not body:
            # The whole body was naf and none of it met the candidate: the
            # denial is unconditionally violated, which a definite program
            # can only express by deriving FALSE outright.
            kept.append(Rule(FALSE, (), rule.span))
            continue
        kept.append(Rule(rule.head, body, rule.span))
    return GroundProgram(tuple(kept), g.atoms, g.show, g.exceptions)


def least_model(g: GroundProgram) -> set[Literal]:
    """Forward-chaining closure of a definite ground program.

    The result contains `FALSE` when a denial body holds or when two
    complementary literals are both derivable (implicit consistency denial).
    """
    for rule in g.rules:
        if any(isinstance(e, Naf) for e in rule.body):
            raise LogicError("least_model needs a definite program (no naf)")
    derived: set[Literal] = set()
    false_hit = False
    changed = True
    while changed:
        changed = False
        for rule in g.rules:
            if all(e.literal in derived for e in rule.body):
                if rule.head is None:
                    if not false_hit:
                        false_hit = True
                        changed = True
                elif rule.head not in derived:
                    derived.add(rule.head)
                    changed = True
    if any(not l.strong_neg and complement(l) in derived for l in derived):
        false_hit = True
    if false_hit:
        derived.add(FALSE)
    return derived


def is_stable(g: GroundProgram, candidate: AbstractSet[Literal]) -> bool:
    """True iff the candidate is consistent and reproduces itself exactly."""
    try:
        _check_consistent(candidate)
    except InconsistentCandidate:
        return False
    kernel = _Kernel(g)
    mask = kernel.mask_of(candidate)
    if mask is None:  # a literal outside the atom table can never be derived
        return False
    return kernel.is_stable_mask(mask)


# ---------------------------------------------------------------------------
# Integer kernel
# ---------------------------------------------------------------------------


class _Kernel:
    """Ground program compiled to bitmask rules for tight inner loops."""

    def __init__(self, g: GroundProgram):
        self.ground = g
        self.atoms = g.atoms
        self.n = len(g.atoms)
        self.ids = {lit: i for i, lit in enumerate(g.atoms)}
        self.bit = [1 << i for i in range(self.n)]
        rules: list[tuple[int, int, int]] = []
        head_mask = 0
        for rule in g.rules:
            pos = naf = 0
            for e in rule.body:
                if isinstance(e, Pos):
                    pos |= self.bit[self.ids[e.literal]]
                else:
                    naf |= self.bit[self.ids[e.literal]]
            if rule.head is None:
                rules.append((-1, pos, naf))
            else:
                h = self.ids[rule.head]
                head_mask |= self.bit[h]
                rules.append((h, pos, naf))
        for lit, i in self.ids.items():
            if not lit.strong_neg:
                j = self.ids.get(complement(lit))
                if j is not None:  # implicit consistency denial :- p, -p.
                    rules.append((-1, self.bit[i] | self.bit[j], 0))
        self.rules = rules
        self.head_mask = head_mask

    def mask_of(self, literals: AbstractSet[Literal]) -> Optional[int]:
        mask = 0
        for lit in literals:
            i = self.ids.get(lit)
            if i is None:
                return None
            mask |= self.bit[i]
        return mask

    def literals_of(self, mask: int) -> frozenset[Literal]:
        return frozenset(self.atoms[i] for i in range(self.n) if mask & self.bit[i])

    def is_stable_mask(self, cand: int) -> bool:
        derived = 0
        rules = self.rules
        while True:
            changed = False
            for h, pos, naf in rules:
                if naf & cand or pos & ~derived:
                    continue
                if h < 0:
                    return False  # denial (or consistency) fires
                b = 1 << h
                if not derived & b:
                    derived |= b
                    changed = True
            if not changed:
                return derived == cand

    def propagate(self, t: int, f: int) -> Optional[tuple[int, int]]:
        """Close a partial assignment under three sound rules; None = conflict.

        * a fired rule forces its head true (denial head: conflict);
        * a true literal with no live supporting rule: conflict;
        * an unassigned literal with no live supporting rule goes false.
        """
        full = (1 << self.n) - 1
        rules = self.rules
        while True:
            changed = False
            live_heads = 0
            for h, pos, naf in rules:
                if pos & f or naf & t:
                    continue  # rule can no longer fire
                if h >= 0:
                    live_heads |= 1 << h
                if not pos & ~t and not naf & ~f:  # fired
                    if h < 0:
                        return None
                    b = 1 << h
                    if f & b:
                        return None
                    if not t & b:
                        t |= b
                        changed = True
            unsupported = full & ~live_heads
            if t & unsupported:
                return None
            new_false = unsupported & ~f
            if new_false:
                f |= new_false
                changed = True
            if not changed:
                return t, f


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def enumerate_models(g: GroundProgram, max_models: Optional[int] = None) -> list[AnswerSet]:
    """All stable models, in lexicographic order of their rendered literals.

    ``max_models`` truncates the returned list after ordering, so a prefix
    is always a prefix of the full enumeration.
    """
    kernel = _Kernel(g)
    full = (1 << kernel.n) - 1
    found: list[int] = []

    def dfs(t: int, f: int) -> None:
        result = kernel.propagate(t, f)
        if result is None:
            return
        t, f = result
        free = full & ~(t | f)
        if not free:
            if kernel.is_stable_mask(t):
                found.append(t)
            return
        v = free & -free  # lowest unassigned literal
        dfs(t | v, f)
        dfs(t, f | v)

    # literals that head no rule can never be true
    dfs(0, full & ~kernel.head_mask)

    models = sorted((kernel.literals_of(m) for m in found), key=_sort_key)
    answer_sets = [AnswerSet(m, g.show) for m in models]
    if max_models is not None:
        answer_sets = answer_sets[:max_models]
    return answer_sets


def oracle_models(g: GroundProgram, *, max_atoms: int = 20) -> list[frozenset[Literal]]:
    """Brute-force reference enumeration: test every subset of the atom table.

    Exponential on purpose - this is the independent yardstick the search
    enumerator is checked against.  Refuses atom tables past ``max_atoms``.
    """
    kernel = _Kernel(g)
    if kernel.n > max_atoms:
        raise OracleInfeasible(
            f"{kernel.n} atoms means 2^{kernel.n} candidates; raise max_atoms to force"
        )
    stable = [
        kernel.literals_of(cand)
        for cand in range(1 << kernel.n)
        if kernel.is_stable_mask(cand)
    ]
    return sorted(stable, key=_sort_key)


def query(
    g: GroundProgram,
    goals: Sequence[BodyElem],
    models: Optional[Sequence[AnswerSet]] = None,
) -> list[AnswerSet]:
    """Models satisfying every goal; ``goals=()`` is the trivial query true."""
    known = {(l.atom.predicate, l.atom.arity) for l in g.atoms}
    for goal in goals:
        if isinstance(goal, (Pos, Naf)):
            key = (goal.literal.atom.predicate, goal.literal.atom.arity)
            if key not in known:
                warnings.warn(
                    f"query uses unknown predicate {key[0]}/{key[1]}",
                    UnknownPredicateWarning,
                    stacklevel=2,
                )
    if models is None:
        models = enumerate_models(g)

    def holds(m: AnswerSet, goal: BodyElem) -> bool:
        if isinstance(goal, Pos):
            return goal.literal in m.literals
        if isinstance(goal, Naf):
            return goal.literal not in m.literals
        raise LogicError(f"builtins are not allowed in queries: {goal}")

    return [m for m in models if all(holds(m, goal) for goal in goals)]


# ---------------------------------------------------------------------------
# Justification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Justification:
    """Why one literal belongs to one stable model.

    ``kind`` is ``fact`` (rule with empty body), ``abduced`` (supported by
    an even-loop choice), or ``rule``.  ``children`` justify the positive
    body; ``naf_leaves`` list the default-negated literals, each absent
    from the model by construction.
    """

    literal: Literal
    kind: str
    rule: Optional[Rule] = None
    children: tuple["Justification", ...] = ()
    naf_leaves: tuple[Literal, ...] = ()

    def to_dict(self) -> dict:
        payload: dict = {"literal": str(self.literal), "kind": self.kind}
        if self.kind == "rule":
            payload["rule"] = str(self.rule)
            payload["children"] = [c.to_dict() for c in self.children]
            payload["naf"] = [f"not {l}" for l in self.naf_leaves]
        return payload

    def to_text(self, indent: int = 0) -> str:
        pad = "  " * indent
        if self.kind == "fact":
            lines = [f"{pad}{self.literal}  [fact]"]
        elif self.kind == "abduced":
            lines = [f"{pad}{self.literal}  [abduced]"]
        else:
            lines = [f"{pad}{self.literal}  <=  {self.rule}"]
            for child in self.children:
                lines.append(child.to_text(indent + 1))
            for leaf in self.naf_leaves:
                lines.append(f"{'  ' * (indent + 1)}not {leaf}  [absent]")
        return "\n".join(lines)


def _is_even_loop_support(rule: Rule) -> bool:
    return (
        len(rule.body) == 1
        and isinstance(rule.body[0], Naf)
        and rule.body[0].literal.atom.predicate.startswith(RESERVED_PREFIX)
    )


def justify(g: GroundProgram, model: AnswerSet, lit: Literal) -> Justification:
    """Derivation tree for ``lit`` inside ``model``.

    Witness rules are taken from the forward-chaining rounds of the reduct,
    so every positive child is justified at a strictly earlier round and the
    tree is well-founded.
    """
    if lit not in model.literals:
        raise LiteralNotInModel(f"{lit} is not in the model")

    naf_of: dict[Rule, tuple[Literal, ...]] = {}
    stripped: list[Rule] = []
    for original in g.rules:
        if original.head is None:
            continue
        if any(isinstance(e, Naf) and e.literal in model.literals for e in original.body):
            continue
        bare = Rule(
            original.head, tuple(e for e in original.body if isinstance(e, Pos)), original.span
        )
        stripped.append(bare)
        naf_of.setdefault(bare, tuple(
            e.literal for e in original.body if isinstance(e, Naf)
        ))

    witness: dict[Literal, Rule] = {}
    derived: set[Literal] = set()
    while True:
        frontier = [
            r
            for r in stripped
            if r.head not in derived and all(e.literal in derived for e in r.body)
        ]
        if not frontier:
            break
        for r in frontier:
            if r.head not in witness:
                witness[r.head] = r
        derived.update(r.head for r in frontier)

    def build(target: Literal) -> Justification:
        rule = witness.get(target)
        if rule is None:  # cannot happen for literals of a stable model
            raise LiteralNotInModel(f"{target} has no derivation in the reduct")
        nafs = naf_of[rule]
        if not rule.body and not nafs:
            return Justification(target, "fact", rule)
        full_rule = Rule(rule.head, tuple(rule.body) + tuple(Naf(l) for l in nafs))
        if _is_even_loop_support(full_rule):
            return Justification(target, "abduced", full_rule)
        return Justification(
            target,
            "rule",
            full_rule,
            tuple(build(e.literal) for e in rule.body),
            nafs,
        )

    return build(lit)


# ---------------------------------------------------------------------------
# Modal status of atoms inside a model
# ---------------------------------------------------------------------------


class ModalStatus(enum.Enum):
    NECESSARY = "necessary"
    IMPOSSIBLE = "impossible"
    CONTINGENT = "contingent"


def modal_classify(model: AnswerSet, atom: Atom) -> ModalStatus:
    """Provably true, provably false, or neither, within one world."""
    if Literal(atom) in model.literals:
        return ModalStatus.NECESSARY
    if Literal(atom, True) in model.literals:
        return ModalStatus.IMPOSSIBLE
    return ModalStatus.CONTINGENT


def evaluate_notion(model: AnswerSet, notion: AlethicNotion, atom: Atom) -> bool:
    """Evaluate an alethic notion of ``atom`` against one model."""
    pattern = alethic_pattern(notion, atom)

    def holds(elem: BodyElem) -> bool:
        if isinstance(elem, Pos):
            return elem.literal in model.literals
        assert isinstance(elem, Naf)
        return elem.literal not in model.literals

    results = (holds(e) for e in pattern.elems)
    return any(results) if pattern.disjunctive else all(results)


# ---------------------------------------------------------------------------
# One-call pipeline
# ---------------------------------------------------------------------------


def solve_program(
    program: Program, *, max_models: Optional[int] = None
) -> tuple[GroundProgram, list[AnswerSet]]:
    """Expand abducibles, ground, enumerate: the standard pipeline."""
    expanded = expand_program_abducibles(program)
    g = ground(expanded)
    return g, enumerate_models(g, max_models)
