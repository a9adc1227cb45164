"""Shared test helpers: seeded random ground-program generation.

The fuzz seed is fixed for reproducibility and can be overridden through
the NORMLOG_SEED environment variable.
"""

from __future__ import annotations

import os
import random

from normlog import Atom, Literal, Naf, Pos, Program, Rule

SEED = int(os.environ.get("NORMLOG_SEED", "3407"))

# Property-test breadth: full runs use FUZZ_COUNT programs, unit tests a
# smaller slice.
FUZZ_COUNT = 500

_NAMES = ("a", "b", "c", "d", "e", "f", "g")


def make_rng(offset: int = 0) -> random.Random:
    return random.Random(SEED + offset)


def literal_pool(max_atoms: int = 7, strong: int = 2) -> list[Literal]:
    """Positive literals a..g plus strongly negated -a, -b.

    Keeps the ground atom table at <= max_atoms + strong entries so the
    all-subsets oracle stays tractable.
    """
    names = _NAMES[:max_atoms]
    pool = [Literal(Atom(n)) for n in names]
    pool += [Literal(Atom(n), strong_neg=True) for n in names[:strong]]
    return pool


def random_ground_program(
    rng: random.Random,
    max_atoms: int = 7,
    max_rules: int = 20,
    strong: int = 2,
    allow_denials: bool = True,
) -> Program:
    """A random ground normal program over a small literal pool.

    Besides uniformly random rules, mutually-negating pairs
    (``x :- not y.`` / ``y :- not x.``) are injected now and then so a
    useful share of the generated programs branches into several models
    instead of collapsing into facts.
    """
    pool = literal_pool(max_atoms, strong)
    rules = []
    budget = rng.randint(1, max_rules)
    while len(rules) < budget:
        if len(rules) + 2 <= budget and rng.random() < 0.2:
            x, y = rng.sample(pool, 2)
            rules.append(Rule(x, (Naf(y),)))
            rules.append(Rule(y, (Naf(x),)))
            continue
        body = tuple(
            (Pos if rng.random() < 0.6 else Naf)(rng.choice(pool))
            for _ in range(rng.randint(0, 3))
        )
        if allow_denials and body and rng.random() < 0.15:
            rules.append(Rule(None, body))
        else:
            rules.append(Rule(rng.choice(pool), body))
    return Program(tuple(rules))


def model_sets(models) -> list[frozenset[str]]:
    """Canonical comparable form: each model as a frozenset of literal text."""
    return sorted(
        (frozenset(str(l) for l in m.literals) for m in models),
        key=lambda s: tuple(sorted(s)),
    )
