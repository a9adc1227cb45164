"""Acceptance gate: the thirteen end-to-end properties, one test each.

Every test here drives the full pipeline (parse -> compile/expand -> ground
-> enumerate) against either the built-in corpus, seeded random programs, or
the reference listings, and checks externally meaningful behavior: which
worlds exist, which duties detach, which exceptions trigger, and that the
search enumerator agrees with the exhaustive oracle.
"""

from __future__ import annotations

import random
import time

import pytest

from normlog import (
    Atom,
    Literal,
    Naf,
    Pos,
    Program,
    Rule,
    compile_theory,
    corpus,
    enumerate_models,
    ground,
    is_stable,
    justify,
    oracle_models,
    parse_deontic,
    parse_program,
    parse_query,
    query,
    render_program,
    solve_program,
)
from normlog.corpus import CASES, corpus_dir
from normlog.cli import check_narrative
from normlog.grounder import GroundProgram

from conftest import FUZZ_COUNT, make_rng, model_sets, random_ground_program
from listings import LISTINGS


def corpus_text(name: str) -> str:
    return (corpus_dir() / name).read_text()


def solve_corpus(name: str):
    return solve_program(parse_program(corpus_text(name)))


def worlds(models) -> set[frozenset[str]]:
    """Visible (non-internal) literals of each model, as comparable sets."""
    return {frozenset(str(l) for l in m.visible()) for m in models}


def fact_leaves(tree) -> set[str]:
    if tree.kind in ("fact", "abduced"):
        return {str(tree.literal)}
    out: set[str] = set()
    for child in tree.children:
        out |= fact_leaves(child)
    return out


def with_extra_rules(g: GroundProgram, extra: tuple[Rule, ...]) -> GroundProgram:
    return GroundProgram(g.rules + extra, g.atoms, g.show, g.exceptions)


# ---------------------------------------------------------------------------
# Shared expensive artifacts
# ---------------------------------------------------------------------------


@pytest.fixture(scope="session")
def fuzz_suite():
    """FUZZ_COUNT seeded random ground programs with their models."""
    rng = make_rng(0)
    suite = []
    for _ in range(FUZZ_COUNT):
        program = random_ground_program(rng)
        g = ground(program)
        suite.append((program, g, enumerate_models(g)))
    return suite


@pytest.fixture(scope="session")
def corpus_solved():
    """Every solve-kind corpus case, grounded and enumerated once."""
    out = {}
    for case in CASES:
        if case.kind == "solve":
            g, models = solve_corpus(case.files[0])
            out[case.name] = (g, models)
    return out


@pytest.fixture(scope="session")
def car_reports():
    """Every car-borrowing narrative checked against the normative base."""
    base = parse_program(corpus_text("car.asp"))
    return {
        case.name: check_narrative(
            base, parse_program(corpus_text(case.files[1])), case.name
        )
        for case in CASES
        if case.kind == "check"
    }


# ---------------------------------------------------------------------------
# The thirteen properties
# ---------------------------------------------------------------------------


def test_01_contrary_to_duty_compiles_to_two_coherent_worlds():
    theory = parse_deontic(corpus_text("chisholm_worlds.deon"))
    program, _ = compile_theory(theory)
    _, models = solve_program(program)
    assert len(models) == 2
    assert worlds(models) == {
        frozenset({"go", "tell"}),
        frozenset({"-go", "-tell"}),
    }


def test_02_default_rule_encoding_wrongly_detaches_the_duty():
    _, models = solve_corpus("obligation_as_rule.asp")
    assert any(Literal(Atom("go")) in m for m in models)


def test_03_conditional_duties_follow_the_dog():
    g, models = solve_corpus("dog.asp")
    matching = query(g, parse_query("warning_sign"), models)
    assert worlds(matching) == {frozenset({"dog", "warning_sign"})}

    g_neg, neg_models = solve_corpus("dog_neg.asp")
    assert worlds(query(g_neg, (), neg_models)) == {
        frozenset({"-dog", "-warning_sign"})
    }


def test_04_gentle_murder_keeps_refusal_open():
    _, models = solve_corpus("forrester.asp")
    kill = Literal(Atom("kill"))
    assert any(Literal(Atom("kill"), True) in m for m in models)
    assert all(Literal(Atom("kill_gently")) in m for m in models if kill in m)
    assert any(kill in m for m in models)  # the gentle branch really exists


def test_05_symmetric_conflict_splits_into_two_worlds():
    _, models = solve_corpus("sartre.asp")
    assert worlds(models) == {frozenset({"join"}), frozenset({"stay"})}


def test_06_ought_implies_can():
    _, models = solve_corpus("kant.asp")
    assert models
    assert all(Literal(Atom("pay")) not in m for m in models)

    _, open_models = solve_corpus("kant_abduced.asp")
    unbroke = [m for m in open_models if Literal(Atom("broke")) not in m]
    assert unbroke
    assert all(Literal(Atom("pay")) in m for m in unbroke)


def test_07_good_samaritan_needs_the_conditional_form():
    program = parse_program(corpus_text("goodsam.asp"))
    assert len(program.rules) == 3
    _, models = solve_program(program)
    assert models == []

    _, fixed = solve_corpus("goodsam_conditional.asp")
    assert fixed
    assert all(Literal(Atom("help")) in m for m in fixed)


def test_08_fence_worlds_with_and_without_the_calm_duty():
    _, models = solve_corpus("fence.asp")
    assert worlds(models) == {frozenset({"f", "w"}), frozenset({"f", "s", "w"})}

    g_calm, calm_models = solve_corpus("fence_calm.asp")
    assert worlds(calm_models) == {
        frozenset({"-f", "calm", "s"}),
        frozenset({"f", "s", "w"}),
    }
    fenceless = next(w for w in worlds(calm_models) if "f" not in w)
    assert "calm" in fenceless and "-f" in fenceless
    # the two-world golden is independently confirmed by the exhaustive oracle
    assert model_sets(calm_models) == [
        frozenset(str(l) for l in m) for m in oracle_models(g_calm)
    ]


def test_09_car_borrowing_narratives_trigger_the_right_failures(car_reports):
    triggered = {
        name: [str(l) for l in report.triggered]
        for name, report in car_reports.items()
    }
    assert triggered["car_n2"] == []
    assert triggered["car_n3"] == ["fail_to_return_by_noon"]
    assert triggered["car_n4"] == ["fail_to_return_ok_battery"]
    assert triggered["car_n5"] == [
        "fail_to_return_by_noon",
        "fail_to_return_ok_battery",
    ]
    assert triggered["car_n7"] == []

    report = car_reports["car_n3"]
    tree = justify(
        report.ground_program,
        report.models[0],
        Literal(Atom("fail_to_return_by_noon")),
    )
    assert "sick(jones,8)" in fact_leaves(tree)


def test_10_deontic_axioms_hold_across_all_programs(
    fuzz_suite, corpus_solved, car_reports
):
    rng = make_rng(100)
    everything = [(g, models) for _, g, models in fuzz_suite]
    everything += list(corpus_solved.values())
    everything += [(r.ground_program, r.models) for r in car_reports.values()]

    k_nonvacuous = 0
    nec_checks = 0
    for g, models in everything:
        # D: no world settles both an atom and its strong negation.
        for m in models:
            assert not any(
                not l.strong_neg and Literal(l.atom, True) in m.literals
                for l in m.literals
            )

        # K: obliging p and obliging p->q makes q settle in every world.
        pos_atoms = [
            l
            for l in g.atoms
            if not l.strong_neg and not l.atom.predicate.startswith("o_")
        ]
        if len(pos_atoms) >= 2:
            p, q = rng.sample(pos_atoms, 2)
            augmented = with_extra_rules(
                g, (Rule(None, (Pos(p), Naf(q))), Rule(None, (Naf(p),)))
            )
            k_models = enumerate_models(augmented)
            assert all(q in m for m in k_models)
            k_nonvacuous += bool(k_models)

        # NEC: a settled literal can be declared necessary without
        # destabilizing the world that settles it.
        for m in models:
            for l in m.literals:
                assert is_stable(
                    with_extra_rules(g, (Rule(None, (Naf(l),)),)), m.literals
                )
                nec_checks += 1

    assert k_nonvacuous > 0
    assert nec_checks > 0


def test_11_search_enumeration_matches_the_exhaustive_oracle(
    fuzz_suite, corpus_solved, car_reports
):
    rng = make_rng(200)
    for program, g, models in fuzz_suite:
        assert model_sets(models) == [
            frozenset(str(l) for l in m) for m in oracle_models(g)
        ], program

    for name, (g, models) in corpus_solved.items():
        assert model_sets(models) == [
            frozenset(str(l) for l in m) for m in oracle_models(g)
        ], name

    # The car ground programs are far past exhaustive reach (~70 atoms), so
    # each claimed model is re-verified by the stability check and the
    # enumeration is re-run under a shuffled rule order.
    for name, report in car_reports.items():
        g = report.ground_program
        for m in report.models:
            assert is_stable(g, m.literals), name
        shuffled = list(g.rules)
        rng.shuffle(shuffled)
        reordered = GroundProgram(tuple(shuffled), g.atoms, g.show, g.exceptions)
        assert model_sets(enumerate_models(reordered)) == model_sets(report.models), name

    assert any(len(models) >= 2 for _, _, models in fuzz_suite)


def test_12_self_defeating_rules_exclude_their_own_trigger():
    rng = make_rng(300)
    defused_hits = 0
    for _ in range(FUZZ_COUNT):
        base = random_ground_program(rng, allow_denials=False)
        pool = sorted(
            {r.head for r in base.rules if r.head is not None and not r.head.strong_neg},
            key=str,
        )
        if not pool:
            continue
        trigger = tuple(Pos(l) for l in rng.sample(pool, rng.randint(1, min(2, len(pool)))))
        z = Literal(Atom("z"))  # fresh: the pool only uses single letters a..g
        self_defeating = Rule(z, trigger + (Naf(z),))

        base_models = model_sets(enumerate_models(ground(base)))
        constrained = Program(base.rules + (self_defeating,))
        got = model_sets(enumerate_models(ground(constrained)))

        # Adding the rule keeps exactly the worlds that falsify its trigger.
        survivors = [
            m for m in base_models
            if not all(str(e.literal) in m for e in trigger)
        ]
        assert got == survivors
        assert all("z" not in m for m in got)

        # Independent support for the head defuses the constraint entirely.
        defused = Program(base.rules + (self_defeating, Rule(z, ())))
        defused_models = model_sets(enumerate_models(ground(defused)))
        assert defused_models == sorted(
            (m | {"z"} for m in base_models), key=lambda s: tuple(sorted(s))
        )
        defused_hits += any(
            all(str(e.literal) in m for e in trigger) for m in defused_models
        )
    assert defused_hits > 0  # the law was exercised, not vacuously satisfied


def test_13_reference_listings_survive_the_round_trip():
    assert len(LISTINGS) >= 30
    for name, text in LISTINGS.items():
        program = parse_program(text)
        reparsed = parse_program(render_program(program))
        assert reparsed.rules == program.rules, name
        assert reparsed.abducibles == program.abducibles, name
        assert reparsed.show == program.show, name
        assert reparsed.exceptions == program.exceptions, name


# ---------------------------------------------------------------------------
# Budget guard
# ---------------------------------------------------------------------------


def test_each_corpus_case_stays_under_a_second():
    for case in CASES:
        start = time.perf_counter()
        corpus.run_case(case)
        elapsed = time.perf_counter() - start
        assert elapsed < 1.0, f"{case.name} took {elapsed:.2f}s"
