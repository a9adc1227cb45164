"""Built-in regression corpus.

Each case is either a ``solve`` case (enumerate the stable models of one
program) or a ``check`` case (run a fact narrative against the car-borrowing
normative base).  The expected output of every case is frozen as canonical
JSON under ``goldens/``; ``normlog corpus`` re-runs the cases and compares
bytes.  Cases marked ``reconstructed`` contain facts or abducible
declarations chosen to realize the scenario they model, rather than copied
from a fixed source; the scenario each one encodes is described in its
``note`` and in the case file's own comments.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..cli import check_narrative
from ..parser import parse_program
from ..solver import models_payload, solve_program

__all__ = ["CorpusCase", "CASES", "corpus_dir", "golden_path", "run_case"]


@dataclass(frozen=True)
class CorpusCase:
    name: str
    kind: str  # "solve" | "check"
    files: tuple[str, ...]  # solve: (program,); check: (base, narrative)
    note: str
    reconstructed: bool = False


def corpus_dir() -> Path:
    return Path(__file__).resolve().parent


def golden_path(case: CorpusCase) -> Path:
    return corpus_dir() / "goldens" / f"{case.name}.json"


def run_case(case: CorpusCase) -> bytes:
    """Run one case and return its canonical JSON output."""
    paths = [corpus_dir() / f for f in case.files]
    if case.kind == "solve":
        program = parse_program(paths[0].read_text())
        _, models = solve_program(program)
        payload = models_payload(models)
    elif case.kind == "check":
        base = parse_program(paths[0].read_text())
        narrative = parse_program(paths[1].read_text())
        payload = check_narrative(base, narrative, case.name).to_payload()
    else:  # pragma: no cover - registry is static
        raise ValueError(f"unknown corpus kind: {case.kind}")
    return (json.dumps(payload, indent=2, sort_keys=True) + "\n").encode()


CASES: tuple[CorpusCase, ...] = (
    CorpusCase(
        "chisholm",
        "solve",
        ("chisholm.asp",),
        "contrary-to-duty: primary duty to go, tell-if-going, warn-if-not; "
        "open worlds over go/tell",
    ),
    CorpusCase(
        "chisholm_ignore",
        "solve",
        ("chisholm_ignore.asp",),
        "contrary-to-duty with the primary duty ignored as fact; the "
        "violation marker must surface",
    ),
    CorpusCase(
        "obligation_as_rule",
        "solve",
        ("obligation_as_rule.asp",),
        "anti-pattern: encoding an obligation as a default rule wrongly "
        "detaches the obligated act as fact",
    ),
    CorpusCase(
        "asparagus",
        "solve",
        ("asparagus.asp",),
        "defeasible etiquette norm triggered: eating asparagus obliges "
        "eating with fingers",
        reconstructed=True,
    ),
    CorpusCase(
        "asparagus_apple",
        "solve",
        ("asparagus_apple.asp",),
        "defeasible etiquette norm idle: eating an apple leaves fingers "
        "non-obligatory",
        reconstructed=True,
    ),
    CorpusCase(
        "dog",
        "solve",
        ("dog.asp",),
        "dual conditional duties: a dog obliges a warning sign, no dog "
        "obliges its absence",
        reconstructed=True,
    ),
    CorpusCase(
        "dog_neg",
        "solve",
        ("dog_neg.asp",),
        "dual conditional duties with the explicitly-negated trigger",
        reconstructed=True,
    ),
    CorpusCase(
        "forrester",
        "solve",
        ("forrester.asp",),
        "gentle-murder: killing is forbidden, but killing obliges killing "
        "gently, which implies killing",
        reconstructed=True,
    ),
    CorpusCase(
        "sartre",
        "solve",
        ("sartre.asp",),
        "symmetric conflicting obligations resolved into two exclusive "
        "worlds",
        reconstructed=True,
    ),
    CorpusCase(
        "kant",
        "solve",
        ("kant.asp",),
        "ought-implies-can: a broke agent cannot be obliged to pay",
    ),
    CorpusCase(
        "kant_abduced",
        "solve",
        ("kant_abduced.asp",),
        "ought-implies-can with brokeness abducible: payment obligatory "
        "exactly when not broke",
        reconstructed=True,
    ),
    CorpusCase(
        "ross",
        "solve",
        ("ross.asp",),
        "mailing obliged; burning derivable only alongside posting, so the "
        "disjunction-introduction reading never stands alone",
        reconstructed=True,
    ),
    CorpusCase(
        "goodsam",
        "solve",
        ("goodsam.asp",),
        "mis-stated Good Samaritan: obliging both robbery and help has no "
        "stable world",
    ),
    CorpusCase(
        "goodsam_conditional",
        "solve",
        ("goodsam_conditional.asp",),
        "correctly conditionalized Good Samaritan: the robbery fact makes "
        "help mandatory",
        reconstructed=True,
    ),
    CorpusCase(
        "speed",
        "solve",
        ("speed.asp",),
        "permission with exception: every car may drive up to the limit, "
        "police cars up to the safe speed",
        reconstructed=True,
    ),
    CorpusCase(
        "fence",
        "solve",
        ("fence.asp",),
        "fence built without permission: the secondary duty to whitewash "
        "detaches; selling stays open",
    ),
    CorpusCase(
        "fence_calm",
        "solve",
        ("fence_calm.asp",),
        "selling the house: staying calm is obligatory exactly in the "
        "fence-less world",
        reconstructed=True,
    ),
    CorpusCase(
        "cabalar",
        "solve",
        ("cabalar.asp",),
        "work/shower norms with a forbidden-yet-happening act and a "
        "violation denial",
    ),
    *(
        CorpusCase(
            f"car_n{i}",
            "check",
            ("car.asp", f"car_n{i}.asp"),
            note,
            reconstructed=True,
        )
        for i, note in (
            (1, "car wrecked before any return: every failure exception fires"),
            (2, "prompt return, battery level kept: fully compliant"),
            (3, "returned late because sick: only the noon deadline fails"),
            (4, "battery drained and borrower broke: battery duty fails"),
            (5, "late, drained and broke: deadline and battery duties fail"),
            (6, "battery needed changing anyway, but borrower broke: battery "
                "failure still provable"),
            (7, "battery needed changing, borrower solvent: fully compliant"),
        )
    ),
)
