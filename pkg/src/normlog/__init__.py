"""Normative reasoning over stable models.

normlog translates deontic statements (obligations, prohibitions,
permissions, preemptable norms) into answer-set programs with strong and
default negation, grounds them over their Herbrand universe with exact
rational arithmetic, enumerates stable models, and explains why a literal
holds in a model.
"""

from __future__ import annotations

from .ast import (
    Arith,
    ArityConflict,
    Atom,
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
    Variable,
    format_rational,
    signature,
)
from .deontic import (
    Abducible,
    AlethicNotion,
    AsRule,
    CompilationTrace,
    CompileErrors,
    DeonticError,
    DeonticNotion,
    DeonticTheory,
    Fact,
    Impermissibility,
    NotionPattern,
    Obligation,
    Permission,
    alethic_pattern,
    compile_theory,
    expand_abducible,
    expand_program_abducibles,
)
from .grounder import (
    GroundProgram,
    GroundingError,
    SafetyReport,
    UnsafeRule,
    check_safety,
    eval_builtin,
    ground,
    herbrand_universe,
)
from .parser import (
    NafOnBuiltin,
    ParseError,
    parse_deontic,
    parse_program,
    parse_query,
    render_program,
)
from .solver import (
    FALSE,
    AnswerSet,
    InconsistentCandidate,
    Justification,
    LiteralNotInModel,
    ModalStatus,
    OracleInfeasible,
    UnknownPredicateWarning,
    enumerate_models,
    evaluate_notion,
    is_stable,
    justify,
    least_model,
    modal_classify,
    models_payload,
    oracle_models,
    query,
    reduct,
    solve_program,
)

__version__ = "0.1.0"

__all__ = [
    "Abducible",
    "AlethicNotion",
    "AnswerSet",
    "Arith",
    "ArityConflict",
    "AsRule",
    "Atom",
    "Builtin",
    "CompilationTrace",
    "CompileErrors",
    "Constant",
    "DeonticError",
    "DeonticNotion",
    "DeonticTheory",
    "FALSE",
    "Fact",
    "GroundProgram",
    "GroundingError",
    "Impermissibility",
    "InconsistentCandidate",
    "Justification",
    "Literal",
    "LiteralNotInModel",
    "LogicError",
    "ModalStatus",
    "Naf",
    "NafOnBuiltin",
    "NotionPattern",
    "Number",
    "Obligation",
    "OracleInfeasible",
    "ParseError",
    "Permission",
    "Pos",
    "Program",
    "Rule",
    "SafetyReport",
    "SourceSpan",
    "UnknownPredicateWarning",
    "UnsafeRule",
    "Variable",
    "alethic_pattern",
    "check_safety",
    "compile_theory",
    "enumerate_models",
    "eval_builtin",
    "evaluate_notion",
    "expand_abducible",
    "expand_program_abducibles",
    "format_rational",
    "ground",
    "herbrand_universe",
    "is_stable",
    "justify",
    "least_model",
    "modal_classify",
    "models_payload",
    "oracle_models",
    "parse_deontic",
    "parse_program",
    "parse_query",
    "query",
    "reduct",
    "render_program",
    "signature",
    "solve_program",
]
