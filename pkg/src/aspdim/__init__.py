"""Diminution-aware grounding for answer set programs.

Ground a logic program over a chosen subset of its Herbrand universe,
check what that subset preserves (admissible / safe / P-preserved /
splitting-safe / loop-admissible), and measure the size and time the
restriction saves.
"""

__version__ = "0.1.0"

from .diminution import (
    CheckResult,
    Diminution,
    DiminutionReport,
    LoopCheckResult,
    SplittingResult,
    check_admissible,
    check_elementary_loop_admissible,
    check_loop_admissible,
    check_preserved,
    check_safe,
    check_splitting_safe,
    classify,
)
from .errors import (
    ArityError,
    AspdimError,
    DomainError,
    GuardPlacementError,
    HeuristicError,
    NonNormalProgramError,
    ParseError,
    SafetyError,
    SizeGuardError,
)
from .generators import (
    DEMO_COLORING_EDGES,
    Instance,
    InstanceSpec,
    demo_coloring_program,
    gen_coloring,
    gen_hamiltonian,
    gen_stable_marriage,
    make_instance,
)
from .grounding import (
    GroundProgram,
    PredicateRuleGraph,
    build_predicate_rule_graph,
    full_instantiation,
    ground,
    restrict_ground,
    scc_topological_order,
)
from .heuristics import HeuristicSpec, build_diminution
from .matching import Substitution, engine_name, good_matches, set_engine, substitutions
from .parser import parse_program, parse_rule
from .semantics import (
    Loop,
    LoopFormula,
    answer_sets,
    complete_with_choices,
    elementary_loops,
    external_supports,
    gl_reduct,
    is_answer_set,
    is_elementary_loop,
    is_model,
    least_model,
    loop_formula,
    loops,
    minimal_models,
    models,
    positive_dependency_graph,
    satisfies_loop_formula,
)
from .syntax import (
    Atom,
    Comparison,
    Program,
    Rule,
    Term,
    atom_set_to_text,
    consts_of,
    herbrand_universe,
    program_to_text,
    vars_of,
)
from .transform import (
    GuardedProgram,
    GuardValidation,
    LiftResult,
    TermPreservation,
    dom_lift,
    guard,
    is_term_preserved,
    strip_dom,
    validate_guarded,
)
from .bench import RunStats, compare_engines, run_benchmark, run_one, stats_table

__all__ = [name for name in dir() if not name.startswith("_")]
