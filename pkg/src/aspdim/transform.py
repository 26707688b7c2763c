"""Program rewritings around domain predicates.

`dom_lift` pulls every constant out into a fresh guarded variable so the
result is term-preserved; `guard` builds a D-guarded program whose
standard grounding simulates restricted grounding over D; `strip_dom`
removes the guard scaffolding from the ground result.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, GuardPlacementError, NonNormalProgramError
from .grounding import (
    GroundProgram,
    build_predicate_rule_graph,
    scc_topological_order,
)
from .syntax import (
    Atom,
    Comparison,
    Program,
    Rule,
    Term,
    consts_of,
    herbrand_universe,
    sorted_constants,
    vars_of,
)

DOM = "dom"


@dataclass(frozen=True)
class LiftResult:
    """Lifted program plus the fresh (variable, guard predicate) per constant."""

    lifted: Program
    introduced: dict[str, tuple[str, str]]


def _fresh(base: str, taken: set[str]) -> str:
    name = base
    suffix = 2
    while name in taken:
        name = f"{base}_{suffix}"
        suffix += 1
    taken.add(name)
    return name


def dom_lift(program: Program) -> LiftResult:
    """Replace each constant c by a fresh guarded variable.

    Every occurrence of c becomes v_c, p_c(v_c) joins the positive body
    of each rule that mentioned c, and the fact p_c(c) is added.  The
    Herbrand universe is unchanged.
    """
    constants = sorted_constants(consts_of(program))
    if not constants:
        return LiftResult(program, {})
    taken_preds = set(program.vocabulary)
    taken_vars = set(vars_of(program))
    introduced: dict[str, tuple[str, str]] = {}
    for c in constants:
        var = _fresh(f"V__{c}", taken_vars)
        pred = _fresh(f"dom_{c}", taken_preds)
        introduced[c] = (var, pred)

    def lift_term(t: Term) -> Term:
        if t.is_constant and t.name in introduced:
            return Term(introduced[t.name][0])
        return t

    def lift_atom(a: Atom) -> Atom:
        return Atom(a.pred, tuple(lift_term(t) for t in a.args))

    new_rules: list[Rule] = []
    for rule in program.rules:
        touched = sorted_constants(consts_of(rule))
        guards = frozenset(
            Atom(introduced[c][1], (Term(introduced[c][0]),)) for c in touched
        )
        new_rules.append(
            Rule(
                frozenset(lift_atom(a) for a in rule.head),
                frozenset(lift_atom(a) for a in rule.body_pos) | guards,
                frozenset(lift_atom(a) for a in rule.body_neg),
                tuple(
                    Comparison(lift_term(c.left), c.op, lift_term(c.right))
                    for c in rule.comparisons
                ),
            )
        )
    for c in constants:
        _, pred = introduced[c]
        new_rules.append(Rule(frozenset({Atom(pred, (Term(c),))})))
    return LiftResult(Program(tuple(new_rules)), introduced)


@dataclass(frozen=True)
class TermPreservation:
    """Per-rule verdicts for the term-preserved property."""

    overall: bool
    failures: tuple[tuple[Rule, str], ...]

    def __bool__(self) -> bool:
        return self.overall


def is_term_preserved(program: Program) -> TermPreservation:
    """A normal rule passes iff its body constants and variables all
    reappear in its head; comparisons count as body occurrences.

    Disjunctive heads are rejected outright; constraints simply fail the
    property (an empty head can preserve nothing).
    """
    failures: list[tuple[Rule, str]] = []
    for rule in program.rules:
        if len(rule.head) > 1:
            raise NonNormalProgramError(f"disjunctive rule: {rule}")
        if not rule.head:
            failures.append((rule, "constraint has no head to preserve terms"))
            continue
        (head,) = rule.head
        body_vars_bad = sorted(vars_of_body(rule) - vars_of(head))
        body_consts_bad = sorted(consts_of_body(rule) - consts_of(head))
        if body_vars_bad:
            failures.append((rule, f"body variable {body_vars_bad[0]} not in head"))
        elif body_consts_bad:
            failures.append((rule, f"body constant {body_consts_bad[0]} not in head"))
    return TermPreservation(not failures, tuple(failures))


def vars_of_body(rule: Rule) -> set[str]:
    out: set[str] = set()
    for a in rule.body_pos | rule.body_neg:
        out |= vars_of(a)
    for c in rule.comparisons:
        out |= vars_of(c)
    return out


def consts_of_body(rule: Rule) -> set[str]:
    out: set[str] = set()
    for a in rule.body_pos | rule.body_neg:
        out |= consts_of(a)
    for c in rule.comparisons:
        out |= consts_of(c)
    return out


@dataclass(frozen=True)
class GuardedProgram:
    program: Program
    dom_constants: frozenset[str]
    dom_facts: tuple[Rule, ...]


@dataclass(frozen=True)
class GuardViolation:
    condition: int
    message: str


@dataclass(frozen=True)
class GuardValidation:
    valid: bool
    violations: tuple[GuardViolation, ...]

    def __bool__(self) -> bool:
        return self.valid


def guard(
    program: Program,
    constants,
    placement: dict[int, frozenset[str]] | None = None,
) -> GuardedProgram:
    """Build the D-guarded program P^[D].

    The default placement guards every variable of every non-fact rule
    and defines dom/1 by facts only; custom placements map rule indices
    to the variables to guard and are validated, never repaired.
    """
    universe = herbrand_universe(program)
    dset = frozenset(constants)
    extra = dset - universe
    if extra:
        raise DomainError(
            f"constants outside the Herbrand universe: {', '.join(sorted(extra))}"
        )
    if any(pred == DOM for pred in program.vocabulary):
        raise DomainError("program already uses the predicate dom")
    new_rules: list[Rule] = []
    for i, rule in enumerate(program.rules):
        if placement is None:
            wanted = vars_of(rule) if not rule.is_fact else set()
        else:
            wanted = set(placement.get(i, ()))
            missing = wanted - vars_of(rule)
            if missing:
                raise GuardPlacementError(
                    (0,), f"rule {i} has no variable {sorted(missing)[0]}"
                )
        guards = frozenset(Atom(DOM, (Term(v),)) for v in sorted(wanted))
        new_rules.append(
            Rule(rule.head, rule.body_pos | guards, rule.body_neg, rule.comparisons)
        )
    dom_facts = tuple(
        Rule(frozenset({Atom(DOM, (Term(c),))})) for c in sorted_constants(dset)
    )
    guarded = GuardedProgram(Program(tuple(new_rules) + dom_facts), dset, dom_facts)
    check = validate_guarded(guarded)
    if not check.valid:
        raise GuardPlacementError(
            tuple(sorted({v.condition for v in check.violations})),
            "; ".join(v.message for v in check.violations),
        )
    return guarded


def validate_guarded(guarded: GuardedProgram) -> GuardValidation:
    """Check the three D-guarded conditions over the SCC topological order.

    Condition 3 is read conservatively: every rule in a component at or
    after the last dom component must guard, with dom(X), each variable
    of its atoms over predicates first defined at or after that point.
    """
    program = guarded.program
    graph = build_predicate_rule_graph(program)
    order = scc_topological_order(graph)
    violations: list[GuardViolation] = []
    dom_sig = (DOM, 1)
    comp_preds = []
    comp_rules = []
    for comp in order:
        comp_preds.append({(n[1], n[2]) for n in comp if n[0] == "pred"})
        comp_rules.append(sorted(n[1] for n in comp if n[0] == "rule"))
    dom_comps = [i for i, preds in enumerate(comp_preds) if dom_sig in preds]
    for i in dom_comps:
        others = {p for p in comp_preds[i] if p != dom_sig}
        if others:
            name, ar = sorted(others)[0]
            violations.append(
                GuardViolation(1, f"component mixes dom/1 with {name}/{ar}")
            )
    if dom_comps:
        first_dom = min(dom_comps)
        for j in range(first_dom):
            for ri in comp_rules[j]:
                rule = program.rules[ri]
                heads = {a.signature for a in rule.head}
                if vars_of(rule) and dom_sig not in heads:
                    violations.append(
                        GuardViolation(
                            2, f"non-ground rule before dom/1: {rule}"
                        )
                    )
        last_dom = max(dom_comps)
        post_preds: set[tuple[str, int]] = set()
        for j in range(last_dom, len(order)):
            for ri in comp_rules[j]:
                for a in program.rules[ri].head:
                    if a.signature != dom_sig:
                        post_preds.add(a.signature)
        for j in range(last_dom, len(order)):
            for ri in comp_rules[j]:
                rule = program.rules[ri]
                guards = {
                    a.args[0].name
                    for a in rule.body_pos
                    if a.signature == dom_sig and a.args[0].is_variable
                }
                for atom in rule.atoms():
                    if atom.signature == dom_sig or atom.signature not in post_preds:
                        continue
                    for v in sorted(vars_of(atom)):
                        if v not in guards:
                            violations.append(
                                GuardViolation(
                                    3,
                                    f"variable {v} of {atom} lacks dom({v}) in: {rule}",
                                )
                            )
    return GuardValidation(not violations, tuple(violations))


def strip_dom(gp: GroundProgram, dom_facts) -> GroundProgram:
    """Remove dom facts and any residual dom literals from a ground program.

    In valid pipelines the grounder has already simplified dom literals
    out of rule bodies, so this normally just drops the facts.
    """
    atoms: set[Atom] = set()
    for f in dom_facts:
        if isinstance(f, Rule):
            if not f.is_fact:
                raise ValueError(f"not a fact: {f}")
            atoms |= set(f.head)
        else:
            atoms.add(f)
    preds = {a.signature for a in atoms}
    if not preds:
        return GroundProgram(gp.table, list(gp.int_rules))
    fact_ids = {gp.table.lookup(a) for a in atoms} - {None}
    out = []
    for head, pos, neg in gp.int_rules:
        if len(head) == 1 and not pos and not neg and head[0] in fact_ids:
            continue
        head2 = tuple(a for a in head if _sig_of(gp, a) not in preds)
        pos2 = tuple(a for a in pos if _sig_of(gp, a) not in preds)
        neg2 = tuple(a for a in neg if _sig_of(gp, a) not in preds)
        if not head2 and head:
            continue  # a dom-headed non-fact rule contributes nothing after stripping
        out.append((head2, pos2, neg2))
    return GroundProgram(gp.table, out)


def _sig_of(gp: GroundProgram, aid: int) -> tuple[str, int]:
    pred, args = gp.table.keys[aid]
    return (pred, len(args))
