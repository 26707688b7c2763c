"""Acceptance gate: one test per shipped criterion, one PASS/FAIL line each.

Run with `pytest -s tests/test_acceptance.py` to see the per-criterion lines.
"""
from __future__ import annotations

import itertools
import random
import time

from aspdim import (
    Diminution,
    HeuristicSpec,
    InstanceSpec,
    answer_sets,
    build_diminution,
    check_admissible,
    check_preserved,
    check_safe,
    classify,
    elementary_loops,
    full_instantiation,
    ground,
    guard,
    herbrand_universe,
    is_term_preserved,
    loops,
    make_instance,
    models,
    parse_program,
    restrict_ground,
    satisfies_loop_formula,
    strip_dom,
)
from aspdim.bench import run_one
from aspdim.generators import demo_coloring_program

from conftest import COLORING_LISTING, EQUIV_P1, EQUIV_P2, TRIANGLE
from randprog import (
    random_ground_normal_program,
    random_positive_program,
    random_program,
    random_term_preserved_program,
)


def _verdict(name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"[{status}] {name}{suffix}")
    assert ok, f"{name}{suffix}"


def _pipeline_answer_sets(program, constants):
    guarded = guard(program, constants)
    gp = ground(guarded.program)
    return set(answer_sets(strip_dom(gp, guarded.dom_facts)))


def test_criterion_1_paper_example_regression():
    start = time.monotonic()
    program = demo_coloring_program()
    d_safe = frozenset({"1", "2", "3", "r", "b", "g"})
    rep_safe = classify(program, Diminution.of(d_safe, ["color/2"]))
    rep_arc = classify(program, Diminution.of(d_safe, ["arc/2", "col/1"]))
    rep_adm = classify(program, Diminution.of({"1", "2", "5", "7", "b", "r"}))
    rep_bad = classify(program, Diminution.of(herbrand_universe(program) - {"1"}))
    elapsed = time.monotonic() - start
    ok = (
        rep_safe.safe.holds
        and not rep_safe.preserved_safe.holds
        and rep_arc.safe.holds
        and rep_arc.preserved_safe.holds
        and rep_adm.admissible.holds
        and not rep_adm.safe.holds
        and not rep_bad.admissible.holds
        and rep_bad.admissible.witness is not None
        and elapsed < 10.0
    )
    _verdict("criterion 1: demo-instance classification regression", ok, f"{elapsed:.2f}s")


def test_criterion_2_guarded_pipeline_equivalence():
    start = time.monotonic()
    rng = random.Random(2024)
    pairs = 0
    mismatches = 0
    while pairs < 200:
        program = random_program(
            rng,
            n_consts=rng.randint(2, 3),
            n_rules=rng.randint(2, 4),
            disjunction=pairs % 4 == 0,
        )
        universe = sorted(herbrand_universe(program))
        subset = {c for c in universe if rng.random() < 0.6}
        pipeline = _pipeline_answer_sets(program, subset)
        restricted = set(answer_sets(restrict_ground(program, subset)))
        oracle = set(answer_sets(full_instantiation(program, subset)))
        if not (pipeline == restricted == oracle):
            mismatches += 1
        pairs += 1
    elapsed = time.monotonic() - start
    ok = mismatches == 0 and elapsed < 300.0
    _verdict(
        "criterion 2: guarded pipeline == restricted grounding == oracle on 200 pairs",
        ok,
        f"{pairs} pairs, {mismatches} mismatches, {elapsed:.1f}s",
    )


def test_criterion_3_grounder_oracle_equivalence():
    rng = random.Random(404)
    listings = [
        demo_coloring_program(),
        parse_program(COLORING_LISTING),
        parse_program(TRIANGLE),
        parse_program(EQUIV_P1),
        parse_program(EQUIV_P2),
    ]
    suite = listings + [
        random_program(
            rng,
            n_consts=rng.randint(2, 3),
            n_rules=rng.randint(2, 5),
            disjunction=i % 5 == 0,
        )
        for i in range(150)
    ]
    mismatches = 0
    for program in suite:
        smart = set(answer_sets(ground(program)))
        oracle = set(answer_sets(full_instantiation(program, herbrand_universe(program))))
        if smart != oracle:
            mismatches += 1
    _verdict(
        "criterion 3: smart grounding preserves answer sets",
        mismatches == 0,
        f"{len(suite)} programs, {mismatches} mismatches",
    )


def test_criterion_4_loop_formula_three_way():
    start = time.monotonic()
    rng = random.Random(1312)
    mismatches = 0
    for _ in range(500):
        program = random_ground_normal_program(rng, n_atoms=10, n_rules=rng.randint(3, 10))
        gp = full_instantiation(program, herbrand_universe(program))
        stable = set(answer_sets(gp))
        all_loops = loops(gp)
        elem = elementary_loops(gp)
        candidates = models(gp)
        by_loops = {
            m for m in candidates
            if all(satisfies_loop_formula(m, lp, gp) for lp in all_loops)
        }
        by_elem = {
            m for m in candidates
            if all(satisfies_loop_formula(m, lp, gp) for lp in elem)
        }
        if not (stable == by_loops == by_elem):
            mismatches += 1
    elapsed = time.monotonic() - start
    ok = mismatches == 0 and elapsed < 300.0
    _verdict(
        "criterion 4: answer sets == loop-formula models == elementary-loop models",
        ok,
        f"500 programs, {mismatches} mismatches, {elapsed:.1f}s",
    )


def test_criterion_5_lattice_and_subset_properties():
    rng = random.Random(777)
    implications_checked = 0
    loop_decided = 0
    violations = []

    programs = [
        random_program(rng, n_consts=2, n_rules=rng.randint(2, 3),
                       preds=(("p", 1), ("q", 1), ("s", 0)))
        for _ in range(40)
    ]
    programs.append(parse_program("p(a). s(b). q :- p(a), not r(b). r(X) :- s(X), q."))
    for program in programs:
        universe = sorted(herbrand_universe(program))
        d = Diminution.of(set(universe[: rng.randint(0, len(universe))]))
        report = classify(program, d, max_atoms=30)
        implications_checked += 1
        if report.splitting_safe.status == "true" and not report.safe.holds:
            violations.append("splitting->safe")
        if report.safe.holds and not report.admissible.holds:
            violations.append("safe->admissible")
        if report.loop_admissible.status == "true":
            loop_decided += 1
            if not report.admissible.holds:
                violations.append("loop->admissible")
            if report.elementary_loop_admissible.status == "false":
                violations.append("loop->eloop")
        if (
            report.elementary_loop_admissible.status == "true"
            and not report.admissible.holds
        ):
            violations.append("eloop->admissible")

    subset_checks = 0
    for _ in range(10):
        program = random_positive_program(rng, n_consts=rng.randint(2, 3), n_rules=3)
        universe = sorted(herbrand_universe(program))
        for k in range(len(universe) + 1):
            for subset in itertools.combinations(universe, k):
                if not check_safe(program, Diminution.of(set(subset))).holds:
                    violations.append("positive-not-safe")
                subset_checks += 1

    tp_checks = 0
    built = 0
    while built < 10:
        program = random_term_preserved_program(rng, n_consts=rng.randint(2, 3), n_rules=3)
        assert bool(is_term_preserved(program))
        if not answer_sets(full_instantiation(program, herbrand_universe(program))):
            continue
        built += 1
        universe = sorted(herbrand_universe(program))
        for k in range(len(universe) + 1):
            for subset in itertools.combinations(universe, k):
                if not check_safe(program, Diminution.of(set(subset))).holds:
                    violations.append("term-preserved-not-safe")
                tp_checks += 1

    ok = not violations and loop_decided > 0
    _verdict(
        "criterion 5: lattice implications, positive and term-preserved subset safety",
        ok,
        f"{implications_checked} classified ({loop_decided} loop-decided), "
        f"{subset_checks} positive-subset checks, {tp_checks} term-preserved checks, "
        f"violations={sorted(set(violations))}",
    )


def test_criterion_6_strong_equivalence_regression():
    p1 = parse_program(EQUIV_P1)
    p2 = parse_program(EQUIV_P2)
    d = Diminution.of({"a"})
    ok = check_admissible(p1, d).holds and not check_admissible(p2, d).holds
    _verdict("criterion 6: admissibility does not transfer across strong equivalence", ok)


def test_criterion_7_desk_scale_reduction():
    hc_red, hc_full = run_one(
        InstanceSpec("hamiltonian", 200, 7, chords_per_node=8), HeuristicSpec("f3", 8)
    )
    hc_bytes = hc_red.ground_bytes / hc_full.ground_bytes
    hc_time = hc_red.ground_time_s / hc_full.ground_time_s
    sm_red, sm_full = run_one(
        InstanceSpec("stable_marriage", 60, 11), HeuristicSpec("f2", 10)
    )
    sm_reduction = 1.0 - sm_red.ground_bytes / sm_full.ground_bytes
    budgets = [
        r.ground_time_s + r.solve_time_s for r in (hc_red, hc_full, sm_red, sm_full)
    ]
    ok = (
        hc_bytes <= 0.20
        and hc_time <= 0.50
        and sm_reduction >= 0.80
        and all(r.found for r in (hc_red, hc_full, sm_red, sm_full))
        and max(budgets) < 120.0
    )
    _verdict(
        "criterion 7: desk-scale grounding reduction",
        ok,
        f"hc bytes {hc_bytes:.3f}<=0.20, hc time {hc_time:.2f}<=0.50, "
        f"sm byte reduction {sm_reduction:.3f}>=0.80, slowest run {max(budgets):.1f}s",
    )


def test_criterion_8_preservation_desk_scale():
    failures = []
    for n in (5, 6, 8):
        inst = make_instance(InstanceSpec("hamiltonian", n, 13, chords_per_node=2))
        dim = build_diminution(inst.program, inst, HeuristicSpec("f3", 2))
        if not check_preserved(inst.program, dim, "admissible").holds:
            failures.append(f"hc n={n}")
    for n in (3, 4):
        inst = make_instance(InstanceSpec("stable_marriage", n, 13))
        dim = build_diminution(inst.program, inst, HeuristicSpec("f2", 2))
        if not check_preserved(inst.program, dim, "admissible").holds:
            failures.append(f"sm n={n}")
    _verdict(
        "criterion 8: shipped heuristics preserve the predicates of interest",
        not failures,
        f"failures={failures}" if failures else "hc/2 at n<=8, match/2 at n<=4",
    )
