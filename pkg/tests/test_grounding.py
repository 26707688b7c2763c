from __future__ import annotations

import random
from collections import Counter

import pytest

from aspdim import (
    DomainError,
    answer_sets,
    build_predicate_rule_graph,
    full_instantiation,
    gen_coloring,
    ground,
    herbrand_universe,
    parse_program,
    restrict_ground,
    scc_topological_order,
)
from aspdim.grounding import pred_node, rule_node

from randprog import random_program


def test_graph_edges_triangle(triangle):
    graph = build_predicate_rule_graph(triangle)
    tri_rule = rule_node(3)
    assert (pred_node("edge", 2), tri_rule) in graph.edges
    assert (tri_rule, pred_node("tri", 3)) in graph.edges
    for i in range(3):  # fact nodes feed their predicate
        assert (rule_node(i), pred_node("edge", 2)) in graph.edges
    assert len([n for n in graph.nodes if n[0] == "pred"]) == 2


def test_graph_single_fact():
    graph = build_predicate_rule_graph(parse_program("p(a)."))
    assert graph.nodes == frozenset({pred_node("p", 1), rule_node(0)})
    assert graph.edges == frozenset({(rule_node(0), pred_node("p", 1))})


def test_graph_comparisons_contribute_nothing():
    program = parse_program("p(X) :- q(X,Y), X != Y.")
    graph = build_predicate_rule_graph(program)
    assert graph.edges == frozenset(
        {(pred_node("q", 2), rule_node(0)), (rule_node(0), pred_node("p", 1))}
    )


def test_coloring_cycle_in_one_component(demo_coloring):
    graph = build_predicate_rule_graph(demo_coloring)
    order = scc_topological_order(graph)
    (comp,) = [c for c in order if pred_node("color", 2) in c]
    assert pred_node("othercolor", 2) in comp
    rule_idxs = {n[1] for n in comp if n[0] == "rule"}
    color_rules = {
        i
        for i, r in enumerate(demo_coloring.rules)
        if {a.pred for a in r.head} & {"color", "othercolor"}
    }
    assert rule_idxs == color_rules
    # ordered after every fact component
    fact_positions = [
        i for i, c in enumerate(order)
        if any(n[0] == "rule" and demo_coloring.rules[n[1]].is_fact for n in c)
    ]
    assert max(fact_positions) < order.index(comp)


def test_scc_order_acyclic_singletons(triangle):
    order = scc_topological_order(build_predicate_rule_graph(triangle))
    assert all(len(c) == 1 for c in order)
    assert len(order) == 3 + 1 + 2  # fact rules, tri rule, two predicates
    assert all(
        triangle.rules[next(iter(c))[1]].is_fact for c in order[:3]
    )


def test_scc_order_empty_program():
    assert scc_topological_order(build_predicate_rule_graph(parse_program(""))) == ()


def test_ground_triangle(triangle):
    gp = ground(triangle)
    lines = gp.rule_lines()
    assert lines == [
        "edge(a,b).",
        "edge(b,c).",
        "edge(c,a).",
        "tri(a,b,c).",
        "tri(b,c,a).",
        "tri(c,a,b).",
    ]
    assert gp.true_atoms == gp.possible_atoms
    assert len(gp.true_atoms) == 6


def test_ground_facts_only():
    program = parse_program("p(a). q(b,c).")
    gp = ground(program)
    assert gp.n_rules == 2
    assert gp.true_atoms == gp.possible_atoms == gp.atom_universe
    assert len(gp.true_atoms) == 2


def test_ground_output_never_larger_than_full_instantiation(demo_coloring):
    smart = ground(demo_coloring)
    oracle = full_instantiation(demo_coloring, herbrand_universe(demo_coloring))
    assert smart.n_rules <= oracle.n_rules


def test_ground_coloring_constraint_instances(demo_coloring):
    gp = ground(demo_coloring)
    constraint_count = sum(1 for head, _, _ in gp.int_rules if not head)
    assert constraint_count == 12 * 3  # one surviving instance per arc per color


def test_full_instantiation_counts():
    program = parse_program("p(a). p(X) :- q(X,Y).")
    gp = full_instantiation(program, {"a", "b", "c"})
    assert gp.n_rules == 1 + 3 * 3  # |D|^2 instances of the non-fact rule
    ground_prog = parse_program("p(a). q :- p(a).")
    again = full_instantiation(ground_prog, {"a", "z"})
    assert again.rule_lines() == sorted(str(r) for r in ground_prog.rules)


def test_full_instantiation_keeps_duplicates():
    program = parse_program("p(a). p(a).")
    gp = full_instantiation(program, {"a"})
    assert gp.n_rules == 2


def test_full_instantiation_comparison_filtering():
    program = parse_program("p(X) :- q(X,Y), X != Y.")
    gp = full_instantiation(program, {"a", "b"})
    # 4 assignments, 2 survive X != Y; true comparisons are removed
    assert gp.n_rules == 2
    assert all("!=" not in line for line in gp.rule_lines())


def test_monotone_restriction_submultiset():
    rng = random.Random(3)
    for _ in range(20):
        program = random_program(rng, n_rules=4)
        universe = sorted(herbrand_universe(program))
        small = set(universe[:1])
        large = set(universe[:2])
        a = Counter(full_instantiation(program, small).rule_lines())
        b = Counter(full_instantiation(program, large).rule_lines())
        assert all(a[line] <= b[line] for line in a)


def test_restrict_ground_full_universe_equals_ground(demo_coloring):
    full = ground(demo_coloring)
    restricted = restrict_ground(demo_coloring, herbrand_universe(demo_coloring))
    assert full.rule_lines() == restricted.rule_lines()


def test_restrict_ground_rejects_superset(triangle):
    with pytest.raises(DomainError):
        restrict_ground(triangle, {"a", "zzz"})


def test_restrict_ground_colors_only(demo_coloring):
    gp = restrict_ground(demo_coloring, {"r", "b", "g"})
    assert not any(
        gp.table.keys[h][0] == "color" for head, _, _ in gp.int_rules for h in head
    )
    # facts survive any restriction
    assert sum(1 for head, pos, neg in gp.int_rules if len(head) == 1 and not pos and not neg) >= 24


def test_restrict_ground_matches_oracle_demo(demo_coloring):
    d = {"1", "2", "3", "r", "b", "g"}
    fast = answer_sets(restrict_ground(demo_coloring, d))
    oracle = answer_sets(full_instantiation(demo_coloring, d))
    assert set(fast) == set(oracle)
    assert len(fast) == 6


def test_grounder_oracle_equivalence_random():
    rng = random.Random(11)
    for _ in range(30):
        program = random_program(rng, n_rules=4)
        universe = herbrand_universe(program)
        smart = answer_sets(ground(program))
        oracle = answer_sets(full_instantiation(program, universe))
        assert set(smart) == set(oracle)


def test_restrict_equivalence_random():
    rng = random.Random(12)
    for _ in range(30):
        program = random_program(rng, n_rules=4)
        universe = sorted(herbrand_universe(program))
        for k in (0, 1, 2):
            d = set(universe[:k])
            fast = answer_sets(restrict_ground(program, d))
            oracle = answer_sets(full_instantiation(program, d))
            assert set(fast) == set(oracle)


def test_ground_rules_are_ground_and_a_top_subset(demo_coloring):
    gp = ground(demo_coloring)
    assert gp.true_ids <= gp.poss_ids
    for rule in gp.rules[:50]:
        assert rule.is_ground()


def test_even_loop_choice_grounds_correctly():
    program = parse_program("a :- not b. b :- not a.")
    gp = ground(program)
    assert sorted(gp.rule_lines()) == ["a :- not b.", "b :- not a."]
    assert set(answer_sets(gp)) == set(answer_sets(full_instantiation(program, {"c0"})))


def test_ground_text_format(triangle):
    text = ground(triangle).to_text()
    lines = text.strip().split("\n")
    assert lines[-1].startswith("% stats: rules=6 atoms=6 bytes=")
    assert lines[:-1] == sorted(lines[:-1])


def test_example_coloring_generator_matches_demo(demo_coloring):
    from aspdim import DEMO_COLORING_EDGES

    regenerated = gen_coloring(9, edges=DEMO_COLORING_EDGES)
    assert regenerated.rules == demo_coloring.rules
