from __future__ import annotations

import aspdim.matching as matching
from aspdim import (
    HeuristicSpec,
    InstanceSpec,
    compare_engines,
    run_benchmark,
    run_one,
)
from aspdim.bench import STATS_COLUMNS, stats_table, summarize


def test_empty_spec_list():
    assert run_benchmark([], [HeuristicSpec("f3", 2)]) == []


def test_run_one_tiny_hamiltonian():
    reduced, full = run_one(
        InstanceSpec("hamiltonian", 6, 2, chords_per_node=2), HeuristicSpec("f3", 1)
    )
    assert reduced.found and full.found
    assert reduced.ground_rules <= full.ground_rules
    assert reduced.ground_bytes <= full.ground_bytes
    assert reduced.reduction_ratio >= 1.0
    assert full.reduction_ratio == 1.0
    assert reduced.mode == "f3" and full.mode == "hu"


def test_stats_table_shape_and_determinism():
    specs = [InstanceSpec("stable_marriage", 3, 5)]
    heuristics = [HeuristicSpec("f2", 2)]
    rows1 = run_benchmark(specs, heuristics)
    rows2 = run_benchmark(specs, heuristics)
    table1, table2 = stats_table(rows1), stats_table(rows2)
    header = table1.splitlines()[0]
    assert header == "\t".join(STATS_COLUMNS)
    assert len(table1.splitlines()) == 3  # header + dim row + hu row
    static = lambda t: [
        "\t".join(
            col
            for i, col in enumerate(line.split("\t"))
            if STATS_COLUMNS[i] not in ("ground_time_s", "solve_time_s")
        )
        for line in t.splitlines()[1:]
    ]
    assert static(table1) == static(table2)


def test_rule_counts_monotone_across_families():
    cases = [
        (InstanceSpec("hamiltonian", 8, 1, chords_per_node=3), HeuristicSpec("f3", 2)),
        (InstanceSpec("stable_marriage", 4, 1), HeuristicSpec("f2", 2)),
        (InstanceSpec("coloring", 5, 1, edge_prob=0.5), HeuristicSpec("f1", 0.5)),
    ]
    for spec, heuristic in cases:
        reduced, full = run_one(spec, heuristic)
        assert reduced.ground_rules <= full.ground_rules


def test_budget_timeout_recorded_not_fatal():
    rows = run_benchmark(
        [InstanceSpec("hamiltonian", 30, 1)], [HeuristicSpec("f3", 2)], budget=0.0
    )
    assert len(rows) == 2
    assert all(r.timed_out for r in rows)
    assert all(r.found is None for r in rows)
    table = stats_table(rows)  # renders with empty found column
    assert "\t\t" in table.splitlines()[1]


def test_summarize_mentions_groups():
    rows = run_benchmark([InstanceSpec("stable_marriage", 3, 5)], [HeuristicSpec("f2", 2)])
    text = summarize(rows)
    assert "sm/f2" in text and "sm/hu" in text and "timeout_rate" in text


def test_compare_engines_reports_available_kernels():
    rows = compare_engines(
        InstanceSpec("hamiltonian", 8, 2, chords_per_node=2), HeuristicSpec("f3", 2)
    )
    engines = [engine for engine, _, _ in rows]
    assert "pure" in engines
    if matching.engine_name() == "compiled":
        assert "compiled" in engines
        by_engine = {e: rules for e, _, rules in rows}
        assert by_engine["pure"] == by_engine["compiled"]
