"""Benchmark harness: size/time reduction of diminished grounding.

Each run executes the same pipeline (guard with the chosen constant
set, ground, certify the planted solution) under the heuristic
diminution and under the full Herbrand universe, and reports the
reduction ratio between the two.  The found flag is the exact
answer-set check of the planted solution's propagation closure, so it
stays meaningful far beyond enumeration scale.
"""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

from . import matching
from .errors import GroundingInterrupted
from .generators import Instance, InstanceSpec, make_instance
from .grounding import ground
from .heuristics import HeuristicSpec, build_diminution
from .semantics import complete_with_choices, is_answer_set
from .syntax import herbrand_universe
from .transform import guard, strip_dom

STATS_COLUMNS = (
    "family", "n", "seed", "mode", "ground_time_s", "ground_rules",
    "ground_bytes", "solve_time_s", "found", "reduction_ratio",
)

FAMILY_SHORT = {"coloring": "coloring", "hamiltonian": "hc", "stable_marriage": "sm"}
FAMILY_LONG = {"hc": "hamiltonian", "sm": "stable_marriage", "coloring": "coloring"}


@dataclass(frozen=True)
class RunStats:
    family: str
    n: int
    seed: int
    mode: str  # heuristic short name, or "hu" for the full universe
    ground_time_s: float
    ground_rules: int
    ground_bytes: int
    solve_time_s: float
    found: bool | None
    reduction_ratio: float | None
    timed_out: bool = False

    def row(self) -> str:
        found = "" if self.found is None else str(int(self.found))
        ratio = "" if self.reduction_ratio is None else f"{self.reduction_ratio:.4f}"
        return "\t".join(
            (
                self.family,
                str(self.n),
                str(self.seed),
                self.mode,
                f"{self.ground_time_s:.6f}",
                str(self.ground_rules),
                str(self.ground_bytes),
                f"{self.solve_time_s:.6f}",
                found,
                ratio,
            )
        )


def stats_table(rows: list[RunStats]) -> str:
    lines = ["\t".join(STATS_COLUMNS)]
    lines += [r.row() for r in rows]
    return "\n".join(lines) + "\n"


def _pipeline(inst: Instance, constants, mode: str, budget: float | None) -> RunStats:
    deadline = None if budget is None else time.monotonic() + budget
    guarded = guard(inst.program, constants)
    start = time.monotonic()
    timed_out = False
    try:
        gp = ground(guarded.program, deadline=deadline)
    except GroundingInterrupted as stop:
        gp = stop.partial
        timed_out = True
    ground_time = time.monotonic() - start
    ground_rules = gp.n_rules
    ground_bytes = gp.text_bytes()
    found: bool | None = None
    solve_time = 0.0
    if not timed_out:
        start = time.monotonic()
        stripped = strip_dom(gp, guarded.dom_facts)
        closure = complete_with_choices(stripped, inst.planted, inst.choice_predicates)
        found = closure is not None and is_answer_set(stripped, closure)
        solve_time = time.monotonic() - start
    return RunStats(
        family=FAMILY_SHORT[inst.spec.family],
        n=inst.spec.n,
        seed=inst.spec.seed,
        mode=mode,
        ground_time_s=ground_time,
        ground_rules=ground_rules,
        ground_bytes=ground_bytes,
        solve_time_s=solve_time,
        found=found,
        reduction_ratio=None,
        timed_out=timed_out,
    )


def run_one(spec: InstanceSpec, heuristic: HeuristicSpec, budget: float | None = None
            ) -> tuple[RunStats, RunStats]:
    """One instance under its heuristic diminution and under HU(P)."""
    inst = make_instance(spec)
    dim = build_diminution(inst.program, inst, heuristic)
    full = _pipeline(inst, herbrand_universe(inst.program), "hu", budget)
    reduced = _pipeline(inst, dim.constants, heuristic.short, budget)
    if reduced.ground_bytes:
        reduced = replace(
            reduced, reduction_ratio=full.ground_bytes / reduced.ground_bytes
        )
    full = replace(full, reduction_ratio=1.0)
    return reduced, full


def run_benchmark(
    specs: list[InstanceSpec],
    heuristics: list[HeuristicSpec],
    budget: float | None = None,
    max_workers: int = 4,
) -> list[RunStats]:
    """Run every (instance, heuristic) pair; a per-run budget marks the run
    as timed out (with the stats gathered so far) without aborting the batch."""
    jobs = [(spec, h) for spec in specs for h in heuristics]
    rows: list[RunStats] = []
    if not jobs:
        return rows
    workers = max(1, min(max_workers, len(jobs)))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for reduced, full in pool.map(lambda job: run_one(*job, budget=budget), jobs):
            rows.append(reduced)
            rows.append(full)
    rows.sort(key=lambda r: (r.family, r.n, r.seed, r.mode))
    return rows


def summarize(rows: list[RunStats]) -> str:
    """Aggregate lines: mean times/sizes and timeout rate per (family, mode)."""
    groups: dict[tuple[str, str], list[RunStats]] = {}
    for r in rows:
        groups.setdefault((r.family, r.mode), []).append(r)
    lines = []
    for (family, mode), group in sorted(groups.items()):
        n = len(group)
        mean_t = sum(r.ground_time_s for r in group) / n
        mean_b = sum(r.ground_bytes for r in group) / n
        timeouts = sum(1 for r in group if r.timed_out) / n
        lines.append(
            f"{family}/{mode}: runs={n} mean_ground_time_s={mean_t:.3f} "
            f"mean_ground_bytes={mean_b:.0f} timeout_rate={timeouts:.2f}"
        )
    return "\n".join(lines)


def compare_engines(spec: InstanceSpec, heuristic: HeuristicSpec | None = None
                    ) -> list[tuple[str, float, int]]:
    """Ground the same instance with the pure and compiled match kernels.

    Returns (engine, ground_time_s, ground_rules) per available engine.
    """
    inst = make_instance(spec)
    if heuristic is None:
        constants = herbrand_universe(inst.program)
    else:
        constants = build_diminution(inst.program, inst, heuristic).constants
    guarded = guard(inst.program, constants)
    results = []
    previous = matching.engine_name()
    try:
        for engine in ("pure", "compiled"):
            try:
                matching.set_engine(engine)
            except ImportError:
                continue
            start = time.monotonic()
            gp = ground(guarded.program)
            elapsed = time.monotonic() - start
            results.append((engine, elapsed, gp.n_rules))
    finally:
        matching.set_engine(previous)
    return results
