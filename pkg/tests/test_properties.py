from __future__ import annotations

import random
from collections import Counter

from hypothesis import given, settings
from hypothesis import strategies as st

from aspdim import (
    answer_sets,
    full_instantiation,
    gl_reduct,
    herbrand_universe,
    is_model,
    parse_program,
    program_to_text,
)

from randprog import random_ground_normal_program, random_program

program_seeds = st.integers(min_value=0, max_value=10_000)


@st.composite
def programs(draw):
    rng = random.Random(draw(program_seeds))
    return random_program(rng, n_rules=draw(st.integers(1, 5)))


@st.composite
def ground_programs(draw):
    rng = random.Random(draw(program_seeds))
    program = random_ground_normal_program(rng, n_atoms=6, n_rules=7)
    return full_instantiation(program, herbrand_universe(program))


@given(programs())
@settings(max_examples=60, deadline=None)
def test_print_parse_round_trip(program):
    reparsed = parse_program(program_to_text(program))
    assert reparsed.rules == program.rules
    assert parse_program(program_to_text(reparsed)).rules == reparsed.rules


@given(programs())
@settings(max_examples=40, deadline=None)
def test_every_accepted_program_is_safe(program):
    from aspdim.syntax import vars_of, vars_of_atoms

    for rule in program.rules:
        covered = vars_of_atoms(rule.body_pos)
        assert vars_of(rule) <= covered | set()  # head/neg/cmp vars inside body+
        for atom in rule.head | rule.body_neg:
            assert vars_of(atom) <= covered


@given(programs())
@settings(max_examples=30, deadline=None)
def test_herbrand_universe_covers_every_rule(program):
    from aspdim import consts_of

    universe = herbrand_universe(program)
    for rule in program.rules:
        assert consts_of(rule) <= universe


@given(programs(), st.integers(0, 3))
@settings(max_examples=30, deadline=None)
def test_monotone_restriction(program, k):
    universe = sorted(herbrand_universe(program))
    small = Counter(full_instantiation(program, universe[: k % (len(universe) + 1)]).rule_lines())
    large = Counter(full_instantiation(program, universe).rule_lines())
    assert all(small[line] <= large[line] for line in small)


@given(ground_programs(), st.integers(0, 63), st.integers(0, 63))
@settings(max_examples=40, deadline=None)
def test_reduct_rule_deletion_antimonotone(gp, bits_a, bits_b):
    atoms = sorted(gp.atom_universe, key=lambda a: a.sort_key())
    pick = lambda bits: frozenset(a for i, a in enumerate(atoms) if bits >> i & 1)
    small = pick(bits_a & bits_b)
    large = pick(bits_a | bits_b)
    assert gl_reduct(gp, large).n_rules <= gl_reduct(gp, small).n_rules


@given(ground_programs())
@settings(max_examples=40, deadline=None)
def test_answer_sets_are_models_property(gp):
    for interp in answer_sets(gp):
        assert is_model(gp, interp)
