"""Seeded random-program generators for the regression suites.

Programs are built safe by construction: heads, negative bodies, and
comparisons only use variables of the positive body.
"""
from __future__ import annotations

import random

from aspdim import Atom, Comparison, Program, Rule, Term
from aspdim.syntax import make_rule, vars_of

CONSTS = ("a", "b", "c", "d", "e")
VARS = ("X", "Y")
PREDS = (("p", 1), ("q", 1), ("r", 2), ("s", 0))
OPS = ("=", "!=", "<", "<=", ">", ">=")


def _random_atom(rng: random.Random, preds, terms) -> Atom:
    pred, arity = rng.choice(preds)
    return Atom(pred, tuple(Term(rng.choice(terms)) for _ in range(arity)))


def random_program(
    rng: random.Random,
    *,
    n_consts: int = 3,
    n_rules: int = 5,
    preds=PREDS,
    negation: bool = True,
    disjunction: bool = False,
    constraints: bool = True,
    comparisons: bool = True,
) -> Program:
    consts = list(CONSTS[:n_consts])
    rules: list[Rule] = []
    for _ in range(rng.randint(1, 3)):
        pred, arity = rng.choice(preds)
        rules.append(
            make_rule([Atom(pred, tuple(Term(rng.choice(consts)) for _ in range(arity)))])
        )
    for _ in range(n_rules):
        body_pos = [
            _random_atom(rng, preds, consts + list(VARS))
            for _ in range(rng.randint(1, 2))
        ]
        pos_vars = sorted(set().union(*(vars_of(a) for a in body_pos)) or set())
        safe_terms = pos_vars + consts
        head: list[Atom] = []
        if not (constraints and rng.random() < 0.15):
            head.append(_random_atom(rng, preds, safe_terms))
            if disjunction and rng.random() < 0.35:
                head.append(_random_atom(rng, preds, safe_terms))
        body_neg = (
            [_random_atom(rng, preds, safe_terms)]
            if negation and rng.random() < 0.5
            else []
        )
        cmps = []
        if comparisons and pos_vars and rng.random() < 0.3:
            cmps.append(
                Comparison(
                    Term(rng.choice(pos_vars)),
                    rng.choice(OPS),
                    Term(rng.choice(safe_terms)),
                )
            )
        rules.append(make_rule(head, body_pos, body_neg, cmps))
    return Program(tuple(rules))


def random_positive_program(rng: random.Random, *, n_consts: int = 3,
                            n_rules: int = 4) -> Program:
    """Positive normal program: no negation, no constraints, no disjunction."""
    return random_program(
        rng,
        n_consts=n_consts,
        n_rules=n_rules,
        negation=False,
        disjunction=False,
        constraints=False,
    )


def random_term_preserved_program(rng: random.Random, *, n_consts: int = 3,
                                  n_rules: int = 4) -> Program:
    """Normal rules whose body terms all reappear in the head."""
    consts = list(CONSTS[:n_consts])
    heads = (("h1", 1), ("h2", 2))
    body_preds = (("p", 1), ("q", 1), ("r", 2))
    rules: list[Rule] = []
    for _ in range(rng.randint(1, 3)):
        pred, arity = rng.choice(body_preds)
        rules.append(
            make_rule([Atom(pred, tuple(Term(rng.choice(consts)) for _ in range(arity)))])
        )
    for _ in range(n_rules):
        pred, arity = rng.choice(heads)
        head_terms = [rng.choice(list(VARS[:arity]) + consts) for _ in range(arity)]
        head = Atom(pred, tuple(Term(t) for t in head_terms))
        head_vars = sorted(vars_of(head))
        allowed = head_vars + [t for t in head_terms if t in consts]
        if not allowed:
            allowed = [rng.choice(consts)]
        body_pos = []
        for v in head_vars:  # cover every head variable for safety
            p, ar = rng.choice([bp for bp in body_preds if bp[1] >= 1])
            args = [v] + [rng.choice(allowed) for _ in range(ar - 1)]
            body_pos.append(Atom(p, tuple(Term(t) for t in args)))
        if not body_pos and rng.random() < 0.7:
            p, ar = rng.choice(body_preds)
            body_pos.append(
                Atom(p, tuple(Term(rng.choice(allowed)) for _ in range(ar)))
            )
        body_neg = []
        if rng.random() < 0.4:
            p, ar = rng.choice(body_preds)
            body_neg.append(
                Atom(p, tuple(Term(rng.choice(allowed)) for _ in range(ar)))
            )
        rules.append(make_rule([head], body_pos, body_neg))
    return Program(tuple(rules))


def random_ground_normal_program(rng: random.Random, *, n_atoms: int = 8,
                                 n_rules: int = 10) -> Program:
    """Propositional normal program over at most `n_atoms` nullary atoms."""
    atoms = [Atom(f"x{i}") for i in range(rng.randint(2, n_atoms))]
    rules: list[Rule] = []
    for _ in range(n_rules):
        body_pool = rng.sample(atoms, rng.randint(0, min(3, len(atoms))))
        split = rng.randint(0, len(body_pool))
        body_pos, body_neg = body_pool[:split], body_pool[split:]
        if rng.random() < 0.12:
            head = []
        else:
            head = [rng.choice(atoms)]
        rules.append(make_rule(head, body_pos, body_neg))
    return Program(tuple(rules))
