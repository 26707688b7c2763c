"""AST for function-free disjunctive logic programs.

Terms are constants (lowercase or numeric token) or variables (leading
uppercase/underscore); the kind is decided by the first character alone.
Comparison literals are not atoms: they never contribute to dependency
graphs or the Herbrand base, they only filter substitutions.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Union

from .errors import ArityError, SafetyError

COMPARISON_OPS = ("=", "!=", "<", "<=", ">", ">=")

#: Constant injected by :func:`herbrand_universe` for constant-free programs.
FRESH_CONSTANT = "c0"


def is_variable_name(name: str) -> bool:
    return name[0].isupper() or name[0] == "_"


@lru_cache(maxsize=None)
def constant_sort_key(name: str) -> tuple:
    """Total order on constants: integers numerically, then symbols lexically."""
    if name.isdigit():
        return (0, int(name), "")
    return (1, 0, name)


@dataclass(frozen=True)
class Term:
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("empty term name")

    @property
    def is_variable(self) -> bool:
        return is_variable_name(self.name)

    @property
    def is_constant(self) -> bool:
        return not self.is_variable

    @property
    def kind(self) -> str:
        return "variable" if self.is_variable else "constant"

    def sort_key(self) -> tuple:
        if self.is_variable:
            return (2, 0, self.name)
        return constant_sort_key(self.name)

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple[Term, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def signature(self) -> tuple[str, int]:
        return (self.pred, len(self.args))

    def is_ground(self) -> bool:
        return all(t.is_constant for t in self.args)

    def sort_key(self) -> tuple:
        return (self.pred, len(self.args)) + tuple(t.sort_key() for t in self.args)

    def __str__(self) -> str:
        if not self.args:
            return self.pred
        return f"{self.pred}({','.join(t.name for t in self.args)})"


@dataclass(frozen=True)
class Comparison:
    left: Term
    op: str
    right: Term

    def __post_init__(self):
        if self.op not in COMPARISON_OPS:
            raise ValueError(f"unknown comparison operator {self.op!r}")

    def holds(self) -> bool:
        """Evaluate the comparison; both sides must be constants."""
        if not (self.left.is_constant and self.right.is_constant):
            raise ValueError(f"comparison {self} is not ground")
        a = constant_sort_key(self.left.name)
        b = constant_sort_key(self.right.name)
        if self.op == "=":
            return a == b
        if self.op == "!=":
            return a != b
        if self.op == "<":
            return a < b
        if self.op == "<=":
            return a <= b
        if self.op == ">":
            return a > b
        return a >= b

    def __str__(self) -> str:
        return f"{self.left} {self.op} {self.right}"


def _sorted_atoms(atoms: Iterable[Atom]) -> tuple[Atom, ...]:
    return tuple(sorted(atoms, key=Atom.sort_key))


@dataclass(frozen=True)
class Rule:
    """One rule; an empty head is a constraint, an empty body a fact.

    The atom parts are duplicate-free sets; comparisons keep their
    source order.
    """

    head: frozenset[Atom]
    body_pos: frozenset[Atom] = frozenset()
    body_neg: frozenset[Atom] = frozenset()
    comparisons: tuple[Comparison, ...] = ()

    @property
    def is_fact(self) -> bool:
        return (
            len(self.head) == 1
            and not self.body_pos
            and not self.body_neg
            and not self.comparisons
        )

    @property
    def is_constraint(self) -> bool:
        return not self.head

    @property
    def is_normal(self) -> bool:
        return len(self.head) == 1

    def is_ground(self) -> bool:
        return not vars_of(self)

    def atoms(self) -> Iterator[Atom]:
        yield from self.head
        yield from self.body_pos
        yield from self.body_neg

    def __str__(self) -> str:
        head = " | ".join(str(a) for a in _sorted_atoms(self.head))
        body = [str(a) for a in _sorted_atoms(self.body_pos)]
        body += [f"not {a}" for a in _sorted_atoms(self.body_neg)]
        body += [str(c) for c in self.comparisons]
        if body:
            sep = " :- " if head else ":- "
            return f"{head}{sep}{', '.join(body)}."
        return f"{head}."


def make_rule(
    head: Iterable[Atom] = (),
    body_pos: Iterable[Atom] = (),
    body_neg: Iterable[Atom] = (),
    comparisons: Iterable[Comparison] = (),
) -> Rule:
    return Rule(frozenset(head), frozenset(body_pos), frozenset(body_neg), tuple(comparisons))


@dataclass(frozen=True)
class Program:
    """An ordered rule multiset; validated on construction.

    Accepted programs always satisfy the safety invariant and use each
    predicate with a single arity.
    """

    rules: tuple[Rule, ...]
    vocabulary: Mapping[str, int] = field(init=False, hash=False, compare=False)

    def __post_init__(self):
        vocab: dict[str, int] = {}
        for rule in self.rules:
            for atom in rule.atoms():
                seen = vocab.setdefault(atom.pred, atom.arity)
                if seen != atom.arity:
                    raise ArityError(atom.pred, atom.arity, seen)
            unsafe = vars_of_parts(
                rule.head, rule.body_neg, rule.comparisons
            ) - vars_of_atoms(rule.body_pos)
            if unsafe:
                raise SafetyError(min(unsafe), str(rule))
        object.__setattr__(self, "vocabulary", vocab)

    @property
    def facts(self) -> tuple[Rule, ...]:
        return tuple(r for r in self.rules if r.is_fact)

    def is_normal(self) -> bool:
        return all(r.is_normal for r in self.rules)

    def is_positive(self) -> bool:
        """Positive normal program: every rule normal with empty negative body."""
        return all(r.is_normal and not r.body_neg for r in self.rules)

    def is_ground(self) -> bool:
        return all(r.is_ground() for r in self.rules)

    def __str__(self) -> str:
        return program_to_text(self)


Expression = Union[Term, Atom, Comparison, Rule, Program]


def vars_of_atoms(atoms: Iterable[Atom]) -> set[str]:
    out: set[str] = set()
    for atom in atoms:
        for t in atom.args:
            if t.is_variable:
                out.add(t.name)
    return out


def vars_of_parts(*parts: Iterable) -> set[str]:
    out: set[str] = set()
    for part in parts:
        for item in part:
            out |= vars_of(item)
    return out


def vars_of(expr: Expression) -> set[str]:
    """V(E): every variable occurring in the expression."""
    if isinstance(expr, Term):
        return {expr.name} if expr.is_variable else set()
    if isinstance(expr, Atom):
        return vars_of_atoms((expr,))
    if isinstance(expr, Comparison):
        return vars_of(expr.left) | vars_of(expr.right)
    if isinstance(expr, Rule):
        return vars_of_parts(expr.head, expr.body_pos, expr.body_neg, expr.comparisons)
    if isinstance(expr, Program):
        return vars_of_parts(expr.rules)
    raise TypeError(f"cannot take variables of {type(expr).__name__}")


def consts_of(expr: Expression) -> set[str]:
    """C(E): every constant occurring in the expression."""
    if isinstance(expr, Term):
        return {expr.name} if expr.is_constant else set()
    if isinstance(expr, Atom):
        return {t.name for t in expr.args if t.is_constant}
    if isinstance(expr, Comparison):
        return consts_of(expr.left) | consts_of(expr.right)
    if isinstance(expr, Rule):
        out: set[str] = set()
        for atom in expr.atoms():
            out |= consts_of(atom)
        for cmp_ in expr.comparisons:
            out |= consts_of(cmp_)
        return out
    if isinstance(expr, Program):
        out = set()
        for rule in expr.rules:
            out |= consts_of(rule)
        return out
    raise TypeError(f"cannot take constants of {type(expr).__name__}")


def herbrand_universe(program: Program) -> frozenset[str]:
    """All constants of the program, or one designated fresh constant."""
    consts = consts_of(program)
    if not consts:
        return frozenset({FRESH_CONSTANT})
    return frozenset(consts)


def sorted_constants(constants: Iterable[str]) -> list[str]:
    return sorted(constants, key=constant_sort_key)


def program_to_text(program: Program) -> str:
    """Print rules one per line, preserving rule order."""
    return "\n".join(str(r) for r in program.rules) + ("\n" if program.rules else "")


def atom_set_to_text(atoms: Iterable[Atom]) -> str:
    """Canonical `{a, b, ...}` rendering of an interpretation."""
    return "{" + ", ".join(str(a) for a in sorted(atoms, key=Atom.sort_key)) + "}"
