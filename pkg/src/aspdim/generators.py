"""Deterministic benchmark-instance generators.

Every generator emits program text (then parses it), so identical
(family, size, seed) triples are byte-identical.  Instances are built
around a planted solution, which doubles as the certificate that at
least one answer set survives the paired heuristic diminution.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .parser import parse_program
from .syntax import Atom, Program, Term

COLORS = ("r", "b", "g")

#: The 9-vertex demo graph used throughout the toolkit's regression suite:
#: a central triangle 1-2-3 with a pendant triangle on each corner.
DEMO_COLORING_EDGES = (
    (1, 2), (1, 3), (2, 3),
    (1, 4), (1, 5), (4, 5),
    (2, 6), (2, 7), (6, 7),
    (3, 8), (3, 9), (8, 9),
)

COLORING_RULES = """\
color(V,C) :- vertex(V), col(C), not othercolor(V,C).
othercolor(V,C) :- vertex(V), col(C), col(C1), C != C1, color(V,C1).
:- arc(V1,V2), col(C), color(V1,C), color(V2,C).
"""

HAMILTONIAN_RULES = """\
hc(X,Y) :- edge(X,Y), off(X,Y,O), not nothc(X,Y).
nothc(X,Y) :- edge(X,Y), off(X,Y,O), hc(X,Z), Y != Z.
reach(Y) :- start(Y).
reach(Y) :- reach(X), hc(X,Y).
:- node(X), not reach(X).
:- hc(X,Y), hc(X,Z), Y != Z.
:- hc(X,Y), hc(Z,Y), X != Z.
"""

STABLE_MARRIAGE_RULES = """\
match(M,W) :- mrank(M,W,R), not othermatch(M,W).
othermatch(M,W) :- mrank(M,W,R), mrank(M,W2,R2), W != W2, match(M,W2).
:- match(M1,W), match(M2,W), M1 != M2.
mprefers(M,W1,W2) :- mrank(M,W1,R1), mrank(M,W2,R2), R1 < R2.
wprefers(W,M1,M2) :- wrank(W,M1,R1), wrank(W,M2,R2), R1 < R2.
wbetter(W,M) :- match(M2,W), wprefers(W,M,M2).
:- match(M,W), mprefers(M,W2,W), wbetter(W2,M).
"""


@dataclass(frozen=True)
class InstanceSpec:
    family: str  # "coloring" | "hamiltonian" | "stable_marriage"
    n: int
    seed: int
    edge_prob: float = 0.5  # coloring only
    chords_per_node: int = 8  # hamiltonian only

    def __post_init__(self):
        if self.family not in ("coloring", "hamiltonian", "stable_marriage"):
            raise ValueError(f"unknown family {self.family!r}")
        if self.n < 1 or (self.family == "hamiltonian" and self.n < 3):
            raise ValueError(f"instance too small: n={self.n}")
        if not 0.0 <= self.edge_prob <= 1.0:
            raise ValueError("edge probability must be within [0, 1]")


@dataclass(frozen=True)
class Instance:
    """A generated program plus its planted solution and certificate data."""

    spec: InstanceSpec
    text: str
    program: Program
    planted: frozenset[Atom]
    choice_predicates: frozenset[tuple[str, int]]
    interest_predicates: frozenset[tuple[str, int]]


def _atom(pred: str, *args) -> Atom:
    return Atom(pred, tuple(Term(str(a)) for a in args))


def _coloring_instance(spec: InstanceSpec, edges=None) -> Instance:
    rng = random.Random(spec.seed)
    n = spec.n
    vertices = list(range(1, n + 1))
    if edges is None:
        planted = {v: rng.choice(COLORS) for v in vertices}
        edges = [
            (u, v)
            for u in vertices
            for v in vertices
            if u < v and planted[u] != planted[v] and rng.random() < spec.edge_prob
        ]
    else:
        edges = [tuple(e) for e in edges]
        planted = _greedy_coloring(vertices, edges)
    lines = [f"vertex({v})." for v in vertices]
    lines += [f"arc({u},{v})." for u, v in edges]
    lines += [f"col({c})." for c in COLORS]
    lines.append(COLORING_RULES.rstrip("\n"))
    text = "\n".join(lines) + "\n"
    planted_atoms = frozenset(_atom("color", v, c) for v, c in planted.items())
    return Instance(
        spec, text, parse_program(text), planted_atoms,
        frozenset({("color", 2)}), frozenset({("color", 2)}),
    )


def _greedy_coloring(vertices, edges) -> dict[int, str]:
    adj: dict[int, set[int]] = {v: set() for v in vertices}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    out: dict[int, str] = {}
    for v in vertices:
        used = {out[u] for u in adj[v] if u in out}
        free = [c for c in COLORS if c not in used]
        if not free:
            raise ValueError("graph is not 3-colorable by the greedy order")
        out[v] = free[0]
    return out


def _hamiltonian_instance(spec: InstanceSpec) -> Instance:
    rng = random.Random(spec.seed)
    n = spec.n
    ring = [(i, (i + 1) % n) for i in range(n)]
    chords: set[tuple[int, int]] = set()
    for _ in range(spec.chords_per_node * n):
        x = rng.randrange(n)
        y = rng.randrange(n)
        if x == y or y == (x + 1) % n:
            continue
        chords.add((x, y))
    edges = ring + sorted(chords)
    lines = [f"node({i})." for i in range(n)]
    lines.append("start(0).")
    lines += [f"edge({x},{y})." for x, y in edges]
    lines += [f"off({x},{y},o{(y - x) % n})." for x, y in edges]
    lines.append(HAMILTONIAN_RULES.rstrip("\n"))
    text = "\n".join(lines) + "\n"
    planted = frozenset(_atom("hc", x, y) for x, y in ring)
    return Instance(
        spec, text, parse_program(text), planted,
        frozenset({("hc", 2)}), frozenset({("hc", 2)}),
    )


def gale_shapley(mprefs: list[list[int]], wprefs: list[list[int]]) -> list[int]:
    """Men-proposing deferred acceptance; returns the woman per man."""
    n = len(mprefs)
    wrank = [[0] * n for _ in range(n)]
    for w in range(n):
        for rank, m in enumerate(wprefs[w]):
            wrank[w][m] = rank
    next_proposal = [0] * n
    engaged_to: list[int | None] = [None] * n  # per woman
    free = list(range(n - 1, -1, -1))
    while free:
        m = free.pop()
        w = mprefs[m][next_proposal[m]]
        next_proposal[m] += 1
        current = engaged_to[w]
        if current is None:
            engaged_to[w] = m
        elif wrank[w][m] < wrank[w][current]:
            engaged_to[w] = m
            free.append(current)
        else:
            free.append(m)
    wife = [0] * n
    for w, m in enumerate(engaged_to):
        wife[m] = w
    return wife


def is_stable_matching(mprefs, wprefs, wife: list[int]) -> bool:
    n = len(mprefs)
    husband = [0] * n
    for m, w in enumerate(wife):
        husband[w] = m
    mrank = [[0] * n for _ in range(n)]
    wrank = [[0] * n for _ in range(n)]
    for m in range(n):
        for rank, w in enumerate(mprefs[m]):
            mrank[m][w] = rank
    for w in range(n):
        for rank, m in enumerate(wprefs[w]):
            wrank[w][m] = rank
    for m in range(n):
        for w in range(n):
            if w == wife[m]:
                continue
            if mrank[m][w] < mrank[m][wife[m]] and wrank[w][m] < wrank[w][husband[w]]:
                return False
    return True


def _stable_marriage_instance(spec: InstanceSpec) -> Instance:
    rng = random.Random(spec.seed)
    n = spec.n
    # Mutual first choices along the diagonal guarantee that the identity
    # matching is stable and survives any rank window >= 1.
    mprefs = []
    wprefs = []
    for i in range(n):
        rest = [j for j in range(n) if j != i]
        rng.shuffle(rest)
        mprefs.append([i] + rest)
        rest = [j for j in range(n) if j != i]
        rng.shuffle(rest)
        wprefs.append([i] + rest)
    wife = gale_shapley(mprefs, wprefs)
    if not is_stable_matching(mprefs, wprefs, wife):
        raise AssertionError("deferred-acceptance oracle produced an unstable matching")
    lines = [f"man(m{i + 1})." for i in range(n)]
    lines += [f"woman(w{i + 1})." for i in range(n)]
    for m in range(n):
        lines += [f"mrank(m{m + 1},w{w + 1},{rank + 1})." for rank, w in enumerate(mprefs[m])]
    for w in range(n):
        lines += [f"wrank(w{w + 1},m{m + 1},{rank + 1})." for rank, m in enumerate(wprefs[w])]
    lines.append(STABLE_MARRIAGE_RULES.rstrip("\n"))
    text = "\n".join(lines) + "\n"
    planted = frozenset(_atom("match", f"m{m + 1}", f"w{wife[m] + 1}") for m in range(n))
    return Instance(
        spec, text, parse_program(text), planted,
        frozenset({("match", 2)}), frozenset({("match", 2)}),
    )


def make_instance(spec: InstanceSpec, edges=None) -> Instance:
    if spec.family == "coloring":
        return _coloring_instance(spec, edges)
    if spec.family == "hamiltonian":
        return _hamiltonian_instance(spec)
    return _stable_marriage_instance(spec)


def gen_coloring(n: int, p: float = 0.5, seed: int = 0, edges=None) -> Program:
    """Three-coloring instance: planted proper coloring, arcs only between
    differently colored vertices (or an explicit edge list)."""
    return make_instance(InstanceSpec("coloring", n, seed, edge_prob=p), edges).program


def gen_hamiltonian(n: int, style: str = "ring_plus_chords", seed: int = 0,
                    chords_per_node: int = 8) -> Program:
    """Directed graph containing the ring 0..n-1 plus seeded chords; edges
    carry their ring offset so successor choices can be narrowed by a
    constant set."""
    if style != "ring_plus_chords":
        raise ValueError(f"unknown style {style!r}")
    return make_instance(
        InstanceSpec("hamiltonian", n, seed, chords_per_node=chords_per_node)
    ).program


def gen_stable_marriage(n: int, seed: int = 0) -> Program:
    """Stable-marriage instance with mutual diagonal top choices; existence
    of a stable matching is certified by the deferred-acceptance oracle."""
    return make_instance(InstanceSpec("stable_marriage", n, seed)).program


def demo_coloring_program() -> Program:
    """The 9-vertex, 12-arc triple-triangle demo instance."""
    return gen_coloring(9, edges=DEMO_COLORING_EDGES)
