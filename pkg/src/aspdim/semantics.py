"""Exact desk-scale stable-model semantics.

Answer sets of normal ground programs are enumerated by a complete
backtracking search (branch on undetermined atoms, propagate model and
support consequences, verify each total assignment against the reduct's
least model).  Disjunctive programs fall back to brute-force subset
enumeration.  Everything that materializes subsets refuses instances
above a configurable atom limit instead of silently truncating.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import NonNormalProgramError, SizeGuardError
from .grounding import GroundProgram, IntRule
from .syntax import Atom

#: Limit for brute-force subset enumeration (minimal models, models, loops).
BRUTE_ATOM_LIMIT = 22
#: Limit on undetermined atoms entering the answer-set search.
SOLVE_ATOM_LIMIT = 120

Interpretation = frozenset[Atom]

_TRUE, _FALSE = 1, 2


def _interp_key(atoms: frozenset[Atom]) -> tuple:
    return tuple(sorted(a.sort_key() for a in atoms))


def sort_interpretations(interps) -> tuple[Interpretation, ...]:
    return tuple(sorted(interps, key=_interp_key))


def _ids_of(gp: GroundProgram, atoms) -> set[int]:
    """Map an atom set into table ids; atoms outside the table are dropped."""
    out = set()
    for atom in atoms:
        aid = gp.table.lookup(atom)
        if aid is not None:
            out.add(aid)
    return out


def gl_reduct(gp: GroundProgram, interpretation) -> GroundProgram:
    """GL transformation: drop rules refuted by S, strip remaining negation."""
    s_ids = _ids_of(gp, interpretation)
    out: list[IntRule] = []
    for head, pos, neg in gp.int_rules:
        if any(b in s_ids for b in neg):
            continue
        out.append((head, pos, ()))
    return GroundProgram(gp.table, out)


def _lm_ids(rules: list[IntRule]) -> set[int]:
    """Least-model fixpoint of the definite rules (constraints ignored)."""
    definite = [(h[0], p) for h, p, _ in rules if len(h) == 1]
    remaining = [len(p) for _, p in definite]
    watchers: dict[int, list[int]] = {}
    true: set[int] = set()
    queue: list[int] = []
    for ri, (h, p) in enumerate(definite):
        if not p:
            if h not in true:
                true.add(h)
                queue.append(h)
        for b in p:
            watchers.setdefault(b, []).append(ri)
    seen_fired = [not p for _, p in definite]
    while queue:
        a = queue.pop()
        for ri in watchers.get(a, ()):
            remaining[ri] -= 1
            if remaining[ri] == 0 and not seen_fired[ri]:
                seen_fired[ri] = True
                h = definite[ri][0]
                if h not in true:
                    true.add(h)
                    queue.append(h)
    return true


def least_model(gp: GroundProgram) -> Interpretation:
    """Least model of a positive normal program (TP fixpoint from the empty set)."""
    for head, _pos, neg in gp.int_rules:
        if len(head) != 1:
            raise NonNormalProgramError("least_model requires singleton heads")
        if neg:
            raise ValueError("least_model requires a positive program")
    lm = _lm_ids(gp.int_rules)
    return gp.interpretations(lm)


def _is_model_ids(rules: list[IntRule], s: set[int]) -> bool:
    for head, pos, neg in rules:
        if all(p in s for p in pos) and not any(b in s for b in neg):
            if not any(h in s for h in head):
                return False
    return True


def is_model(gp: GroundProgram, interpretation) -> bool:
    return _is_model_ids(gp.int_rules, _ids_of(gp, interpretation))


def models(gp: GroundProgram, max_atoms: int | None = None) -> tuple[Interpretation, ...]:
    """All models over the atom universe, by subset enumeration."""
    limit = BRUTE_ATOM_LIMIT if max_atoms is None else max_atoms
    universe = sorted(gp.universe_ids)
    if len(universe) > limit:
        raise SizeGuardError("model enumeration", len(universe), limit)
    out = []
    for size in range(len(universe) + 1):
        for subset in combinations(universe, size):
            s = set(subset)
            if _is_model_ids(gp.int_rules, s):
                out.append(gp.interpretations(s))
    return sort_interpretations(out)


def minimal_models(gp: GroundProgram, max_atoms: int | None = None) -> tuple[Interpretation, ...]:
    """All subset-minimal models of a positive program, brute force with pruning.

    Minimal models contain only head atoms, so candidates range over those.
    """
    for _head, _pos, neg in gp.int_rules:
        if neg:
            raise ValueError("minimal_models requires a positive program")
    limit = BRUTE_ATOM_LIMIT if max_atoms is None else max_atoms
    heads = sorted({h for head, _, _ in gp.int_rules for h in head})
    if len(heads) > limit:
        raise SizeGuardError("minimal-model enumeration", len(heads), limit)
    found: list[set[int]] = []
    out = []
    for size in range(len(heads) + 1):
        for subset in combinations(heads, size):
            s = set(subset)
            if any(m <= s for m in found):
                continue
            if _is_model_ids(gp.int_rules, s):
                found.append(s)
                out.append(gp.interpretations(s))
    return sort_interpretations(out)


class _NormalSolver:
    """Complete enumeration of the stable models of a normal ground program."""

    def __init__(self, gp: GroundProgram):
        self.gp = gp
        self.atoms = sorted(gp.universe_ids, key=gp.table.sort_key)
        self.local = {aid: i for i, aid in enumerate(self.atoms)}
        n = len(self.atoms)
        self.rules: list[tuple[int, tuple[int, ...], tuple[int, ...]]] = []
        for head, pos, neg in gp.int_rules:
            h = self.local[head[0]] if head else -1
            self.rules.append(
                (h, tuple(self.local[p] for p in pos), tuple(self.local[b] for b in neg))
            )
        self.occ_pos: list[list[int]] = [[] for _ in range(n)]
        self.occ_neg: list[list[int]] = [[] for _ in range(n)]
        self.defs: list[list[int]] = [[] for _ in range(n)]
        for ri, (h, pos, neg) in enumerate(self.rules):
            if h >= 0:
                self.defs[h].append(ri)
            for p in pos:
                self.occ_pos[p].append(ri)
            for b in neg:
                self.occ_neg[b].append(ri)
        self.assign = bytearray(n)
        self.dead = bytearray(len(self.rules))
        self.pos_left = [len(pos) for _, pos, _ in self.rules]
        self.neg_left = [len(neg) for _, _, neg in self.rules]
        self.live_defs = [len(d) for d in self.defs]
        self.trail: list[tuple[str, int]] = []
        self.queue: list[int] = []

    # -- propagation ---------------------------------------------------

    def _set(self, a: int, value: int) -> bool:
        cur = self.assign[a]
        if cur:
            return cur == value
        self.assign[a] = value
        self.trail.append(("a", a))
        self.queue.append(a)
        return True

    def _kill(self, ri: int) -> bool:
        if self.dead[ri]:
            return True
        self.dead[ri] = 1
        self.trail.append(("d", ri))
        h = self.rules[ri][0]
        if h >= 0:
            self.live_defs[h] -= 1
            self.trail.append(("l", h))
            if self.live_defs[h] == 0:
                if self.assign[h] == _TRUE:
                    return False
                if not self.assign[h]:
                    return self._set(h, _FALSE)
        return True

    def _fire_check(self, ri: int) -> bool:
        if self.dead[ri] or self.pos_left[ri] or self.neg_left[ri]:
            return True
        h = self.rules[ri][0]
        if h < 0:
            return False
        return self._set(h, _TRUE)

    def propagate(self) -> bool:
        while self.queue:
            a = self.queue.pop()
            if self.assign[a] == _TRUE:
                for ri in self.occ_neg[a]:
                    if not self._kill(ri):
                        return False
                for ri in self.occ_pos[a]:
                    if self.dead[ri]:
                        continue
                    self.pos_left[ri] -= 1
                    self.trail.append(("p", ri))
                    if not self._fire_check(ri):
                        return False
                if self.live_defs[a] == 0:
                    return False
            else:
                for ri in self.occ_pos[a]:
                    if not self._kill(ri):
                        return False
                for ri in self.occ_neg[a]:
                    if self.dead[ri]:
                        continue
                    self.neg_left[ri] -= 1
                    self.trail.append(("n", ri))
                    if not self._fire_check(ri):
                        return False
        return True

    def _undo(self, mark: int) -> None:
        while len(self.trail) > mark:
            kind, x = self.trail.pop()
            if kind == "a":
                self.assign[x] = 0
            elif kind == "d":
                self.dead[x] = 0
            elif kind == "l":
                self.live_defs[x] += 1
            elif kind == "p":
                self.pos_left[x] += 1
            else:
                self.neg_left[x] += 1
        self.queue.clear()

    # -- search --------------------------------------------------------

    def _root(self) -> bool:
        ok = True
        for ri in range(len(self.rules)):
            if not self._fire_check(ri):
                ok = False
                break
        if ok:
            for a in range(len(self.atoms)):
                if not self.assign[a] and self.live_defs[a] == 0:
                    if not self._set(a, _FALSE):
                        ok = False
                        break
            ok = ok and self.propagate()
        return ok

    def _stable(self) -> frozenset[int] | None:
        s = {a for a in range(len(self.atoms)) if self.assign[a] == _TRUE}
        reduct = []
        for h, pos, neg in self.rules:
            if any(b in s for b in neg):
                continue
            reduct.append(((h,) if h >= 0 else (), pos, ()))
        if not _is_model_ids(reduct, s):
            return None
        if _lm_ids(reduct) != s:
            return None
        return frozenset(s)

    def enumerate(self, limit: int) -> list[frozenset[int]]:
        results: list[frozenset[int]] = []
        if not self._root():
            return results
        branch = [a for a in range(len(self.atoms)) if not self.assign[a]]
        if len(branch) > limit:
            raise SizeGuardError("answer-set search", len(branch), limit)

        def search(k: int) -> None:
            while k < len(branch) and self.assign[branch[k]]:
                k += 1
            if k == len(branch):
                s = self._stable()
                if s is not None:
                    results.append(s)
                return
            a = branch[k]
            for value in (_TRUE, _FALSE):
                mark = len(self.trail)
                if self._set(a, value) and self.propagate():
                    search(k + 1)
                self._undo(mark)

        search(0)
        return [frozenset(self.atoms[i] for i in s) for s in results]


def _brute_answer_sets(gp: GroundProgram, limit: int) -> list[set[int]]:
    heads = sorted({h for head, _, _ in gp.int_rules for h in head})
    if len(heads) > limit:
        raise SizeGuardError("answer-set enumeration", len(heads), limit)
    out = []
    for size in range(len(heads) + 1):
        for subset in combinations(heads, size):
            s = set(subset)
            if _is_answer_set_ids(gp, s):
                out.append(s)
    return out


def _minimal_model_of_reduct(gp: GroundProgram, s: set[int]) -> bool:
    reduct = []
    for head, pos, neg in gp.int_rules:
        if any(b in s for b in neg):
            continue
        reduct.append((head, pos, ()))
    if not _is_model_ids(reduct, s):
        return False
    if all(len(h) <= 1 for h, _, _ in reduct):
        return _lm_ids(reduct) == s
    forced = {h[0] for h, p, _ in reduct if len(h) == 1 and not p}
    if not forced <= s:
        return False
    free = sorted(s - forced)
    for size in range(len(free)):
        for subset in combinations(free, size):
            t = forced | set(subset)
            if _is_model_ids(reduct, t):
                return False
    return True


def _is_answer_set_ids(gp: GroundProgram, s: set[int]) -> bool:
    if not _is_model_ids(gp.int_rules, s):
        return False
    return _minimal_model_of_reduct(gp, s)


def is_answer_set(gp: GroundProgram, interpretation) -> bool:
    """Exact polynomial check for normal programs (exponential minimality
    check only for disjunctive ones)."""
    s = _ids_of(gp, interpretation)
    if len(s) != len(set(interpretation)):
        return False  # an atom outside the program's tables can never be derived
    return _is_answer_set_ids(gp, s)


def answer_sets(gp: GroundProgram, max_atoms: int | None = None) -> tuple[Interpretation, ...]:
    """All answer sets, canonically ordered.

    Normal programs use the backtracking enumerator; programs with
    disjunctive heads use brute-force subset enumeration.
    """
    if all(len(head) <= 1 for head, _, _ in gp.int_rules):
        solver = _NormalSolver(gp)
        limit = SOLVE_ATOM_LIMIT if max_atoms is None else max_atoms
        found = solver.enumerate(limit)
        return sort_interpretations(gp.interpretations(s) for s in found)
    limit = BRUTE_ATOM_LIMIT if max_atoms is None else max_atoms
    found = _brute_answer_sets(gp, limit)
    return sort_interpretations(gp.interpretations(s) for s in found)


def has_answer_set(gp: GroundProgram, max_atoms: int | None = None) -> bool:
    return bool(answer_sets(gp, max_atoms))


def complete_with_choices(gp: GroundProgram, chosen, choice_predicates) -> Interpretation | None:
    """Extend a choice assignment to a full interpretation by propagation.

    Atoms of the choice predicates are fixed (true iff in `chosen`), the
    consequences are propagated, and anything left open is read as
    false.  Polynomial; the caller still verifies the result exactly.
    Returns None when the chosen atoms are inconsistent with the program.
    """
    for head, _, _ in gp.int_rules:
        if len(head) > 1:
            raise NonNormalProgramError("choice completion requires a normal program")
    chosen_ids = set()
    for atom in chosen:
        aid = gp.table.lookup(atom)
        if aid is None:
            return None
        chosen_ids.add(aid)
    sigs = set(choice_predicates)
    solver = _NormalSolver(gp)
    if not solver._root():
        return None
    for aid in sorted(gp.universe_ids):
        pred, args = gp.table.keys[aid]
        if (pred, len(args)) not in sigs:
            continue
        local = solver.local[aid]
        value = _TRUE if aid in chosen_ids else _FALSE
        if not solver._set(local, value) or not solver.propagate():
            return None
    true_ids = {
        solver.atoms[i] for i in range(len(solver.atoms)) if solver.assign[i] == _TRUE
    }
    return gp.interpretations(true_ids)


# -- loops -------------------------------------------------------------


@dataclass(frozen=True)
class Loop:
    """A ground-atom set inducing a strongly connected subgraph of G+."""

    atoms: frozenset[Atom]
    is_elementary: bool | None = None

    def sort_key(self) -> tuple:
        return (len(self.atoms), _interp_key(self.atoms))


@dataclass(frozen=True)
class LoopFormula:
    loop: Loop
    supports: tuple  # external-support rules R-(L, P)


def _dep_edges(gp: GroundProgram) -> dict[int, set[int]]:
    edges: dict[int, set[int]] = {a: set() for a in gp.universe_ids}
    for head, pos, _neg in gp.int_rules:
        for h in head:
            for b in pos:
                edges[h].add(b)
    return edges


def positive_dependency_graph(gp: GroundProgram) -> dict[Atom, frozenset[Atom]]:
    """Edge (p, q) iff some rule has p in the head and q in the positive body."""
    edges = _dep_edges(gp)
    at = gp.table.atom
    return {at(a): frozenset(at(b) for b in bs) for a, bs in edges.items()}


def _strongly_connected(subset: tuple[int, ...], edges: dict[int, set[int]]) -> bool:
    inside = set(subset)
    fwd = {a: [b for b in edges[a] if b in inside] for a in subset}
    bwd: dict[int, list[int]] = {a: [] for a in subset}
    for a, bs in fwd.items():
        for b in bs:
            bwd[b].append(a)
    for adj in (fwd, bwd):
        seen = {subset[0]}
        stack = [subset[0]]
        while stack:
            for b in adj[stack.pop()]:
                if b not in seen:
                    seen.add(b)
                    stack.append(b)
        if len(seen) != len(inside):
            return False
    return True


def _sccs_of(edges: dict[int, set[int]]) -> list[set[int]]:
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    sccs: list[set[int]] = []
    counter = 0
    for root in sorted(edges):
        if root in index:
            continue
        work = [(root, iter(sorted(edges[root])))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for nxt in it:
                if nxt not in index:
                    index[nxt] = low[nxt] = counter
                    counter += 1
                    stack.append(nxt)
                    on_stack.add(nxt)
                    work.append((nxt, iter(sorted(edges[nxt]))))
                    advanced = True
                    break
                if nxt in on_stack:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if low[node] == index[node]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == node:
                        break
                sccs.append(comp)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
    return sccs


def _loop_id_sets(gp: GroundProgram, max_atoms: int | None) -> list[frozenset[int]]:
    limit = BRUTE_ATOM_LIMIT if max_atoms is None else max_atoms
    universe = gp.universe_ids
    if len(universe) > limit:
        raise SizeGuardError("loop enumeration", len(universe), limit)
    edges = _dep_edges(gp)
    out = [frozenset({a}) for a in sorted(universe)]
    for scc in _sccs_of(edges):
        members = sorted(scc)
        for size in range(2, len(members) + 1):
            for subset in combinations(members, size):
                if _strongly_connected(subset, edges):
                    out.append(frozenset(subset))
    return out


def loops(gp: GroundProgram, max_atoms: int | None = None) -> tuple[Loop, ...]:
    """Every atom set inducing a strongly connected subgraph of G+;
    singletons always qualify."""
    found = _loop_id_sets(gp, max_atoms)
    return tuple(
        sorted((Loop(gp.interpretations(ids)) for ids in found), key=Loop.sort_key)
    )


def _supports_ids(gp: GroundProgram, loop_ids: frozenset[int]) -> tuple[list[int], list[int]]:
    r_minus, r_plus = [], []
    for i, (head, pos, _neg) in enumerate(gp.int_rules):
        if not any(h in loop_ids for h in head):
            continue
        if any(p in loop_ids for p in pos):
            r_plus.append(i)
        else:
            r_minus.append(i)
    return r_minus, r_plus


def external_supports(loop: Loop, gp: GroundProgram):
    """R-(L, P) and its complement R+(L, P) among head-intersecting rules."""
    ids = frozenset(_ids_of(gp, loop.atoms))
    r_minus, r_plus = _supports_ids(gp, ids)
    return (
        tuple(gp.rule_view(i) for i in r_minus),
        tuple(gp.rule_view(i) for i in r_plus),
    )


def loop_formula(loop: Loop, gp: GroundProgram) -> LoopFormula:
    return LoopFormula(loop, external_supports(loop, gp)[0])


def satisfies_loop_formula(interpretation, loop: Loop, gp: GroundProgram) -> bool:
    """True iff L not contained in I, or some external support body holds in I."""
    s = _ids_of(gp, interpretation)
    loop_ids = frozenset(_ids_of(gp, loop.atoms))
    if len(loop_ids) != len(loop.atoms) or not loop_ids <= s:
        return True
    r_minus, _ = _supports_ids(gp, loop_ids)
    for i in r_minus:
        _, pos, neg = gp.int_rules[i]
        if all(p in s for p in pos) and not any(b in s for b in neg):
            return True
    return False


def _is_elementary_ids(gp: GroundProgram, loop_ids: frozenset[int],
                       edges: dict[int, set[int]]) -> bool:
    if len(loop_ids) <= 1:
        return True
    _, r_plus = _supports_ids(gp, loop_ids)
    plus_set = set(r_plus)
    members = sorted(loop_ids)
    subsets: list[tuple[int, ...]] = [(a,) for a in members]
    for size in range(2, len(members)):
        subsets.extend(
            sub for sub in combinations(members, size) if _strongly_connected(sub, edges)
        )
    for sub in subsets:
        sub_ids = frozenset(sub)
        r_minus_sub, _ = _supports_ids(gp, sub_ids)
        if not any(i in plus_set for i in r_minus_sub):
            return False
    return True


def is_elementary_loop(loop: Loop, gp: GroundProgram) -> bool:
    """Elementary: every strict sub-loop has an external support drawn
    from the rules that support the loop internally.

    Loops failing this decompose into sub-loops whose formulas already
    carry the constraint, which is what keeps the elementary subset
    sufficient for the stable-model characterization.
    """
    ids = frozenset(_ids_of(gp, loop.atoms))
    return _is_elementary_ids(gp, ids, _dep_edges(gp))


def elementary_loops(gp: GroundProgram, max_atoms: int | None = None) -> tuple[Loop, ...]:
    edges = _dep_edges(gp)
    out = []
    for ids in _loop_id_sets(gp, max_atoms):
        if _is_elementary_ids(gp, ids, edges):
            out.append(Loop(gp.interpretations(ids), True))
    return tuple(sorted(out, key=Loop.sort_key))
