"""Bottom-up dependency-driven grounding and the full-instantiation oracle.

`ground` follows the classic workflow: build the predicate-rule graph,
order its SCCs topologically, and instantiate component by component,
matching positive bodies against the possibly-true atoms `A_negbot`
while certainly-true atoms `A_top` drive simplification.  Negative
literals over predicates of the component being processed cannot be
judged mid-fixpoint, so they are resolved when the component completes;
everything from earlier components is decided on the spot.

`full_instantiation` is the brute-force oracle: every rule instantiated
with every total assignment over D, only comparisons evaluated.
"""
from __future__ import annotations

import heapq
import time
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, Sequence

from .errors import DomainError, GroundingInterrupted
from .matching import (
    ConstTable,
    RelationStore,
    Substitution,
    encode_comparison,
    encode_pattern,
    match_patterns,
)
from .syntax import (
    Atom,
    Program,
    Rule,
    Term,
    herbrand_universe,
    sorted_constants,
    vars_of,
)

PredNode = tuple  # ("pred", name, arity)
RuleNode = tuple  # ("rule", index)


def pred_node(name: str, arity: int) -> PredNode:
    return ("pred", name, arity)


def rule_node(index: int) -> RuleNode:
    return ("rule", index)


@dataclass(frozen=True)
class PredicateRuleGraph:
    """Bipartite graph between predicate signatures and rule occurrences."""

    program: Program
    nodes: frozenset[tuple]
    edges: frozenset[tuple[tuple, tuple]]

    def successors(self, node: tuple) -> tuple[tuple, ...]:
        return self._succ.get(node, ())

    @property
    def _succ(self) -> Mapping[tuple, tuple[tuple, ...]]:
        cached = self.__dict__.get("_succ_cache")
        if cached is None:
            succ: dict[tuple, list[tuple]] = {}
            for src, dst in sorted(self.edges):
                succ.setdefault(src, []).append(dst)
            cached = {k: tuple(v) for k, v in succ.items()}
            self.__dict__["_succ_cache"] = cached
        return cached


def build_predicate_rule_graph(program: Program) -> PredicateRuleGraph:
    """Edges: p/n -> r for body occurrences, r -> p/n for head occurrences.

    Comparisons contribute no nodes or edges.
    """
    nodes: set[tuple] = set()
    edges: set[tuple[tuple, tuple]] = set()
    for sig in program.vocabulary.items():
        nodes.add(pred_node(*sig))
    for i, rule in enumerate(program.rules):
        rn = rule_node(i)
        nodes.add(rn)
        for atom in rule.body_pos | rule.body_neg:
            edges.add((pred_node(atom.pred, atom.arity), rn))
        for atom in rule.head:
            edges.add((rn, pred_node(atom.pred, atom.arity)))
    return PredicateRuleGraph(program, frozenset(nodes), frozenset(edges))


def _tarjan_sccs(nodes: Sequence[tuple], succ) -> list[frozenset[tuple]]:
    index: dict[tuple, int] = {}
    low: dict[tuple, int] = {}
    on_stack: set[tuple] = set()
    stack: list[tuple] = []
    sccs: list[frozenset[tuple]] = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, 0)]
        while work:
            node, ei = work[-1]
            if ei == 0:
                index[node] = low[node] = counter
                counter += 1
                stack.append(node)
                on_stack.add(node)
            targets = succ(node)
            advanced = False
            while ei < len(targets):
                nxt = targets[ei]
                ei += 1
                if nxt not in index:
                    work[-1] = (node, ei)
                    work.append((nxt, 0))
                    advanced = True
                    break
                if nxt in on_stack:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if low[node] == index[node]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == node:
                        break
                sccs.append(frozenset(comp))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
    return sccs


def _component_key(comp: frozenset[tuple], program: Program) -> tuple:
    rule_idxs = [n[1] for n in comp if n[0] == "rule"]
    is_fact = bool(rule_idxs) and all(
        len(comp) == 1 and program.rules[i].is_fact for i in rule_idxs
    )
    min_rule = min(rule_idxs) if rule_idxs else len(program.rules)
    min_pred = min((f"{n[1]}/{n[2]}" for n in comp if n[0] == "pred"), default="")
    return (0 if is_fact else 1, min_rule, min_pred)


def scc_topological_order(graph: PredicateRuleGraph) -> tuple[frozenset[tuple], ...]:
    """SCCs ordered so every edge goes forward; ties broken deterministically.

    Unconstrained ties are resolved by (fact components first, smallest
    source rule index, smallest predicate signature).
    """
    order_nodes = sorted(
        graph.nodes, key=lambda n: (0, n[1], "") if n[0] == "rule" else (1, 0, f"{n[1]}/{n[2]}")
    )
    sccs = _tarjan_sccs(order_nodes, graph.successors)
    comp_of: dict[tuple, int] = {}
    for ci, comp in enumerate(sccs):
        for node in comp:
            comp_of[node] = ci
    indegree = [0] * len(sccs)
    out: list[set[int]] = [set() for _ in sccs]
    for src, dst in graph.edges:
        a, b = comp_of[src], comp_of[dst]
        if a != b and b not in out[a]:
            out[a].add(b)
            indegree[b] += 1
    keys = [_component_key(comp, graph.program) for comp in sccs]
    ready = [(keys[ci], ci) for ci in range(len(sccs)) if indegree[ci] == 0]
    heapq.heapify(ready)
    ordered: list[frozenset[tuple]] = []
    while ready:
        _, ci = heapq.heappop(ready)
        ordered.append(sccs[ci])
        for nxt in out[ci]:
            indegree[nxt] -= 1
            if indegree[nxt] == 0:
                heapq.heappush(ready, (keys[nxt], nxt))
    return tuple(ordered)


class AtomTable:
    """Interns ground atoms as dense ids on top of a constant table."""

    def __init__(self, consts: ConstTable | None = None):
        self.consts = consts if consts is not None else ConstTable()
        self.ids: dict[tuple[str, tuple[int, ...]], int] = {}
        self.keys: list[tuple[str, tuple[int, ...]]] = []
        self._views: dict[int, Atom] = {}
        self._strs: dict[int, str] = {}

    def __len__(self) -> int:
        return len(self.keys)

    def intern(self, pred: str, arg_ids: tuple[int, ...]) -> int:
        key = (pred, arg_ids)
        aid = self.ids.get(key)
        if aid is None:
            aid = len(self.keys)
            self.ids[key] = aid
            self.keys.append(key)
        return aid

    def intern_atom(self, atom: Atom) -> int:
        return self.intern(atom.pred, tuple(self.consts.intern(t.name) for t in atom.args))

    def lookup(self, atom: Atom) -> int | None:
        ids = self.consts.ids
        try:
            key = (atom.pred, tuple(ids[t.name] for t in atom.args))
        except KeyError:
            return None
        return self.ids.get(key)

    def atom(self, aid: int) -> Atom:
        view = self._views.get(aid)
        if view is None:
            pred, args = self.keys[aid]
            names = self.consts.names
            view = Atom(pred, tuple(Term(names[c]) for c in args))
            self._views[aid] = view
        return view

    def text(self, aid: int) -> str:
        s = self._strs.get(aid)
        if s is None:
            pred, args = self.keys[aid]
            names = self.consts.names
            s = f"{pred}({','.join(names[c] for c in args)})" if args else pred
            self._strs[aid] = s
        return s

    def sort_key(self, aid: int) -> tuple:
        return self.atom(aid).sort_key()


IntRule = tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]


class GroundProgram:
    """A ground program over interned atoms.

    `rules` materializes AST views on demand; the benchmark paths stay on
    the integer encoding (`int_rules`).  `true_atoms` / `possible_atoms`
    are the grounder's `A_top` / `A_negbot` when produced by `ground`,
    and derived conservatively (fact heads / all heads) otherwise.
    """

    def __init__(
        self,
        table: AtomTable,
        int_rules: list[IntRule],
        true_ids: set[int] | None = None,
        poss_ids: set[int] | None = None,
    ):
        self.table = table
        self.int_rules = int_rules
        if true_ids is None:
            true_ids = {r[0][0] for r in int_rules if len(r[0]) == 1 and not r[1] and not r[2]}
        if poss_ids is None:
            poss_ids = set(true_ids)
            for head, _, _ in int_rules:
                poss_ids.update(head)
        self.true_ids = true_ids
        self.poss_ids = poss_ids
        self._universe_ids: frozenset[int] | None = None
        self._views: tuple[Rule, ...] | None = None

    @property
    def universe_ids(self) -> frozenset[int]:
        if self._universe_ids is None:
            atoms: set[int] = set(self.true_ids) | set(self.poss_ids)
            for head, pos, neg in self.int_rules:
                atoms.update(head)
                atoms.update(pos)
                atoms.update(neg)
            self._universe_ids = frozenset(atoms)
        return self._universe_ids

    @property
    def n_rules(self) -> int:
        return len(self.int_rules)

    def rule_view(self, i: int) -> Rule:
        head, pos, neg = self.int_rules[i]
        at = self.table.atom
        return Rule(
            frozenset(at(a) for a in head),
            frozenset(at(a) for a in pos),
            frozenset(at(a) for a in neg),
        )

    @property
    def rules(self) -> tuple[Rule, ...]:
        if self._views is None:
            self._views = tuple(self.rule_view(i) for i in range(len(self.int_rules)))
        return self._views

    @property
    def atom_universe(self) -> frozenset[Atom]:
        return frozenset(self.table.atom(a) for a in self.universe_ids)

    @property
    def true_atoms(self) -> frozenset[Atom]:
        return frozenset(self.table.atom(a) for a in self.true_ids)

    @property
    def possible_atoms(self) -> frozenset[Atom]:
        return frozenset(self.table.atom(a) for a in self.poss_ids)

    def rule_lines(self) -> list[str]:
        """Canonical one-line renderings, sorted lexicographically."""
        text = self.table.text
        key = self.table.sort_key
        lines = []
        for head, pos, neg in self.int_rules:
            hs = " | ".join(text(a) for a in sorted(head, key=key))
            body = [text(a) for a in sorted(pos, key=key)]
            body += [f"not {text(a)}" for a in sorted(neg, key=key)]
            if body:
                sep = " :- " if hs else ":- "
                lines.append(f"{hs}{sep}{', '.join(body)}.")
            else:
                lines.append(f"{hs}.")
        lines.sort()
        return lines

    def text_bytes(self) -> int:
        return sum(len(line.encode()) + 1 for line in self.rule_lines())

    def to_text(self) -> str:
        lines = self.rule_lines()
        nbytes = sum(len(line.encode()) + 1 for line in lines)
        stats = f"% stats: rules={len(self.int_rules)} atoms={len(self.universe_ids)} bytes={nbytes}"
        return "\n".join(lines + [stats]) + "\n"

    def interpretations(self, ids: Iterable[int]) -> frozenset[Atom]:
        return frozenset(self.table.atom(a) for a in ids)


class _EncodedRule:
    __slots__ = ("patterns", "pattern_sizes", "comparisons", "n_vars", "head", "pos", "neg")

    def __init__(self, rule: Rule, table: AtomTable, store: RelationStore):
        varslots: dict[str, int] = {}
        consts = table.consts
        ordered_pos = sorted(rule.body_pos, key=Atom.sort_key)
        self.patterns = [
            (store.relation(a.pred, a.arity), encode_pattern(a, consts, varslots))
            for a in ordered_pos
        ]
        self.comparisons = tuple(
            encode_comparison(c, consts, varslots) for c in rule.comparisons
        )
        self.n_vars = len(varslots)

        def enc(atoms: frozenset[Atom]) -> tuple[tuple[str, tuple[int, ...]], ...]:
            out = []
            for a in sorted(atoms, key=Atom.sort_key):
                codes = encode_pattern(a, consts, varslots)
                out.append((a.pred, codes))
            return tuple(out)

        self.head = enc(rule.head)
        self.pos = enc(rule.body_pos)
        self.neg = enc(rule.body_neg)

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(rel) for rel, _ in self.patterns)

    def instantiate(self, part, table: AtomTable, theta: tuple[int, ...]) -> tuple[int, ...]:
        out = []
        for pred, codes in part:
            args = tuple(c if c >= 0 else theta[-c - 1] for c in codes)
            out.append(table.intern(pred, args))
        return tuple(sorted(set(out)))


class _Grounder:
    def __init__(
        self,
        program: Program,
        allowed: frozenset[str] | None = None,
        deadline: float | None = None,
    ):
        self.program = program
        self.table = AtomTable()
        self.store = RelationStore(self.table.consts)
        self.deadline = deadline
        for name in sorted_constants(herbrand_universe(program)):
            self.table.consts.intern(name)
        self.allowed: bytearray | None = None
        if allowed is not None:
            bitmap = bytearray(len(self.table.consts.names))
            for name in allowed:
                bitmap[self.table.consts.ids[name]] = 1
            self.allowed = bitmap
        self.a_top: set[int] = set()
        self.a_negbot: set[int] = set()
        self.final_rules: list[IntRule] = []
        self.final_seen: set[IntRule] = set()

    def _check_deadline(self) -> None:
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise GroundingInterrupted(
                GroundProgram(self.table, self.final_rules, set(self.a_top), set(self.a_negbot))
            )

    def _emit(self, rule: IntRule) -> None:
        if rule not in self.final_seen:
            self.final_seen.add(rule)
            self.final_rules.append(rule)

    def _add_possible(self, aid: int) -> None:
        if aid not in self.a_negbot:
            self.a_negbot.add(aid)
            pred, args = self.table.keys[aid]
            self.store.relation(pred, len(args)).add(args)

    def run(self) -> GroundProgram:
        graph = build_predicate_rule_graph(self.program)
        for comp in scc_topological_order(graph):
            self._check_deadline()
            rule_idxs = sorted(n[1] for n in comp if n[0] == "rule")
            if not rule_idxs:
                continue
            comp_preds = {(n[1], n[2]) for n in comp if n[0] == "pred"}
            rules = [self.program.rules[i] for i in rule_idxs]
            if len(comp) == 1 and rules[0].is_fact:
                (atom,) = rules[0].head
                aid = self.table.intern_atom(atom)
                self.a_top.add(aid)
                self._add_possible(aid)
                self._emit(((aid,), (), ()))
                continue
            self._component(rule_idxs, rules, comp_preds)
        return GroundProgram(self.table, self.final_rules, self.a_top, self.a_negbot)

    def _component(self, rule_idxs, rules, comp_preds) -> None:
        encoded = [_EncodedRule(r, self.table, self.store) for r in rules]
        processed: list[set[tuple[int, ...]]] = [set() for _ in rules]
        last_sizes: list[tuple[int, ...] | None] = [None] * len(rules)
        # (head, pos, outer_neg, deferred_neg)
        buffer: list[tuple[tuple, tuple, tuple, tuple]] = []
        buffered: set[tuple] = set()
        changed = True
        while changed:
            changed = False
            for ri, (rule, enc) in enumerate(zip(rules, encoded)):
                sizes = enc.sizes()
                if sizes == last_sizes[ri]:
                    continue
                last_sizes[ri] = sizes
                thetas = match_patterns(
                    enc.patterns, enc.comparisons, enc.n_vars,
                    self.table.consts.ranks, self.allowed,
                )
                seen = processed[ri]
                self._check_deadline()
                for theta in thetas:
                    if theta in seen:
                        continue
                    seen.add(theta)
                    changed = True
                    head = enc.instantiate(enc.head, self.table, theta)
                    if len(head) == 1 and head[0] in self.a_top:
                        continue
                    pos = enc.instantiate(enc.pos, self.table, theta)
                    neg = enc.instantiate(enc.neg, self.table, theta)
                    outer_neg: list[int] = []
                    deferred: list[int] = []
                    dead = False
                    for b in neg:
                        pred, args = self.table.keys[b]
                        if (pred, len(args)) in comp_preds:
                            deferred.append(b)
                        elif b in self.a_top:
                            dead = True
                            break
                        elif b in self.a_negbot:
                            outer_neg.append(b)
                    if dead:
                        continue
                    pos = tuple(p for p in pos if p not in self.a_top)
                    rec = (head, pos, tuple(outer_neg), tuple(deferred))
                    if rec in buffered:
                        continue
                    buffered.add(rec)
                    buffer.append(rec)
                    for h in head:
                        self._add_possible(h)
                    if len(head) == 1 and not pos and not outer_neg and not deferred:
                        self.a_top.add(head[0])
        # Deferred negatives are decidable now: the component is complete.
        for head, pos, outer_neg, deferred in buffer:
            dead = False
            kept: list[int] = []
            for b in deferred:
                if b in self.a_top:
                    dead = True
                    break
                if b in self.a_negbot:
                    kept.append(b)
            if dead:
                continue
            neg = tuple(sorted(set(outer_neg) | set(kept)))
            self._emit((head, pos, neg))
            if len(head) == 1 and not pos and not neg:
                self.a_top.add(head[0])


def ground(program: Program, deadline: float | None = None) -> GroundProgram:
    """Bottom-up grounding over the full Herbrand universe."""
    return _Grounder(program, None, deadline).run()


def restrict_ground(
    program: Program, constants: Iterable[str], deadline: float | None = None
) -> GroundProgram:
    """Grounding with variable instantiation restricted to `constants`.

    Ground rules (facts included) survive regardless of the restriction;
    only substitutions are confined to the given set.
    """
    universe = herbrand_universe(program)
    dset = frozenset(constants)
    extra = dset - universe
    if extra:
        raise DomainError(
            f"constants outside the Herbrand universe: {', '.join(sorted(extra))}"
        )
    return _Grounder(program, dset, deadline).run()


def full_instantiation(
    program: Program, constants: Iterable[str], table: AtomTable | None = None
) -> GroundProgram:
    """P|_D: every rule under every total assignment V(r) -> D.

    Comparison literals are evaluated (false drops the instance, true
    disappears); no other simplification.  Duplicate instances are kept.
    Passing a shared `table` makes atom ids comparable across groundings.
    """
    if table is None:
        table = AtomTable()
    consts = table.consts
    for name in sorted_constants(set(constants) | herbrand_universe(program)):
        consts.intern(name)
    domain = [consts.ids[name] for name in sorted_constants(set(constants))]
    rules_out: list[IntRule] = []
    for rule in program.rules:
        varslots: dict[str, int] = {}
        head_enc = [(a.pred, encode_pattern(a, consts, varslots)) for a in sorted(rule.head, key=Atom.sort_key)]
        pos_enc = [(a.pred, encode_pattern(a, consts, varslots)) for a in sorted(rule.body_pos, key=Atom.sort_key)]
        neg_enc = [(a.pred, encode_pattern(a, consts, varslots)) for a in sorted(rule.body_neg, key=Atom.sort_key)]
        cmp_enc = [encode_comparison(c, consts, varslots) for c in rule.comparisons]
        n = len(varslots)
        ranks = consts.ranks

        def holds(op: int, x: int, y: int) -> bool:
            if op == 0:
                return x == y
            if op == 1:
                return x != y
            if op == 2:
                return x < y
            if op == 3:
                return x <= y
            if op == 4:
                return x > y
            return x >= y

        for theta in product(domain, repeat=n):
            ok = True
            for op, a, b in cmp_enc:
                left = ranks[theta[-a - 1] if a < 0 else a]
                right = ranks[theta[-b - 1] if b < 0 else b]
                if not holds(op, left, right):
                    ok = False
                    break
            if not ok:
                continue

            def inst(part) -> tuple[int, ...]:
                out = set()
                for pred, codes in part:
                    args = tuple(c if c >= 0 else theta[-c - 1] for c in codes)
                    out.add(table.intern(pred, args))
                return tuple(sorted(out))

            rules_out.append((inst(head_enc), inst(pos_enc), inst(neg_enc)))
    return GroundProgram(table, rules_out)


def substitute(rule: Rule, sub: Substitution) -> Rule:
    """Apply a substitution to every atom part of a rule."""
    return Rule(
        frozenset(sub.apply_atom(a) for a in rule.head),
        frozenset(sub.apply_atom(a) for a in rule.body_pos),
        frozenset(sub.apply_atom(a) for a in rule.body_neg),
        tuple(
            type(c)(sub.apply(c.left), c.op, sub.apply(c.right)) for c in rule.comparisons
        ),
    )
