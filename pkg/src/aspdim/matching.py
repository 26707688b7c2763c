"""Substitution matching: the join at the heart of grounding.

`good_matches(B, D)` enumerates exactly the total assignments over V(B)
that map every atom of B into D.  The inner enumeration loop is the hot
path of grounding, so it exists twice: a pure-Python executor in
`_matchpure` and a compiled twin in `_matchcore` (Cython), selected at
import.  Both consume the same query plan and produce identical output,
in identical order.

Plan encoding shared by both executors: argument codes are constant ids
(>= 0) or variable slots (code = -slot - 1).  Each join step carries the
candidate row ids, per-position ops (assign a fresh variable / check an
already-bound one), and the comparisons that become ground at that step.
"""
from __future__ import annotations

import os
from array import array
from typing import Iterable, Mapping, Sequence

from .syntax import Atom, Comparison, Term, constant_sort_key

OP_CHECK = 1  # position must equal the value already bound to a variable
OP_ASSIGN = 2  # position binds a fresh variable

CMP_CODES = {"=": 0, "!=": 1, "<": 2, "<=": 3, ">": 4, ">=": 5}

def _load_engine(name: str):
    if name == "pure":
        from . import _matchpure

        return _matchpure.execute_plan, "pure"
    from . import _matchcore  # type: ignore[attr-defined]

    return _matchcore.execute_plan, "compiled"


def _pick_engine():
    forced = os.environ.get("ASPDIM_ENGINE", "").strip().lower()
    if forced in ("pure", "compiled"):
        try:
            return _load_engine(forced)
        except ImportError:
            if forced == "compiled":
                raise
    try:
        return _load_engine("compiled")
    except ImportError:
        return _load_engine("pure")


_execute_plan, _engine_name = _pick_engine()


def engine_name() -> str:
    """Which match executor is active: "compiled" or "pure"."""
    return _engine_name


def set_engine(name: str) -> str:
    """Force the match executor; returns the previous engine name."""
    global _execute_plan, _engine_name
    previous = _engine_name
    _execute_plan, _engine_name = _load_engine(name)
    return previous


class ConstTable:
    """Interns constant names as dense ids with a comparison-rank array."""

    def __init__(self):
        self.ids: dict[str, int] = {}
        self.names: list[str] = []
        self.ranks = array("l")

    def intern(self, name: str) -> int:
        cid = self.ids.get(name)
        if cid is None:
            cid = len(self.names)
            self.ids[name] = cid
            self.names.append(name)
            # Dense rank over the key space; equal keys (e.g. 007 vs 7) share a rank.
            self.ranks.append(0)
            self._rerank()
        return cid

    def _rerank(self) -> None:
        order = sorted(range(len(self.names)), key=lambda i: constant_sort_key(self.names[i]))
        rank = 0
        prev_key = None
        for i in order:
            key = constant_sort_key(self.names[i])
            if key != prev_key:
                if prev_key is not None:
                    rank += 1
                prev_key = key
            self.ranks[i] = rank


class Relation:
    """Ground tuples of one predicate with lazily built hash indexes."""

    __slots__ = ("arity", "rows", "rowset", "flat", "_indexes", "_indexed_upto")

    def __init__(self, arity: int):
        self.arity = arity
        self.rows: list[tuple[int, ...]] = []
        self.rowset: set[tuple[int, ...]] = set()
        self.flat = array("l")
        self._indexes: dict[tuple[int, ...], dict[tuple[int, ...], array]] = {}
        self._indexed_upto: dict[tuple[int, ...], int] = {}

    def __len__(self) -> int:
        return len(self.rows)

    def add(self, row: tuple[int, ...]) -> bool:
        if row in self.rowset:
            return False
        self.rows.append(row)
        self.rowset.add(row)
        self.flat.extend(row)
        return True

    def index_for(self, mask: tuple[int, ...]) -> dict[tuple[int, ...], array]:
        index = self._indexes.setdefault(mask, {})
        upto = self._indexed_upto.get(mask, 0)
        if upto < len(self.rows):
            for rid in range(upto, len(self.rows)):
                row = self.rows[rid]
                key = tuple(row[p] for p in mask)
                bucket = index.get(key)
                if bucket is None:
                    index[key] = bucket = array("l")
                bucket.append(rid)
            self._indexed_upto[mask] = len(self.rows)
        return index


class RelationStore:
    """Per-predicate relations plus the constant table."""

    def __init__(self, consts: ConstTable | None = None):
        self.consts = consts if consts is not None else ConstTable()
        self.relations: dict[tuple[str, int], Relation] = {}

    def relation(self, pred: str, arity: int) -> Relation:
        rel = self.relations.get((pred, arity))
        if rel is None:
            rel = self.relations[(pred, arity)] = Relation(arity)
        return rel

    def add_atom(self, atom: Atom) -> None:
        row = tuple(self.consts.intern(t.name) for t in atom.args)
        self.relation(atom.pred, atom.arity).add(row)


def encode_pattern(atom: Atom, consts: ConstTable, varslots: dict[str, int]) -> tuple[int, ...]:
    codes = []
    for term in atom.args:
        if term.is_variable:
            slot = varslots.setdefault(term.name, len(varslots))
            codes.append(-slot - 1)
        else:
            codes.append(consts.intern(term.name))
    return tuple(codes)


def encode_comparison(cmp_: Comparison, consts: ConstTable, varslots: Mapping[str, int]) -> tuple[int, int, int]:
    def code(term: Term) -> int:
        if term.is_variable:
            return -varslots[term.name] - 1
        return consts.intern(term.name)

    return (CMP_CODES[cmp_.op], code(cmp_.left), code(cmp_.right))


def _cmp_vars(codes: tuple[int, int, int]) -> set[int]:
    return {-c - 1 for c in codes[1:] if c < 0}


def build_plan(
    patterns: Sequence[tuple[Relation, tuple[int, ...]]],
    comparisons: Sequence[tuple[int, int, int]],
    n_vars: int,
):
    """Greedy join plan: most-bound pattern first, small relations break ties.

    Returns (pre_comparisons, steps); each step is
    (rows, flat, arity, index_or_None, key_codes, ops, step_comparisons).
    """
    remaining = list(range(len(patterns)))
    bound: set[int] = set()
    pending_cmps = [c for c in comparisons if _cmp_vars(c)]
    pre_cmps = tuple(c for c in comparisons if not _cmp_vars(c))
    steps = []
    while remaining:
        best = None
        best_key = None
        for idx in remaining:
            rel, codes = patterns[idx]
            known = [
                pos for pos, c in enumerate(codes) if c >= 0 or (-c - 1) in bound
            ]
            unbound = len(codes) - len(known)
            # Estimated candidates per lookup: distinct-key counts from the
            # (lazily built, reused at execution) index.
            if unbound == 0 and codes:
                est = 0.0
            elif known:
                index = rel.index_for(tuple(known))
                est = len(rel.rows) / max(1, len(index))
            else:
                est = float(len(rel.rows))
            key = (est, unbound, idx)
            if best_key is None or key < best_key:
                best_key = key
                best = idx
        remaining.remove(best)
        rel, codes = patterns[best]
        mask = []
        key_codes = []
        ops = []
        seen_here: set[int] = set()
        for pos, code in enumerate(codes):
            if code >= 0:
                mask.append(pos)
                key_codes.append(code)
            else:
                slot = -code - 1
                if slot in bound:
                    mask.append(pos)
                    key_codes.append(code)
                elif slot in seen_here:
                    ops.append((OP_CHECK, pos, slot))
                else:
                    ops.append((OP_ASSIGN, pos, slot))
                    seen_here.add(slot)
        bound |= seen_here
        ready = tuple(c for c in pending_cmps if _cmp_vars(c) <= bound)
        pending_cmps = [c for c in pending_cmps if c not in ready]
        index = rel.index_for(tuple(mask)) if mask else None
        steps.append((rel.rows, rel.flat, rel.arity, index, tuple(key_codes), tuple(ops), ready))
    if pending_cmps:
        raise ValueError("comparison variable not bound by any pattern")
    return pre_cmps, steps


def match_patterns(
    patterns: Sequence[tuple[Relation, tuple[int, ...]]],
    comparisons: Sequence[tuple[int, int, int]],
    n_vars: int,
    ranks: array,
    allowed: bytearray | None = None,
) -> list[tuple[int, ...]]:
    """All substitutions (tuples of const ids, one per slot) matching the body.

    `allowed` is an optional bitmap over constant ids restricting what a
    variable may be bound to (Restrict-Grounding).
    """
    pre_cmps, steps = build_plan(patterns, comparisons, n_vars)
    return _execute_plan(steps, pre_cmps, n_vars, ranks, allowed)


class Substitution(dict):
    """Total assignment from variables to constant names."""

    def apply(self, term: Term) -> Term:
        if term.is_variable and term.name in self:
            return Term(self[term.name])
        return term

    def apply_atom(self, atom: Atom) -> Atom:
        return Atom(atom.pred, tuple(self.apply(t) for t in atom.args))


def good_matches(body: Iterable[Atom], domain: Iterable[Atom]) -> set[tuple[tuple[str, str], ...]]:
    """The set Θ(B, D): minimal matches of B into D.

    Each match is returned as a sorted tuple of (variable, constant)
    pairs; minimality makes the assignment total over V(B) and nothing
    more.  An empty B yields the single empty substitution.
    """
    store = RelationStore()
    for atom in domain:
        store.add_atom(atom)
    varslots: dict[str, int] = {}
    patterns = []
    for atom in body:
        codes = encode_pattern(atom, store.consts, varslots)
        patterns.append((store.relation(atom.pred, atom.arity), codes))
    names = {slot: name for name, slot in varslots.items()}
    results = match_patterns(patterns, (), len(varslots), store.consts.ranks)
    out = set()
    for row in results:
        out.add(tuple(sorted((names[i], store.consts.names[row[i]]) for i in range(len(row)))))
    return out


def substitutions(body: Iterable[Atom], domain: Iterable[Atom]) -> list[Substitution]:
    """`good_matches` as Substitution objects."""
    return [Substitution(pairs) for pairs in sorted(good_matches(body, domain))]
