"""Pure-Python match executor; the fallback twin of `_matchcore`.

Must enumerate exactly the same substitutions in exactly the same order
as the compiled kernel.
"""
from __future__ import annotations

OP_CHECK = 1
OP_ASSIGN = 2

_EMPTY = ()


def _cmp_holds(op: int, left: int, right: int) -> bool:
    if op == 0:
        return left == right
    if op == 1:
        return left != right
    if op == 2:
        return left < right
    if op == 3:
        return left <= right
    if op == 4:
        return left > right
    return left >= right


def execute_plan(steps, pre_cmps, n_vars, ranks, allowed):
    binding = [-1] * n_vars
    for op, a, b in pre_cmps:
        left = ranks[binding[-a - 1]] if a < 0 else ranks[a]
        right = ranks[binding[-b - 1]] if b < 0 else ranks[b]
        if not _cmp_holds(op, left, right):
            return []
    out: list[tuple[int, ...]] = []
    n_steps = len(steps)

    def descend(depth: int) -> None:
        if depth == n_steps:
            out.append(tuple(binding))
            return
        rows, _flat, _arity, index, key_codes, ops, cmps = steps[depth]
        if index is None:
            candidates = range(len(rows))
        else:
            key = tuple(binding[-c - 1] if c < 0 else c for c in key_codes)
            bucket = index.get(key)
            if bucket is None:
                return
            candidates = bucket
        for rid in candidates:
            row = rows[rid]
            ok = True
            n_assigned = 0
            for op, pos, slot in ops:
                value = row[pos]
                if op == OP_ASSIGN:
                    if allowed is not None and not allowed[value]:
                        ok = False
                        break
                    binding[slot] = value
                    n_assigned += 1
                elif binding[slot] != value:
                    ok = False
                    break
            if ok:
                for op, a, b in cmps:
                    left = ranks[binding[-a - 1]] if a < 0 else ranks[a]
                    right = ranks[binding[-b - 1]] if b < 0 else ranks[b]
                    if not _cmp_holds(op, left, right):
                        ok = False
                        break
            if ok:
                descend(depth + 1)
            if n_assigned:
                for op, _pos, slot in ops:
                    if op == OP_ASSIGN:
                        binding[slot] = -1
                        n_assigned -= 1
                        if not n_assigned:
                            break

    descend(0)
    return out
