# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled match executor; the hot twin of `_matchpure`.

Consumes the same query plan and must produce identical output in
identical order.  Candidate rows are read from each relation's flat
buffer instead of boxed tuples.
"""

from cpython.list cimport PyList_Append
from libc.stdlib cimport free, malloc

cdef int OP_CHECK = 1
cdef int OP_ASSIGN = 2


cdef inline bint _cmp_holds(long op, long left, long right) nogil:
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


cdef class _Step:
    cdef long[::1] flat
    cdef object index          # dict key -> array('l') of row ids, or None
    cdef object key_codes      # tuple of codes for the lookup key
    cdef long n_rows
    cdef long arity
    cdef long n_ops
    cdef long n_cmps
    cdef long *ops             # (op, pos, slot) triples
    cdef long *cmps            # (op, a, b) triples

    def __cinit__(self, rows, flat, arity, index, key_codes, ops, cmps):
        cdef long i
        self.flat = flat if len(flat) else None
        self.index = index
        self.key_codes = key_codes
        self.n_rows = len(rows)
        self.arity = arity
        self.n_ops = len(ops)
        self.n_cmps = len(cmps)
        self.ops = <long *> malloc(3 * max(self.n_ops, 1) * sizeof(long))
        self.cmps = <long *> malloc(3 * max(self.n_cmps, 1) * sizeof(long))
        for i in range(self.n_ops):
            self.ops[3 * i] = ops[i][0]
            self.ops[3 * i + 1] = ops[i][1]
            self.ops[3 * i + 2] = ops[i][2]
        for i in range(self.n_cmps):
            self.cmps[3 * i] = cmps[i][0]
            self.cmps[3 * i + 1] = cmps[i][1]
            self.cmps[3 * i + 2] = cmps[i][2]

    def __dealloc__(self):
        free(self.ops)
        free(self.cmps)


def execute_plan(steps, pre_cmps, n_vars, ranks, allowed):
    cdef long[::1] rank_view = ranks if len(ranks) else None
    cdef long op, a, b, left, right
    for op, a, b in pre_cmps:
        left = rank_view[a]
        right = rank_view[b]
        if not _cmp_holds(op, left, right):
            return []
    cdef list out = []
    cdef long nv = n_vars
    cdef long *binding = <long *> malloc(max(nv, 1) * sizeof(long))
    cdef long i
    for i in range(nv):
        binding[i] = -1
    cdef list csteps = [
        _Step(rows, flat, arity, index, key_codes, ops, cmps)
        for rows, flat, arity, index, key_codes, ops, cmps in steps
    ]
    cdef const unsigned char[::1] allowed_view = allowed if allowed is not None else None
    cdef bint restrict = allowed is not None
    try:
        _descend(csteps, 0, len(csteps), binding, nv, rank_view, allowed_view, restrict, out)
    finally:
        free(binding)
    return out


cdef int _descend(list steps, long depth, long n_steps, long *binding, long nv,
                  long[::1] ranks, const unsigned char[::1] allowed, bint restrict,
                  list out) except -1:
    if depth == n_steps:
        PyList_Append(out, tuple([binding[i] for i in range(nv)]))
        return 0
    cdef _Step step = <_Step> steps[depth]
    cdef object bucket
    cdef long[::1] bucket_view = None
    cdef long n_cands
    cdef bint full_scan = step.index is None
    cdef long code
    if full_scan:
        n_cands = step.n_rows
    else:
        bucket = (<dict> step.index).get(
            tuple([binding[-code - 1] if code < 0 else code for code in step.key_codes])
        )
        if bucket is None:
            return 0
        bucket_view = bucket
        n_cands = bucket_view.shape[0]
    cdef long ci, rid, base, j, op, pos, slot, value, left, right
    cdef bint ok
    cdef long n_assigned
    for ci in range(n_cands):
        rid = ci if full_scan else bucket_view[ci]
        base = rid * step.arity
        ok = True
        n_assigned = 0
        for j in range(step.n_ops):
            op = step.ops[3 * j]
            pos = step.ops[3 * j + 1]
            slot = step.ops[3 * j + 2]
            value = step.flat[base + pos]
            if op == OP_ASSIGN:
                if restrict and not allowed[value]:
                    ok = False
                    break
                binding[slot] = value
                n_assigned += 1
            elif binding[slot] != value:
                ok = False
                break
        if ok:
            for j in range(step.n_cmps):
                op = step.cmps[3 * j]
                left = step.cmps[3 * j + 1]
                right = step.cmps[3 * j + 2]
                left = ranks[binding[-left - 1]] if left < 0 else ranks[left]
                right = ranks[binding[-right - 1]] if right < 0 else ranks[right]
                if not _cmp_holds(op, left, right):
                    ok = False
                    break
        if ok:
            _descend(steps, depth + 1, n_steps, binding, nv, ranks, allowed, restrict, out)
        if n_assigned:
            for j in range(step.n_ops):
                if step.ops[3 * j] == OP_ASSIGN:
                    binding[step.ops[3 * j + 2]] = -1
                    n_assigned -= 1
                    if n_assigned == 0:
                        break
    return 0
