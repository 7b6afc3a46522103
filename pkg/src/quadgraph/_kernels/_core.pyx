# cython: language_level=3
# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: successor tables and functional-graph decomposition.

Mirrors ``_pycore`` exactly; the hot loops (table build, cycle coloring,
reversed-edge CSR, bottom-up shape interning) run over typed buffers.
"""

import numpy as np

from libc.stdint cimport int64_t, int8_t

BACKEND_NAME = "compiled"


def build_successors(int64_t q, int64_t a, int64_t c, int64_t b):
    """Successor table of (x, y) -> (c(a+1)x^2 + c(a-1)b y^2, 2c a xy) mod q."""
    cdef int64_t a1, a2, a3, x, y, x2, t1, ax, fy, fx, base
    a = a % q
    c = c % q
    b = b % q
    a1 = c * (a + 1) % q
    a2 = c * (a - 1) % q * b % q
    a3 = 2 * c % q * a % q
    succ_arr = np.empty(q * q, dtype=np.int64)
    a2y2_arr = np.empty(q, dtype=np.int64)
    cdef int64_t[::1] succ = succ_arr
    cdef int64_t[::1] a2y2 = a2y2_arr
    # operands stay below q < 2**31, so every product fits in int64
    for y in range(q):
        a2y2[y] = a2 * (y * y % q) % q
    for x in range(q):
        t1 = a1 * (x * x % q) % q
        ax = a3 * x % q
        fy = 0
        base = x * q
        for y in range(q):
            fx = t1 + a2y2[y]
            if fx >= q:
                fx -= q
            succ[base + y] = fx * q + fy
            fy += ax
            if fy >= q:
                fy -= q
    return succ_arr


def decompose_successors(succ_in):
    """Decompose a successor table; see ``_pycore.decompose_successors``."""
    succ_arr = np.ascontiguousarray(succ_in, dtype=np.int64)
    cdef int64_t[::1] succ = succ_arr
    cdef Py_ssize_t n = succ.shape[0]

    color_arr = np.zeros(n, dtype=np.int8)
    periodic_arr = np.zeros(n, dtype=np.int8)
    comp_arr = np.full(n, -1, dtype=np.int64)
    path_arr = np.empty(n, dtype=np.int64)
    cdef int8_t[::1] color = color_arr
    cdef int8_t[::1] periodic = periodic_arr
    cdef int64_t[::1] comp = comp_arr
    cdef int64_t[::1] path = path_arr

    cycles = []
    cdef Py_ssize_t v0, plen, i, j
    cdef int64_t v, u, cid

    for v0 in range(n):
        if color[v0] != 0:
            continue
        plen = 0
        v = v0
        while color[v] == 0:
            color[v] = 1
            path[plen] = v
            plen += 1
            v = succ[v]
        if color[v] == 1:
            j = plen - 1
            while path[j] != v:
                j -= 1
            cid = len(cycles)
            for i in range(j, plen):
                periodic[path[i]] = 1
                comp[path[i]] = cid
            cycles.append(path_arr[j:plen].copy())
        for i in range(plen):
            color[path[i]] = 2

    for v0 in range(n):
        if comp[v0] != -1:
            continue
        plen = 0
        v = v0
        while comp[v] == -1:
            path[plen] = v
            plen += 1
            v = succ[v]
        cid = comp[v]
        for i in range(plen):
            comp[path[i]] = cid

    # reversed adjacency over non-periodic sources, CSR layout
    off_arr = np.zeros(n + 1, dtype=np.int64)
    cdef int64_t[::1] off = off_arr
    for v in range(n):
        if periodic[v] == 0:
            off[succ[v] + 1] += 1
    for i in range(n):
        off[i + 1] += off[i]
    entries_arr = np.empty(off[n], dtype=np.int64)
    cursor_arr = off_arr[:n].copy()
    cdef int64_t[::1] entries = entries_arr
    cdef int64_t[::1] cursor = cursor_arr
    for v in range(n):
        if periodic[v] == 0:
            u = succ[v]
            entries[cursor[u]] = v
            cursor[u] += 1

    # leaves-first shape interning over the non-periodic forest
    shape_children = [()]
    table = {(): 0}
    shape_id_arr = np.empty(n, dtype=np.int64)
    pending_arr = np.zeros(n, dtype=np.int64)
    stack_arr = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] shape_id = shape_id_arr
    cdef int64_t[::1] pending = pending_arr
    cdef int64_t[::1] stack = stack_arr
    cdef Py_ssize_t sp = 0, processed = 0, n_periodic = 0
    cdef int64_t lo, hi, sid
    for v in range(n):
        if periodic[v]:
            n_periodic += 1
            continue
        pending[v] = off[v + 1] - off[v]
        if pending[v] == 0:
            stack[sp] = v
            sp += 1
    while sp > 0:
        sp -= 1
        v = stack[sp]
        processed += 1
        lo = off[v]
        hi = off[v + 1]
        if lo == hi:
            sid = 0
        else:
            key = tuple(sorted([shape_id[entries[i]] for i in range(lo, hi)]))
            cached = table.get(key)
            if cached is None:
                sid = len(shape_children)
                table[key] = sid
                shape_children.append(key)
            else:
                sid = cached
        shape_id[v] = sid
        u = succ[v]
        if periodic[u] == 0:
            pending[u] -= 1
            if pending[u] == 0:
                stack[sp] = u
                sp += 1
    if processed != n - n_periodic:
        raise AssertionError("non-periodic subgraph is not a forest")

    root_shapes = []
    for cyc in cycles:
        roots_arr = np.empty(len(cyc), dtype=np.int64)
        roots_view = roots_arr
        for i in range(len(cyc)):
            v = cyc[i]
            lo = off[v]
            hi = off[v + 1]
            if lo == hi:
                sid = 0
            else:
                key = tuple(sorted([shape_id[entries[k]] for k in range(lo, hi)]))
                cached = table.get(key)
                if cached is None:
                    sid = len(shape_children)
                    table[key] = sid
                    shape_children.append(key)
                else:
                    sid = cached
            roots_view[i] = sid
        root_shapes.append(roots_arr)

    return cycles, comp_arr, root_shapes, shape_children
