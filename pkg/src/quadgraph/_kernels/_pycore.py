"""Pure-Python kernels: successor tables and functional-graph decomposition.

Same contract as the compiled core in ``_core.pyx``; selected at import time
when the extension is unavailable.  Correct for any q the memory allows, just
slower (see benchmarks/bench_kernels.py).
"""

from __future__ import annotations

from array import array

import numpy as np

BACKEND_NAME = "python"


def build_successors(q: int, a: int, c: int, b: int) -> np.ndarray:
    """Successor table of (x, y) -> (c(a+1)x^2 + c(a-1)b y^2, 2c a xy) mod q.

    States are indexed x*q + y; the returned array has length q*q.
    """
    a %= q
    c %= q
    b %= q
    a1 = c * (a + 1) % q
    a2 = c * (a - 1) % q * b % q
    a3 = 2 * c * a % q
    a2y2 = [a2 * (y * y % q) % q for y in range(q)]
    succ = array("q", bytes(8 * q * q))
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
    return np.frombuffer(succ, dtype=np.int64).copy()


def decompose_successors(succ) -> tuple[list, np.ndarray, list, list]:
    """Decompose a successor table into cycles, components and tree shapes.

    Returns (cycles, component_of, root_shapes, shape_children):
      cycles: one int64 array per cycle, nodes in successor order;
      component_of: component id per node (ids follow cycle discovery order);
      root_shapes: per cycle, the shape id of the tree hanging at each cycle
        node (aligned with the cycle array);
      shape_children: shape id -> sorted tuple of child shape ids, with id 0
        reserved for the leaf.

    Cycle detection is an iterative white/gray/black sweep over the successor
    array (single O(n) pass, no recursion); tree shapes are interned bottom-up
    over the reversed edges restricted to non-periodic nodes.
    """
    succ = [int(v) for v in succ]
    n = len(succ)
    color = bytearray(n)  # 0 white, 1 gray, 2 black
    periodic = bytearray(n)
    comp = array("q", bytes(8 * n))
    for i in range(n):
        comp[i] = -1
    cycles: list[list[int]] = []

    for v0 in range(n):
        if color[v0]:
            continue
        path: list[int] = []
        v = v0
        while color[v] == 0:
            color[v] = 1
            path.append(v)
            v = succ[v]
        if color[v] == 1:
            j = len(path) - 1
            while path[j] != v:
                j -= 1
            cid = len(cycles)
            cyc = path[j:]
            for u in cyc:
                periodic[u] = 1
                comp[u] = cid
            cycles.append(cyc)
        for u in path:
            color[u] = 2

    for v0 in range(n):
        if comp[v0] != -1:
            continue
        path = []
        v = v0
        while comp[v] == -1:
            path.append(v)
            v = succ[v]
        cid = comp[v]
        for u in path:
            comp[u] = cid

    # reversed adjacency over non-periodic sources, CSR layout
    off = array("q", bytes(8 * (n + 1)))
    for v in range(n):
        if not periodic[v]:
            off[succ[v] + 1] += 1
    for i in range(n):
        off[i + 1] += off[i]
    entries = array("q", bytes(8 * off[n]))
    cursor = array("q", off[:n])
    for v in range(n):
        if not periodic[v]:
            u = succ[v]
            entries[cursor[u]] = v
            cursor[u] += 1

    # leaves-first shape interning over the non-periodic forest
    shape_children: list[tuple[int, ...]] = [()]
    table: dict[tuple[int, ...], int] = {(): 0}
    shape_id = array("q", bytes(8 * n))
    pending = array("q", bytes(8 * n))
    stack: list[int] = []
    for v in range(n):
        if periodic[v]:
            continue
        pending[v] = off[v + 1] - off[v]
        if pending[v] == 0:
            stack.append(v)
    processed = 0
    while stack:
        v = stack.pop()
        processed += 1
        lo, hi = off[v], off[v + 1]
        if lo == hi:
            sid = 0
        else:
            key = tuple(sorted(shape_id[entries[i]] for i in range(lo, hi)))
            sid = table.get(key, -1)
            if sid < 0:
                sid = len(shape_children)
                table[key] = sid
                shape_children.append(key)
        shape_id[v] = sid
        u = succ[v]
        if not periodic[u]:
            pending[u] -= 1
            if pending[u] == 0:
                stack.append(u)
    if processed != n - sum(len(c) for c in cycles):
        raise AssertionError("non-periodic subgraph is not a forest")

    root_shapes = []
    for cyc in cycles:
        roots = array("q", bytes(8 * len(cyc)))
        for i, p in enumerate(cyc):
            lo, hi = off[p], off[p + 1]
            if lo == hi:
                sid = 0
            else:
                key = tuple(sorted(shape_id[entries[k]] for k in range(lo, hi)))
                sid = table.get(key, -1)
                if sid < 0:
                    sid = len(shape_children)
                    table[key] = sid
                    shape_children.append(key)
            roots[i] = sid
        root_shapes.append(np.frombuffer(roots, dtype=np.int64).copy())

    cycles_np = [np.array(c, dtype=np.int64) for c in cycles]
    comp_np = np.frombuffer(comp, dtype=np.int64).copy()
    return cycles_np, comp_np, root_shapes, shape_children
