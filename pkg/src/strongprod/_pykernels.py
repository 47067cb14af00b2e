"""Pure-Python kernels; reference twin of the compiled ``_kernels`` module.

Both modules expose the same five functions with the same deterministic
results. Graphs arrive in CSR form (``indptr``, ``indices``; int64 arrays).
``deadline`` is an absolute :func:`time.perf_counter` value, ``inf`` for none.
"""

from __future__ import annotations

import sys
from time import perf_counter

import numpy as np

from .errors import BudgetExceeded

BACKEND = "python"

_CHECK_EVERY = 4096


def _adjacency(indptr, indices) -> list[list[int]]:
    ptr = indptr.tolist() if hasattr(indptr, "tolist") else list(indptr)
    idx = indices.tolist() if hasattr(indices, "tolist") else list(indices)
    return [idx[ptr[v]:ptr[v + 1]] for v in range(len(ptr) - 1)]


def _find(parent: list[int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def slot_components(indptr, indices, cptr, cols):
    """Monochromatic components of a set-valued colouring.

    A *slot* is one (vertex, colour) incidence, slots of vertex ``v`` being
    ``cptr[v]:cptr[v+1]`` with sorted colours ``cols``. Two slots are joined
    when their vertices are adjacent and the colours agree. Returns
    ``(label, degree)`` per slot: ``label`` is the smallest slot index of the
    component, ``degree`` the monochromatic degree of that incidence.
    """
    adj = _adjacency(indptr, indices)
    cp = cptr.tolist() if hasattr(cptr, "tolist") else list(cptr)
    cl = cols.tolist() if hasattr(cols, "tolist") else list(cols)
    nslots = cp[-1]
    parent = list(range(nslots))
    degree = [0] * nslots
    for v, nbrs in enumerate(adj):
        a0, a1 = cp[v], cp[v + 1]
        for w in nbrs:
            if w <= v:
                continue
            i, j = a0, cp[w]
            b1 = cp[w + 1]
            while i < a1 and j < b1:
                ci, cj = cl[i], cl[j]
                if ci == cj:
                    degree[i] += 1
                    degree[j] += 1
                    ri, rj = _find(parent, i), _find(parent, j)
                    if ri < rj:
                        parent[rj] = ri
                    elif rj < ri:
                        parent[ri] = rj
                    i += 1
                    j += 1
                elif ci < cj:
                    i += 1
                else:
                    j += 1
    labels = [_find(parent, s) for s in range(nslots)]
    return np.asarray(labels, dtype=np.int64), np.asarray(degree, dtype=np.int64)


def mask_components(indptr, indices, mask):
    """Component labels of the subgraph induced by ``mask``.

    Vertices outside the mask get ``-1``; inside, the label is the smallest
    vertex id of the component.
    """
    adj = _adjacency(indptr, indices)
    inside = [bool(b) for b in (mask.tolist() if hasattr(mask, "tolist") else mask)]
    parent = list(range(len(adj)))
    for v, nbrs in enumerate(adj):
        if not inside[v]:
            continue
        for w in nbrs:
            if w > v and inside[w]:
                rv, rw = _find(parent, v), _find(parent, w)
                if rv < rw:
                    parent[rw] = rv
                elif rw < rv:
                    parent[rv] = rw
    labels = [_find(parent, v) if inside[v] else -1 for v in range(len(adj))]
    return np.asarray(labels, dtype=np.int64)


class _Clock:
    __slots__ = ("deadline", "ticks")

    def __init__(self, deadline: float) -> None:
        self.deadline = deadline
        self.ticks = 0

    def tick(self) -> None:
        self.ticks += 1
        if self.ticks % _CHECK_EVERY == 0 and perf_counter() > self.deadline:
            raise BudgetExceeded("time limit reached")


def max_clique(indptr, indices, deadline=float("inf")):
    """A maximum clique by bitset branch and bound with greedy-colour bounds."""
    adj = _adjacency(indptr, indices)
    n = len(adj)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    nbr = [0] * n
    for v, ws in enumerate(adj):
        m = 0
        for w in ws:
            m |= 1 << w
        nbr[v] = m
    best: list[int] = []
    current: list[int] = []
    clock = _Clock(deadline)

    def colour_sort(P: int):
        order, bounds = [], []
        colour = 0
        U = P
        while U:
            colour += 1
            Q = U
            while Q:
                low = Q & -Q
                v = low.bit_length() - 1
                Q &= ~nbr[v] & ~low
                U &= ~low
                order.append(v)
                bounds.append(colour)
        return order, bounds

    def expand(P: int) -> None:
        order, bounds = colour_sort(P)
        for idx in range(len(order) - 1, -1, -1):
            clock.tick()
            if len(current) + bounds[idx] <= len(best):
                return
            v = order[idx]
            newP = P & nbr[v]
            current.append(v)
            if newP:
                expand(newP)
            elif len(current) > len(best):
                best[:] = current
            current.pop()
            P &= ~(1 << v)

    expand((1 << n) - 1)
    return np.asarray(sorted(best), dtype=np.int64)


def _dsatur_pick(n, colors, sat, degree):
    best_v, best_s, best_d = -1, -1, -1
    for v in range(n):
        if colors[v] < 0:
            s = sat[v]
            if s > best_s or (s == best_s and degree[v] > best_d):
                best_v, best_s, best_d = v, s, degree[v]
    return best_v


def exact_coloring(indptr, indices, clique, lower, deadline=float("inf")):
    """An optimal proper colouring (exact DSATUR branch and bound).

    ``clique`` is precoloured ``0..len-1``; the search stops as soon as it
    meets ``lower`` colours, which must be a valid lower bound.
    """
    adj = _adjacency(indptr, indices)
    n = len(adj)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    degree = [len(a) for a in adj]
    clique = [int(v) for v in clique]
    lower = max(int(lower), len(clique), 1)
    clock = _Clock(deadline)

    # greedy DSATUR for the first upper bound
    colors = [-1] * n
    cnt = [[0] * (n + 1) for _ in range(n)]
    sat = [0] * n

    def assign(v, c):
        colors[v] = c
        for w in adj[v]:
            row = cnt[w]
            if row[c] == 0:
                sat[w] += 1
            row[c] += 1

    def unassign(v, c):
        colors[v] = -1
        for w in adj[v]:
            row = cnt[w]
            row[c] -= 1
            if row[c] == 0:
                sat[w] -= 1

    for i, v in enumerate(clique):
        assign(v, i)
    used = len(clique)
    for _ in range(n - len(clique)):
        v = _dsatur_pick(n, colors, sat, degree)
        row = cnt[v]
        c = 0
        while row[c]:
            c += 1
        assign(v, c)
        used = max(used, c + 1)
    best = list(colors)
    ub = used
    if ub <= lower:
        return np.asarray(best, dtype=np.int64)

    for v in range(n):
        if colors[v] >= 0:
            unassign(v, colors[v])
    for i, v in enumerate(clique):
        assign(v, i)

    state = {"ub": ub, "best": best}
    limit = sys.getrecursionlimit()
    if limit < n + 100:
        sys.setrecursionlimit(n + 100)

    def search(ncol: int, used: int) -> bool:
        clock.tick()
        if used >= state["ub"]:
            return False
        if ncol == n:
            state["ub"] = used
            state["best"] = list(colors)
            return used <= lower
        v = _dsatur_pick(n, colors, sat, degree)
        row = cnt[v]
        for c in range(used):
            if row[c] == 0:
                assign(v, c)
                done = search(ncol + 1, used)
                unassign(v, c)
                if done:
                    return True
                if used >= state["ub"]:
                    return False
        if used + 1 < state["ub"]:
            assign(v, used)
            done = search(ncol + 1, used + 1)
            unassign(v, used)
            if done:
                return True
        return False

    search(len(clique), len(clique))
    return np.asarray(state["best"], dtype=np.int64)


def clustered_search(indptr, indices, order, k, c, deadline=float("inf")):
    """A ``k``-colouring with clustering at most ``c``, or ``None``.

    Vertices are coloured in ``order``; a colour is rejected when it would
    merge monochromatic components into one of more than ``c`` vertices.
    Colour ``j`` is only tried once colours ``0..j-1`` are in use.
    """
    adj = _adjacency(indptr, indices)
    n = len(adj)
    order = [int(v) for v in order]
    colors = [-1] * n
    parent = list(range(n))
    size = [1] * n
    undo: list[tuple[int, int]] = []
    clock = _Clock(deadline)
    limit = sys.getrecursionlimit()
    if limit < n + 100:
        sys.setrecursionlimit(n + 100)

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    def rec(idx: int, used: int) -> bool:
        if idx == n:
            return True
        clock.tick()
        v = order[idx]
        for col in range(min(used + 1, k)):
            roots = {find(w) for w in adj[v] if colors[w] == col}
            if 1 + sum(size[r] for r in roots) > c:
                continue
            mark = len(undo)
            colors[v] = col
            for w in adj[v]:
                if colors[w] == col:
                    a, b = find(v), find(w)
                    if a != b:
                        if size[a] < size[b]:
                            a, b = b, a
                        parent[b] = a
                        size[a] += size[b]
                        undo.append((b, a))
            if rec(idx + 1, max(used, col + 1)):
                return True
            while len(undo) > mark:
                b, a = undo.pop()
                parent[b] = b
                size[a] -= size[b]
            colors[v] = -1
        return False

    if rec(0, 0):
        return np.asarray(colors, dtype=np.int64)
    return None
