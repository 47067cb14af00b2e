# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; see ``_pykernels`` for the reference semantics.

Every function here must return exactly what its pure-Python twin returns.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, calloc, free
from libc.string cimport memcpy
from time import perf_counter

from .errors import BudgetExceeded

cnp.import_array()

BACKEND = "cython"

cdef enum:
    CHECK_EVERY = 4096


cdef inline Py_ssize_t _find(int64_t* parent, Py_ssize_t x) noexcept nogil:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def slot_components(const int64_t[::1] indptr, const int64_t[::1] indices,
                    const int64_t[::1] cptr, const int64_t[::1] cols):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t nslots = cptr[n]
    labels_arr = np.arange(nslots, dtype=np.int64)
    degree_arr = np.zeros(nslots, dtype=np.int64)
    cdef int64_t[::1] parent = labels_arr
    cdef int64_t[::1] degree = degree_arr
    cdef Py_ssize_t v, e, w, i, j, a1, b1, ri, rj
    with nogil:
        for v in range(n):
            a1 = cptr[v + 1]
            for e in range(indptr[v], indptr[v + 1]):
                w = indices[e]
                if w <= v:
                    continue
                i = cptr[v]
                j = cptr[w]
                b1 = cptr[w + 1]
                while i < a1 and j < b1:
                    if cols[i] == cols[j]:
                        degree[i] += 1
                        degree[j] += 1
                        ri = _find(&parent[0], i)
                        rj = _find(&parent[0], j)
                        if ri < rj:
                            parent[rj] = ri
                        elif rj < ri:
                            parent[ri] = rj
                        i += 1
                        j += 1
                    elif cols[i] < cols[j]:
                        i += 1
                    else:
                        j += 1
        for i in range(nslots):
            parent[i] = _find(&parent[0], i)
    return labels_arr, degree_arr


def mask_components(const int64_t[::1] indptr, const int64_t[::1] indices, mask):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef const unsigned char[::1] inside = np.ascontiguousarray(mask, dtype=np.uint8)
    labels_arr = np.arange(n, dtype=np.int64)
    cdef int64_t[::1] parent = labels_arr
    cdef Py_ssize_t v, e, w, rv, rw
    with nogil:
        for v in range(n):
            if not inside[v]:
                continue
            for e in range(indptr[v], indptr[v + 1]):
                w = indices[e]
                if w > v and inside[w]:
                    rv = _find(&parent[0], v)
                    rw = _find(&parent[0], w)
                    if rv < rw:
                        parent[rw] = rv
                    elif rw < rv:
                        parent[rv] = rw
        for v in range(n):
            if inside[v]:
                parent[v] = _find(&parent[0], v)
            else:
                parent[v] = -1
    return labels_arr


cdef class _Clock:
    cdef double deadline
    cdef long ticks

    def __cinit__(self, double deadline):
        self.deadline = deadline
        self.ticks = 0

    cdef int tick(self) except -1:
        self.ticks += 1
        if self.ticks % CHECK_EVERY == 0 and perf_counter() > self.deadline:
            raise BudgetExceeded("time limit reached")
        return 0


# maximum clique ----------------------------------------------------------

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil


cdef inline int _ctz(uint64_t x) noexcept nogil:
    return __builtin_ctzll(x)


cdef class _CliqueSearch:
    cdef Py_ssize_t n, W
    cdef uint64_t* adj
    cdef uint64_t* pbuf
    cdef uint64_t* scratch
    cdef int* order
    cdef int* bounds
    cdef int* current
    cdef int* best
    cdef int ncur, nbest
    cdef _Clock clock

    def __cinit__(self, Py_ssize_t n, _Clock clock):
        self.n = n
        self.W = (n + 63) >> 6
        self.adj = <uint64_t*>calloc(n * self.W + 1, sizeof(uint64_t))
        self.pbuf = <uint64_t*>calloc((n + 2) * self.W + 1, sizeof(uint64_t))
        self.scratch = <uint64_t*>calloc(2 * (n + 2) * self.W + 1, sizeof(uint64_t))
        self.order = <int*>malloc(((n + 1) * n + 1) * sizeof(int))
        self.bounds = <int*>malloc(((n + 1) * n + 1) * sizeof(int))
        self.current = <int*>malloc((n + 1) * sizeof(int))
        self.best = <int*>malloc((n + 1) * sizeof(int))
        if not (self.adj and self.pbuf and self.scratch and self.order
                and self.bounds and self.current and self.best):
            raise MemoryError()
        self.ncur = 0
        self.nbest = 0
        self.clock = clock

    def __dealloc__(self):
        free(self.adj); free(self.pbuf); free(self.scratch)
        free(self.order); free(self.bounds); free(self.current); free(self.best)

    cdef int colour_sort(self, int depth) noexcept:
        cdef Py_ssize_t W = self.W, k, j
        cdef uint64_t* P = &self.pbuf[depth * W]
        cdef uint64_t* U = &self.scratch[2 * depth * W]
        cdef uint64_t* Q = &self.scratch[(2 * depth + 1) * W]
        cdef int* order = &self.order[depth * self.n]
        cdef int* bounds = &self.bounds[depth * self.n]
        cdef int colour = 0, cnt = 0, v
        cdef uint64_t low
        cdef bint u_nonempty, q_nonempty
        cdef uint64_t* nv
        memcpy(U, P, W * sizeof(uint64_t))
        while True:
            u_nonempty = False
            for k in range(W):
                if U[k]:
                    u_nonempty = True
                    break
            if not u_nonempty:
                break
            colour += 1
            memcpy(Q, U, W * sizeof(uint64_t))
            k = 0
            while k < W:
                if Q[k] == 0:
                    k += 1
                    continue
                low = Q[k] & (~Q[k] + 1)
                v = <int>(k * 64 + _ctz(Q[k]))
                nv = &self.adj[v * W]
                Q[k] &= ~low
                U[k] &= ~low
                for j in range(W):
                    Q[j] &= ~nv[j]
                order[cnt] = v
                bounds[cnt] = colour
                cnt += 1
        return cnt

    cdef int expand(self, int depth) except -1:
        cdef Py_ssize_t W = self.W, j
        cdef uint64_t* P = &self.pbuf[depth * W]
        cdef uint64_t* newP = &self.pbuf[(depth + 1) * W]
        cdef int cnt = self.colour_sort(depth)
        cdef int* order = &self.order[depth * self.n]
        cdef int* bounds = &self.bounds[depth * self.n]
        cdef int idx, v
        cdef bint nonempty
        cdef uint64_t* nv
        for idx in range(cnt - 1, -1, -1):
            self.clock.tick()
            if self.ncur + bounds[idx] <= self.nbest:
                return 0
            v = order[idx]
            nv = &self.adj[v * W]
            nonempty = False
            for j in range(W):
                newP[j] = P[j] & nv[j]
                if newP[j]:
                    nonempty = True
            self.current[self.ncur] = v
            self.ncur += 1
            if nonempty:
                self.expand(depth + 1)
            elif self.ncur > self.nbest:
                memcpy(self.best, self.current, self.ncur * sizeof(int))
                self.nbest = self.ncur
            self.ncur -= 1
            P[v >> 6] &= ~((<uint64_t>1) << (v & 63))
        return 0


def max_clique(const int64_t[::1] indptr, const int64_t[::1] indices, double deadline=float("inf")):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    cdef _CliqueSearch s = _CliqueSearch(n, _Clock(deadline))
    cdef Py_ssize_t v, e, w, W = s.W
    for v in range(n):
        for e in range(indptr[v], indptr[v + 1]):
            w = indices[e]
            s.adj[v * W + (w >> 6)] |= (<uint64_t>1) << (w & 63)
        s.pbuf[v >> 6] |= (<uint64_t>1) << (v & 63)
    s.expand(0)
    return np.sort(np.asarray([s.best[i] for i in range(s.nbest)], dtype=np.int64))


# exact colouring ---------------------------------------------------------

cdef class _ColourSearch:
    cdef Py_ssize_t n
    cdef const int64_t[::1] indptr
    cdef const int64_t[::1] indices
    cdef int* colors
    cdef int* best
    cdef int* cnt
    cdef int* sat
    cdef int* degree
    cdef int ub, lower
    cdef _Clock clock

    def __cinit__(self, indptr, indices, int lower, _Clock clock):
        self.indptr = indptr
        self.indices = indices
        self.n = indptr.shape[0] - 1
        n = self.n
        self.colors = <int*>malloc((n + 1) * sizeof(int))
        self.best = <int*>malloc((n + 1) * sizeof(int))
        self.cnt = <int*>calloc(n * (n + 1) + 1, sizeof(int))
        self.sat = <int*>calloc(n + 1, sizeof(int))
        self.degree = <int*>calloc(n + 1, sizeof(int))
        if not (self.colors and self.best and self.cnt and self.sat and self.degree):
            raise MemoryError()
        for v in range(n):
            self.colors[v] = -1
            self.degree[v] = indptr[v + 1] - indptr[v]
        self.lower = lower
        self.clock = clock

    def __dealloc__(self):
        free(self.colors); free(self.best); free(self.cnt); free(self.sat); free(self.degree)

    cdef inline void assign(self, Py_ssize_t v, int c) noexcept:
        cdef Py_ssize_t e, w
        cdef int* row
        self.colors[v] = c
        for e in range(self.indptr[v], self.indptr[v + 1]):
            w = self.indices[e]
            row = &self.cnt[w * (self.n + 1)]
            if row[c] == 0:
                self.sat[w] += 1
            row[c] += 1

    cdef inline void unassign(self, Py_ssize_t v, int c) noexcept:
        cdef Py_ssize_t e, w
        cdef int* row
        self.colors[v] = -1
        for e in range(self.indptr[v], self.indptr[v + 1]):
            w = self.indices[e]
            row = &self.cnt[w * (self.n + 1)]
            row[c] -= 1
            if row[c] == 0:
                self.sat[w] -= 1

    cdef inline Py_ssize_t pick(self) noexcept:
        cdef Py_ssize_t v, best_v = -1
        cdef int best_s = -1, best_d = -1, s
        for v in range(self.n):
            if self.colors[v] < 0:
                s = self.sat[v]
                if s > best_s or (s == best_s and self.degree[v] > best_d):
                    best_v = v
                    best_s = s
                    best_d = self.degree[v]
        return best_v

    cdef int search(self, Py_ssize_t ncol, int used) except -1:
        # returns 1 when an optimal colouring is certified
        cdef Py_ssize_t v
        cdef int c, done
        cdef int* row
        self.clock.tick()
        if used >= self.ub:
            return 0
        if ncol == self.n:
            self.ub = used
            memcpy(self.best, self.colors, self.n * sizeof(int))
            return 1 if used <= self.lower else 0
        v = self.pick()
        row = &self.cnt[v * (self.n + 1)]
        for c in range(used):
            if row[c] == 0:
                self.assign(v, c)
                done = self.search(ncol + 1, used)
                self.unassign(v, c)
                if done:
                    return 1
                if used >= self.ub:
                    return 0
        if used + 1 < self.ub:
            self.assign(v, used)
            done = self.search(ncol + 1, used + 1)
            self.unassign(v, used)
            if done:
                return 1
        return 0


def exact_coloring(const int64_t[::1] indptr, const int64_t[::1] indices, clique, lower,
                   double deadline=float("inf")):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    clique_list = [int(v) for v in clique]
    cdef int lo = max(int(lower), len(clique_list), 1)
    cdef _ColourSearch s = _ColourSearch(indptr, indices, lo, _Clock(deadline))
    cdef Py_ssize_t i, v, step
    cdef int c, used
    cdef int* row
    for i, v in enumerate(clique_list):
        s.assign(v, i)
    used = len(clique_list)
    for step in range(n - len(clique_list)):
        v = s.pick()
        row = &s.cnt[v * (n + 1)]
        c = 0
        while row[c]:
            c += 1
        s.assign(v, c)
        if c + 1 > used:
            used = c + 1
    memcpy(s.best, s.colors, n * sizeof(int))
    s.ub = used
    if used > lo:
        for v in range(n):
            if s.colors[v] >= 0:
                s.unassign(v, s.colors[v])
        for i, v in enumerate(clique_list):
            s.assign(v, i)
        s.search(len(clique_list), len(clique_list))
    return np.asarray([s.best[i] for i in range(n)], dtype=np.int64)


# clustered colouring search ----------------------------------------------

cdef class _ClusterSearch:
    cdef Py_ssize_t n
    cdef const int64_t[::1] indptr
    cdef const int64_t[::1] indices
    cdef int64_t[::1] order
    cdef int* colors
    cdef int* parent
    cdef int* size
    cdef int* mark
    cdef int* undo_child
    cdef int* undo_root
    cdef int nundo, stamp, k, c
    cdef _Clock clock

    def __cinit__(self, indptr, indices, order, int k, int c, _Clock clock):
        self.indptr = indptr
        self.indices = indices
        self.order = order
        self.n = indptr.shape[0] - 1
        n = self.n
        self.colors = <int*>malloc((n + 1) * sizeof(int))
        self.parent = <int*>malloc((n + 1) * sizeof(int))
        self.size = <int*>malloc((n + 1) * sizeof(int))
        self.mark = <int*>calloc(n + 1, sizeof(int))
        self.undo_child = <int*>malloc((n + 1) * sizeof(int))
        self.undo_root = <int*>malloc((n + 1) * sizeof(int))
        if not (self.colors and self.parent and self.size and self.mark
                and self.undo_child and self.undo_root):
            raise MemoryError()
        for v in range(n):
            self.colors[v] = -1
            self.parent[v] = v
            self.size[v] = 1
        self.nundo = 0
        self.stamp = 0
        self.k = k
        self.c = c
        self.clock = clock

    def __dealloc__(self):
        free(self.colors); free(self.parent); free(self.size); free(self.mark)
        free(self.undo_child); free(self.undo_root)

    cdef inline int find(self, int x) noexcept:
        while self.parent[x] != x:
            x = self.parent[x]
        return x

    cdef int rec(self, Py_ssize_t idx, int used) except -1:
        cdef Py_ssize_t e, w, v
        cdef int col, total, r, a, b, mark0, top
        if idx == self.n:
            return 1
        self.clock.tick()
        v = self.order[idx]
        top = used + 1 if used + 1 < self.k else self.k
        for col in range(top):
            self.stamp += 1
            total = 1
            for e in range(self.indptr[v], self.indptr[v + 1]):
                w = self.indices[e]
                if self.colors[w] == col:
                    r = self.find(<int>w)
                    if self.mark[r] != self.stamp:
                        self.mark[r] = self.stamp
                        total += self.size[r]
            if total > self.c:
                continue
            mark0 = self.nundo
            self.colors[v] = col
            for e in range(self.indptr[v], self.indptr[v + 1]):
                w = self.indices[e]
                if self.colors[w] == col:
                    a = self.find(<int>v)
                    b = self.find(<int>w)
                    if a != b:
                        if self.size[a] < self.size[b]:
                            a, b = b, a
                        self.parent[b] = a
                        self.size[a] += self.size[b]
                        self.undo_child[self.nundo] = b
                        self.undo_root[self.nundo] = a
                        self.nundo += 1
            if self.rec(idx + 1, used if used > col + 1 else col + 1):
                return 1
            while self.nundo > mark0:
                self.nundo -= 1
                b = self.undo_child[self.nundo]
                a = self.undo_root[self.nundo]
                self.parent[b] = b
                self.size[a] -= self.size[b]
            self.colors[v] = -1
        return 0


def clustered_search(const int64_t[::1] indptr, const int64_t[::1] indices, order, int k, int c,
                     double deadline=float("inf")):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    order_arr = np.ascontiguousarray(order, dtype=np.int64)
    cdef _ClusterSearch s = _ClusterSearch(indptr, indices, order_arr, k, c, _Clock(deadline))
    if s.rec(0, 0):
        return np.asarray([s.colors[i] for i in range(n)], dtype=np.int64)
    return None
