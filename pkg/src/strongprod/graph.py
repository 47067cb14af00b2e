"""Immutable graphs, graph products and the instance generators.

Vertices are dense integers ``0..n-1``. Every vertex carries a label, an
integer tuple; product graphs label ``(v, x)`` with the concatenation of the
factor labels, and number it ``v * |V(H)| + x`` (row-major), so iteration
order is stable and every construction in the package is deterministic.
"""

from __future__ import annotations

import bisect
import itertools
import random
from collections import deque
from dataclasses import dataclass
from functools import cached_property, reduce
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ConstructionError, SizeLimitError

MAX_VERTICES = 10**7

Label = tuple[int, ...]


def _check_size(n: int, what: str) -> None:
    if n > MAX_VERTICES:
        raise SizeLimitError(f"{what} would have {n} vertices (limit {MAX_VERTICES})")


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph with sorted adjacency lists and tuple labels."""

    labels: tuple[Label, ...]
    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.adjacency)
        if len(self.labels) != n:
            raise ValueError("labels and adjacency differ in length")
        if len(set(self.labels)) != n:
            raise ValueError("vertex labels must be unique")
        for v, nbrs in enumerate(self.adjacency):
            if any(a >= b for a, b in zip(nbrs, nbrs[1:])):
                raise ValueError(f"adjacency of {v} is not strictly increasing")
            for w in nbrs:
                if not 0 <= w < n:
                    raise ValueError(f"neighbour {w} of {v} out of range")
                if w == v:
                    raise ValueError(f"loop at {v}")
        nbr_sets = [set(a) for a in self.adjacency]
        for v, nbrs in enumerate(self.adjacency):
            for w in nbrs:
                if v not in nbr_sets[w]:
                    raise ValueError(f"edge {v}-{w} is not symmetric")

    @classmethod
    def _trusted(cls, labels, adjacency) -> "Graph":
        # skip validation for graphs built by this module's own algorithms
        g = object.__new__(cls)
        object.__setattr__(g, "labels", tuple(labels))
        object.__setattr__(g, "adjacency", tuple(adjacency))
        return g

    @classmethod
    def from_edges(
        cls, n: int, edges: Iterable[tuple[int, int]], labels: Sequence[Label] | None = None
    ) -> "Graph":
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        if labels is None:
            labels = [(i,) for i in range(n)]
        return cls(tuple(tuple(lab) for lab in labels), tuple(tuple(sorted(s)) for s in nbrs))

    # basic queries -----------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.adjacency)

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.labels == other.labels and self.adjacency == other.adjacency

    def __hash__(self) -> int:
        return hash((self.labels, self.adjacency))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges})"

    @property
    def dimension(self) -> int:
        return len(self.labels[0]) if self.labels else 0

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if v > u:
                    yield (u, v)

    @cached_property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        nbrs = self.adjacency[u]
        i = bisect.bisect_left(nbrs, v)
        return i < len(nbrs) and nbrs[i] == v

    @cached_property
    def label_index(self) -> dict[Label, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """``(indptr, indices)`` int64 arrays, the format the kernels consume."""
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(a) for a in self.adjacency])
        indices = np.fromiter(
            itertools.chain.from_iterable(self.adjacency), dtype=np.int64, count=int(indptr[-1])
        )
        return indptr, indices

    def induced_subgraph(self, vertices: Iterable[int]) -> "Graph":
        keep = sorted(set(vertices))
        pos = {v: i for i, v in enumerate(keep)}
        adj = [tuple(pos[w] for w in self.adjacency[v] if w in pos) for v in keep]
        return Graph._trusted([self.labels[v] for v in keep], adj)

    def complement(self) -> "Graph":
        n = self.n
        adj = []
        for v in range(n):
            nb = set(self.adjacency[v])
            adj.append(tuple(w for w in range(n) if w != v and w not in nb))
        return Graph._trusted(self.labels, adj)

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        out = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp, queue = [], deque([s])
            while queue:
                v = queue.popleft()
                comp.append(v)
                for w in self.adjacency[v]:
                    if not seen[w]:
                        seen[w] = True
                        queue.append(w)
            out.append(sorted(comp))
        return out

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def relabel(self, labels: Sequence[Label]) -> "Graph":
        return Graph(tuple(tuple(lab) for lab in labels), self.adjacency)


@dataclass(frozen=True, eq=False)
class RootedTree:
    """A tree with a distinguished root and BFS parent/depth arrays.

    ``parent[root]`` is ``-1``.
    """

    graph: Graph
    root: int
    parent: tuple[int, ...]
    depth: tuple[int, ...]

    @classmethod
    def from_graph(cls, graph: Graph, root: int = 0) -> "RootedTree":
        n = graph.n
        if n == 0:
            raise ValueError("empty tree")
        if graph.num_edges != n - 1:
            raise ValueError(f"a tree on {n} vertices has {n - 1} edges, got {graph.num_edges}")
        parent = [-2] * n
        depth = [0] * n
        parent[root] = -1
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w in graph.adjacency[v]:
                if parent[w] == -2:
                    parent[w] = v
                    depth[w] = depth[v] + 1
                    queue.append(w)
        if -2 in parent:
            raise ValueError("graph is not connected")
        return cls(graph, root, tuple(parent), tuple(depth))

    @property
    def n(self) -> int:
        return self.graph.n

    def children(self, v: int) -> tuple[int, ...]:
        return tuple(w for w in self.graph.adjacency[v] if w != self.parent[v])

    def is_leaf(self, v: int) -> bool:
        return self.graph.degree(v) <= 1

    def rerooted(self, root: int) -> "RootedTree":
        return RootedTree.from_graph(self.graph, root)

    def bfs_order(self) -> list[int]:
        return sorted(range(self.n), key=lambda v: (self.depth[v], v))


# products ---------------------------------------------------------------


def _product(g: Graph, h: Graph, kind: str) -> Graph:
    n = g.n * h.n
    _check_size(n, f"{kind} product")
    m = h.n
    g_adj, h_adj = g.adjacency, h.adjacency
    adj = []
    for v in range(g.n):
        gv = g_adj[v]
        g_closed = sorted(gv + (v,))
        for x in range(m):
            hx = h_adj[x]
            if kind == "strong":
                h_closed = sorted(hx + (x,))
                nb = [w * m + y for w in g_closed for y in h_closed if w != v or y != x]
            elif kind == "direct":
                nb = [w * m + y for w in gv for y in hx]
            else:
                nb = sorted([v * m + y for y in hx] + [w * m + x for w in gv])
            adj.append(tuple(nb))
    labels = [lv + lx for lv in g.labels for lx in h.labels]
    return Graph._trusted(labels, adj)


def strong_product(g: Graph, h: Graph) -> Graph:
    """``G ⊠ H``: coordinates each equal-or-adjacent, not all equal."""
    return _product(g, h, "strong")


def cartesian_product(g: Graph, h: Graph) -> Graph:
    return _product(g, h, "cartesian")


def direct_product(g: Graph, h: Graph) -> Graph:
    return _product(g, h, "direct")


def strong_product_all(graphs: Sequence[Graph]) -> Graph:
    if not graphs:
        raise ValueError("need at least one factor")
    _check_size(int(np.prod([g.n for g in graphs], dtype=object)), "strong product")
    return reduce(strong_product, graphs)


def strong_power(g: Graph, d: int) -> Graph:
    if d < 1:
        raise ValueError("d must be >= 1")
    return strong_product_all([g] * d)


# generators -------------------------------------------------------------


def path(n: int) -> Graph:
    if n < 1:
        raise ValueError("path needs n >= 1")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    if n < 1:
        raise ValueError("complete graph needs n >= 1")
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


def star(n: int) -> Graph:
    """``K_{1,n}`` with centre 0 and leaves ``1..n``."""
    if n < 1:
        raise ValueError("star needs n >= 1")
    return Graph.from_edges(n + 1, [(0, i) for i in range(1, n + 1)])


def empty(n: int) -> Graph:
    return Graph.from_edges(n, [])


def generate_basic(kind: str, n: int) -> Graph:
    makers = {"path": path, "cycle": cycle, "complete": complete, "star": star, "empty": empty}
    try:
        return makers[kind](n)
    except KeyError:
        raise ValueError(f"unknown graph kind {kind!r}") from None


def generate_tree_closure(k: int, n: int) -> tuple[RootedTree, Graph]:
    """The complete ``n``-ary tree ``T_{k,n}`` of depth ``k-1`` and its closure ``C_{k,n}``.

    Vertices are numbered in BFS order from the root 0; the closure adds an
    edge between every ancestor/descendant pair.
    """
    if k < 1 or n < 1:
        raise ValueError("k and n must be >= 1")
    size = k if n == 1 else (n**k - 1) // (n - 1)
    _check_size(size, "tree closure")
    parent = [-1]
    level = [0]
    for _ in range(k - 1):
        nxt = []
        for v in level:
            for _ in range(n):
                parent.append(v)
                nxt.append(len(parent) - 1)
        level = nxt
    tree_edges = [(parent[v], v) for v in range(1, size)]
    tree = RootedTree.from_graph(Graph.from_edges(size, tree_edges), 0)
    closure_edges = []
    for v in range(1, size):
        a = parent[v]
        while a != -1:
            closure_edges.append((a, v))
            a = parent[a]
    return tree, Graph.from_edges(size, closure_edges)


def _grid_index(coords: Sequence[int], n: int) -> int:
    idx = 0
    for c in coords:
        idx = idx * n + c
    return idx


def generate_hex_grid(n: int, d: int) -> Graph:
    """The Hex graph ``G_n^d`` on ``{0..n-1}^d``.

    Distinct ``v`` and ``w`` are adjacent when ``w - v`` or ``v - w`` lies in
    ``{0,1}^d``. Vertex numbering matches :func:`grid_product`, so this is a
    spanning subgraph of ``⊠_d P_n`` with identical vertex ids.
    """
    if n < 1 or d < 1:
        raise ValueError("n and d must be >= 1")
    _check_size(n**d, "hex grid")
    coords = list(itertools.product(range(n), repeat=d))
    steps = [s for s in itertools.product((0, 1), repeat=d) if any(s)]
    nbrs: list[set[int]] = [set() for _ in coords]
    for i, v in enumerate(coords):
        for s in steps:
            w = [a + b for a, b in zip(v, s)]
            if max(w) < n:
                j = _grid_index(w, n)
                nbrs[i].add(j)
                nbrs[j].add(i)
    return Graph._trusted(coords, [tuple(sorted(s)) for s in nbrs])


def grid_product(n: int, d: int) -> Graph:
    """``⊠_d P_n`` with labels in ``{0..n-1}^d``."""
    if d < 1:
        raise ValueError("d must be >= 1")
    _check_size(n**d, "grid product")
    return strong_power(path(n), d)


def random_bounded_degree_tree(n: int, max_degree: int, seed: int | None = None) -> RootedTree:
    """Random tree by sequential attachment to a vertex with residual degree.

    Vertex ``i`` attaches to a uniformly chosen earlier vertex of degree below
    ``max_degree``. Rooted at vertex 0.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if max_degree < 1 or (max_degree == 1 and n > 2):
        raise ConstructionError(f"no tree on {n} vertices has max degree {max_degree}")
    rng = random.Random(seed)
    deg = [0] * n
    open_vertices = [0]
    edges = []
    for v in range(1, n):
        u = rng.choice(open_vertices)
        edges.append((u, v))
        deg[u] += 1
        deg[v] += 1
        if deg[u] >= max_degree:
            open_vertices.remove(u)
        if deg[v] < max_degree:
            open_vertices.append(v)
    return RootedTree.from_graph(Graph.from_edges(n, edges), 0)


def is_subgraph(g: Graph, h: Graph) -> bool:
    """Whether every edge of ``g`` is an edge of ``h`` (same vertex ids)."""
    if g.n != h.n:
        return False
    return all(set(a) <= set(b) for a, b in zip(g.adjacency, h.adjacency))
