"""Colouring constructions for strong products.

Every function returns a colouring whose vertex ids follow the row-major
convention of :mod:`strongprod.graph`: the product vertex ``(v, x)`` of
``G ⊠ H`` has id ``v * |V(H)| + x``. Build the matching graph with
:func:`strongprod.graph.strong_product`.
"""

from __future__ import annotations

import math
from collections import OrderedDict
from typing import Sequence

import numpy as np

from .coloring import ConsistentColoring, EdgePartition, FractionalColoring, verify_coloring
from .errors import ColoringError, ConstructionError
from .graph import Graph, RootedTree, _check_size, path


def _require(graph: Graph, f, what: str = "colouring") -> None:
    if f.n != graph.n:
        raise ColoringError(f"{what} has {f.n} vertices, graph has {graph.n}")


# consistent colourings of paths, cycles and trees ------------------------


def path_edge_partition(n: int, k: int) -> EdgePartition:
    """Edge ``e_j = (j-1, j)`` of ``P_n`` goes to class ``(k - j) mod k``."""
    if n < 1 or k < 1:
        raise ConstructionError("need n >= 1 and k >= 1")
    return EdgePartition(k, {(j - 1, j): (k - j) % k for j in range(1, n)})


def edge_partition_to_consistent(tree: RootedTree, partition: EdgePartition) -> ConsistentColoring:
    """Consistent ``(k+1:k)``-colouring from an edge partition into ``k`` classes.

    The root gets ``(0, .., k-1)``. Walking away from the root along an edge of
    class ``i``, the child copies its parent's tuple and puts the parent's
    missing colour in position ``i``. Each monochromatic component then lies
    inside one component of ``T - E_j`` for some class ``j``.
    """
    if not tree.is_leaf(tree.root):
        raise ConstructionError(f"root {tree.root} is not a leaf")
    partition.check_graph(tree.graph)
    k = partition.k
    full = k * (k + 1) // 2
    order: list[tuple[int, ...] | None] = [None] * tree.n
    order[tree.root] = tuple(range(k))
    for v in tree.bfs_order():
        if v == tree.root:
            continue
        u = tree.parent[v]
        label = list(order[u])
        label[partition[(u, v)]] = full - sum(label)
        order[v] = tuple(label)
    return ConsistentColoring(k + 1, k, tuple(order))


def consistent_path_coloring(n: int, k: int) -> ConsistentColoring:
    """Consistent ``(k+1:k)``-colouring of ``P_n`` with clustering ``k``.

    Uses :func:`path_edge_partition`; the tuples repeat with period ``k(k+1)``,
    so only one period is built and then tiled.
    """
    if n < 1 or k < 1:
        raise ConstructionError("need n >= 1 and k >= 1")
    period = k * (k + 1)
    m = min(n, period)
    base = edge_partition_to_consistent(RootedTree.from_graph(path(m), 0), path_edge_partition(m, k))
    order = tuple(base.order[i % period] for i in range(n))
    return ConsistentColoring(k + 1, k, order)


def consistent_cycle_coloring(n: int, k: int) -> ConsistentColoring:
    """Consistent ``(k+1:k)``-colouring of ``C_n`` with clustering ``k^2 + 3k - 1``.

    The path colouring covers a prefix of ``m`` vertices, ``m`` the largest
    value ``<= n`` with ``m = 1 (mod k(k+1))``, so its two ends share a tuple;
    the remaining vertices repeat that tuple.
    """
    period = k * (k + 1)
    if k < 1 or n < period + 1:
        raise ConstructionError(f"cycle colouring with k={k} needs n >= {period + 1}, got {n}")
    m = ((n - 1) // period) * period + 1
    prefix = consistent_path_coloring(m, k).order
    return ConsistentColoring(k + 1, k, prefix + (prefix[-1],) * (n - m))


def cycle_clustering_bound(k: int) -> int:
    return k * k + 3 * k - 1


def bounded_degree_tree_partition(tree: RootedTree, k: int) -> EdgePartition:
    """Layered edge partition of a tree rooted at a leaf.

    The child edges of a vertex at depth ``d`` all go to class ``d mod k``
    (so the root edge is in class 0). Along any downward path every window of
    ``k`` edges meets every class, so each component of ``T - E_j`` spans at
    most ``k`` consecutive depths; see :func:`tree_partition_clustering_bound`.
    """
    if k < 2:
        raise ConstructionError("k must be >= 2; for k = 1 use the depth-parity colouring")
    if not tree.is_leaf(tree.root):
        raise ConstructionError(f"root {tree.root} is not a leaf")
    classes = {}
    for v in range(tree.n):
        u = tree.parent[v]
        if u >= 0:
            classes[(min(u, v), max(u, v))] = tree.depth[u] % k
    return EdgePartition(k, classes)


def tree_partition_clustering_bound(k: int, max_degree: int) -> int:
    """``1 + (D-1) + ... + (D-1)^(k-1)`` with ``D = max(max_degree, 2)``."""
    b = max(max_degree, 2) - 1
    return sum(b**t for t in range(k))


def consistent_tree_coloring(tree: RootedTree, k: int) -> ConsistentColoring:
    """Consistent ``(k+1:k)``-colouring of a tree, rerooted at a leaf if needed."""
    if k == 1:
        return ConsistentColoring(2, 1, tuple((d % 2,) for d in tree.depth))
    if not tree.is_leaf(tree.root):
        tree = tree.rerooted(_first_leaf(tree))
    return edge_partition_to_consistent(tree, bounded_degree_tree_partition(tree, k))


def _first_leaf(tree: RootedTree) -> int:
    return min(v for v in range(tree.n) if tree.is_leaf(v))


def depth_coloring(tree: RootedTree, k: int = 2) -> FractionalColoring:
    """Colour every vertex by its depth mod ``k`` (proper for ``k = 2``)."""
    return FractionalColoring.from_colors([d % k for d in tree.depth], k)


def inflate_palette(f: FractionalColoring, t: int) -> FractionalColoring:
    """Replace every colour ``c`` by the ``t`` colours ``c*t .. c*t + t-1``."""
    if t < 1:
        raise ConstructionError("t must be >= 1")
    assign = tuple(tuple(c * t + i for c in cs for i in range(t)) for cs in f.assign)
    return FractionalColoring(f.p * t, f.q * t, assign)


# products of colourings ---------------------------------------------------


def _tensor_pair(a: FractionalColoring, b: FractionalColoring) -> FractionalColoring:
    pb = b.p
    assign = tuple(
        tuple(x * pb + y for x in ca for y in cb) for ca in a.assign for cb in b.assign
    )
    shape = (a.palette_shape or (a.p,)) + (b.palette_shape or (b.p,))
    return FractionalColoring(a.p * b.p, a.q * b.q, assign, shape)


def tensor_coloring(factors: Sequence[tuple[Graph, FractionalColoring]]) -> FractionalColoring:
    """Product colouring of ``G_1 ⊠ ... ⊠ G_d``.

    Vertex ``(v_1, .., v_d)`` gets every tuple ``(a_1, .., a_d)`` with
    ``a_i in f_i(v_i)``, flattened in mixed radix. The result is a
    ``(prod p_i : prod q_i)``-colouring; every monochromatic component is a
    product of factor components, so clustering multiplies.
    """
    if not factors:
        raise ConstructionError("need at least one factor")
    for g, f in factors:
        _require(g, f)
    _check_size(math.prod(g.n for g, _ in factors), "tensor colouring")
    result = factors[0][1]
    for _, f in factors[1:]:
        result = _tensor_pair(result, f)
    return result


def blow_up(graph: Graph, f: FractionalColoring, t: int) -> FractionalColoring:
    """Colouring of ``G ⊠ K_t``: each vertex copy keeps its colour set."""
    if t < 1:
        raise ConstructionError("t must be >= 1")
    _require(graph, f)
    _check_size(graph.n * t, "blow-up")
    assign = tuple(cs for cs in f.assign for _ in range(t))
    return FractionalColoring(f.p, f.q, assign, f.palette_shape)


def consistent_combine(
    g: Graph, a: ConsistentColoring, h: Graph, b: FractionalColoring
) -> FractionalColoring:
    """``(p:r)``-colouring of ``G ⊠ H`` from a consistent ``(p:q)`` and a ``(q:r)``.

    Vertex ``(x, v)`` gets ``{a.order[x][i] : i in b(v)}``; clustering is at
    most the product of the two clusterings.
    """
    _require(g, a)
    _require(h, b)
    if a.q != b.p:
        raise ConstructionError(f"palette mismatch: consistent colouring has q={a.q}, second has p={b.p}")
    _check_size(g.n * h.n, "consistent product")
    assign = tuple(
        tuple(sorted(t[i] for i in cs)) for t in a.order for cs in b.assign
    )
    return FractionalColoring(a.p, b.q, assign)


def pigeonhole_coverage(f: FractionalColoring, g: FractionalColoring) -> list[tuple[int, ...]]:
    """Per product vertex ``(u, v)``, the shared colours ``f(u) ∩ g(v)``."""
    if f.p != g.p:
        raise ConstructionError(f"palettes differ: {f.p} vs {g.p}")
    return [tuple(sorted(set(cu) & set(cv))) for cu in f.assign for cv in g.assign]


def pigeonhole_combine(
    g: Graph, f: FractionalColoring, h: Graph, gcol: FractionalColoring
) -> FractionalColoring:
    """``(p : q+r-p)``-colouring of ``G ⊠ H`` from two colourings on one palette.

    Colour class ``i`` is the product of the two classes of colour ``i``. Every
    vertex shares at least ``q + r - p`` colours; the lowest ``q + r - p`` ids
    are kept.
    """
    _require(g, f)
    _require(h, gcol)
    p, q, r = f.p, f.q, gcol.q
    if f.p != gcol.p:
        raise ConstructionError(f"palettes differ: {f.p} vs {gcol.p}")
    if q + r <= p:
        raise ConstructionError(f"need q + r > p, got q={q}, r={r}, p={p}")
    _check_size(g.n * h.n, "pigeonhole product")
    target = q + r - p
    return FractionalColoring(p, target, tuple(cs[:target] for cs in pigeonhole_coverage(f, gcol)))


def randomized_palette_reduction(
    g: Graph,
    f: FractionalColoring,
    h: Graph,
    gcol: FractionalColoring,
    x: float,
    seed: int | None = None,
    max_retries: int = 100,
) -> tuple[FractionalColoring, int, int]:
    """Colour ``G ⊠ H`` with a random subset ``X`` of the colour pairs.

    Each pair ``(i, j)`` is kept with probability ``x``; colour ``(i, j)`` is
    the product of class ``i`` of ``f`` and class ``j`` of ``gcol``. Returns
    the colouring with ``p' = |X|`` and ``q'`` the minimum number of kept pairs
    seen by a vertex (extra colours beyond ``q'`` are dropped, lowest ids
    kept). Resamples while ``q' = 0``.
    """
    _require(g, f)
    _require(h, gcol)
    if f.p != gcol.p:
        raise ConstructionError(f"palettes differ: {f.p} vs {gcol.p}")
    if not 0 < x <= 1:
        raise ConstructionError(f"density must be in (0, 1], got {x}")
    _check_size(g.n * h.n, "palette reduction")
    p = f.p
    rng = np.random.default_rng(seed)
    sets_g = list(OrderedDict.fromkeys(f.assign))
    sets_h = list(OrderedDict.fromkeys(gcol.assign))
    for _ in range(max(1, max_retries)):
        keep = rng.random((p, p)) < x if x < 1 else np.ones((p, p), dtype=bool)
        ids = -np.ones((p, p), dtype=np.int64)
        ids[keep] = np.arange(int(keep.sum()))
        p_new = int(keep.sum())
        cache = {}
        q_new = None
        for su in sets_g:
            for sv in sets_h:
                kept = sorted(int(ids[i, j]) for i in su for j in sv if keep[i, j])
                cache[(su, sv)] = kept
                q_new = len(kept) if q_new is None else min(q_new, len(kept))
        if q_new:
            assign = tuple(tuple(cache[(cu, cv)][:q_new]) for cu in f.assign for cv in gcol.assign)
            shape = (p, p) if p_new == p * p else None
            return FractionalColoring(p_new, q_new, assign, shape), p_new, q_new
    raise ConstructionError(
        f"no sample with q' >= 1 after {max_retries} tries; density {x} is too small for p={p}, q={f.q}"
    )


# clustered colourings of products with paths and trees ---------------------


def _relabel_swap(f: FractionalColoring, n_first: int, n_second: int) -> FractionalColoring:
    # colouring of A ⊠ B -> colouring of B ⊠ A
    assign = [None] * (n_first * n_second)
    for a in range(n_first):
        for b in range(n_second):
            assign[b * n_first + a] = f.assign[a * n_second + b]
    return FractionalColoring(f.p, f.q, tuple(assign))


def multiply_path(graph: Graph, f: FractionalColoring, m: int) -> FractionalColoring:
    """``(k+1)``-colouring of ``G ⊠ P_m`` from a ``k``-colouring of ``G``.

    Combines the consistent ``(k+1:k)`` path colouring with ``f``; clustering
    grows by a factor of at most ``k``. Monochromatic components have the form
    ``X × I`` for a component ``X`` of ``f`` and an interval ``I`` of at most
    ``k`` path vertices.
    """
    _require(graph, f)
    if f.q != 1:
        raise ConstructionError(f"multiply_path needs a plain colouring (q = 1), got q={f.q}")
    if m < 1:
        raise ConstructionError("path length must be >= 1")
    _check_size(graph.n * m, "path product")
    k = f.p
    alpha = consistent_path_coloring(m, k)
    on_path_first = consistent_combine(path(m), alpha, graph, f)
    return _relabel_swap(on_path_first, m, graph.n)


def multiply_tree(graph: Graph, f: FractionalColoring, tree: RootedTree) -> FractionalColoring:
    """``(k+1)``-colouring of ``G ⊠ T`` from a ``k``-colouring of ``G``.

    Vertex ``(v, w)`` takes the colour of ``(v, x_d)`` in the
    :func:`multiply_path` colouring, ``d`` the depth of ``w``. Depths are
    measured from the tree's root when it is a leaf, otherwise from its
    smallest leaf, which keeps each monochromatic component inside ``X × T'``
    with ``|T'| <= max_degree^(k-1)``.
    """
    _require(graph, f)
    if f.q != 1:
        raise ConstructionError(f"multiply_tree needs a plain colouring (q = 1), got q={f.q}")
    if not tree.is_leaf(tree.root):
        tree = tree.rerooted(_first_leaf(tree))
    _check_size(graph.n * tree.n, "tree product")
    height = max(tree.depth)
    on_path = multiply_path(graph, f, height + 1)
    h1 = height + 1
    depth = tree.depth
    assign = tuple(on_path.assign[v * h1 + depth[w]] for v in range(graph.n) for w in range(tree.n))
    return FractionalColoring(on_path.p, 1, assign)


def multiply_tree_bound(c: int, k: int, max_degree: int) -> int:
    return c * max_degree ** (k - 1)


def tree_product_coloring(trees: Sequence[RootedTree], max_degree: int | None = None) -> FractionalColoring:
    """``(d+1)``-colouring of ``T_1 ⊠ ... ⊠ T_d`` with clustering ``D^(d choose 2)``.

    ``T_1`` may have any degree; ``T_2..T_d`` must have maximum degree at most
    ``max_degree`` (default: their largest degree, at least 2).
    """
    if not trees:
        raise ConstructionError("need at least one tree")
    later = max((t.graph.max_degree for t in trees[1:]), default=0)
    if max_degree is None:
        max_degree = max(later, 2)
    if max_degree < 2:
        raise ConstructionError("max_degree must be >= 2")
    if later > max_degree:
        raise ConstructionError(f"a later factor has max degree {later} > {max_degree}")
    _check_size(math.prod(t.n for t in trees), "tree product")
    graph = trees[0].graph
    f = depth_coloring(trees[0], 2)
    for t in trees[1:]:
        f = multiply_tree(graph, f, t)
        graph = _product_graph(graph, t.graph)
    return f


def tree_product_bound(d: int, max_degree: int) -> int:
    return max_degree ** math.comb(d, 2)


def _product_graph(a: Graph, b: Graph) -> Graph:
    from .graph import strong_product

    return strong_product(a, b)


def hex_grid_coloring(n: int, d: int) -> FractionalColoring:
    """``(d+1)``-colouring of ``⊠_d P_n`` with clustering at most ``d!``.

    Starts from the proper 2-colouring of ``P_n`` and applies
    :func:`multiply_path` ``d - 1`` times.
    """
    if n < 1 or d < 1:
        raise ConstructionError("need n >= 1 and d >= 1")
    _check_size(n**d, "hex grid colouring")
    f = FractionalColoring.from_colors([i % 2 for i in range(n)], 2)
    size = n
    for _ in range(d - 1):
        f = multiply_path(_SizedGraph(size), f, n)
        size *= n
    return f


class _SizedGraph:
    # multiply_path only needs the vertex count of G
    def __init__(self, n: int) -> None:
        self.n = n


def star_to_path_transfer(
    graph: Graph, n: int, f: FractionalColoring, c: int, m: int
) -> FractionalColoring:
    """Turn a colouring of ``G ⊠ K_{1,n}`` into one of ``G ⊠ P_m``.

    ``f`` must be a plain colouring with clustering at most ``c`` (product
    vertex ``(v, s)`` has id ``v * (n+1) + s``, centre ``s = 0``). Among the
    leaf copies of ``G`` some colouring ``f_l`` must repeat at least ``c``
    times (guaranteed once ``n >= c * l^|V(G)|``). With ``f_c`` the colouring
    of the central copy, the path layers alternate ``f_c, f_l, f_c, ..``; no
    edge between layers is monochromatic, so clustering stays at most ``c``.
    """
    nv = graph.n
    if f.n != nv * (n + 1):
        raise ColoringError(f"colouring has {f.n} vertices, G ⊠ K_1,{n} has {nv * (n + 1)}")
    if f.q != 1:
        raise ConstructionError("star_to_path_transfer needs a plain colouring (q = 1)")
    if m < 1:
        raise ConstructionError("path length must be >= 1")
    from .graph import star, strong_product

    report = verify_coloring(strong_product(graph, star(n)), f)
    if report.clustering > c:
        raise ConstructionError(f"input colouring has clustering {report.clustering} > {c}")
    colors = f.colors
    central = tuple(colors[v * (n + 1)] for v in range(nv))
    groups: dict[tuple[int, ...], int] = {}
    leaf = None
    for s in range(1, n + 1):
        key = tuple(colors[v * (n + 1) + s] for v in range(nv))
        groups[key] = groups.get(key, 0) + 1
        if groups[key] >= c:
            leaf = key
            break
    if leaf is None:
        raise ConstructionError(f"no leaf colouring repeats {c} times among {n} leaf copies")
    for v in range(nv):
        if leaf[v] == central[v]:
            raise ConstructionError(f"leaf and central colourings agree on vertex {v}")
    for u, v in graph.edges():
        if leaf[u] == central[v] or leaf[v] == central[u]:
            raise ConstructionError(f"leaf and central colourings clash on edge {u}-{v}")
    assign = tuple((central[v] if x % 2 == 0 else leaf[v],) for v in range(nv) for x in range(m))
    return FractionalColoring(f.p, 1, assign)


def fractional_grid_ratio_bound(d: int, k: int) -> bool:
    """Whether ``(k+1)^d / k^d <= 1 + 2d/k`` (exact rational comparison)."""
    return (k + 1) ** d * k <= k**d * (k + 2 * d)
