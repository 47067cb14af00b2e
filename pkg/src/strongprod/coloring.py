"""Colouring types, monochromatic components and verification reports."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .errors import ColoringError
from .graph import Graph


@dataclass(frozen=True)
class FractionalColoring:
    """A ``(p:q)``-colouring: every vertex gets a ``q``-subset of ``range(p)``.

    ``assign[v]`` is the sorted tuple of colour ids of vertex ``v``. A plain
    ``k``-colouring is ``p=k, q=1``. ``palette_shape`` records the factor
    palettes when colour ids are flattened product colours (mixed radix,
    first factor most significant).
    """

    p: int
    q: int
    assign: tuple[tuple[int, ...], ...]
    palette_shape: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.q < 1 or self.p < self.q:
            raise ColoringError(f"need 1 <= q <= p, got p={self.p}, q={self.q}")
        for v, cs in enumerate(self.assign):
            if len(cs) != self.q:
                raise ColoringError(f"vertex {v} has {len(cs)} colours, expected {self.q}")
            if any(a >= b for a, b in zip(cs, cs[1:])):
                raise ColoringError(f"colours of vertex {v} are not strictly increasing")
            if cs and (cs[0] < 0 or cs[-1] >= self.p):
                raise ColoringError(f"vertex {v} uses a colour outside range({self.p})")
        if self.palette_shape is not None and int(np.prod(self.palette_shape)) != self.p:
            raise ColoringError("palette_shape does not multiply to p")

    @classmethod
    def from_sets(cls, p: int, sets: Sequence[Sequence[int]], palette_shape=None) -> "FractionalColoring":
        assign = tuple(tuple(sorted(s)) for s in sets)
        q = len(assign[0]) if assign else 1
        return cls(p, q, assign, palette_shape)

    @classmethod
    def from_colors(cls, colors: Sequence[int], k: int | None = None) -> "FractionalColoring":
        colors = [int(c) for c in colors]
        if k is None:
            k = max(colors, default=0) + 1
        return cls(k, 1, tuple((c,) for c in colors))

    @property
    def n(self) -> int:
        return len(self.assign)

    @property
    def colors(self) -> list[int]:
        """The single colour of each vertex; only for ``q == 1``."""
        if self.q != 1:
            raise ColoringError("colors is only defined for q == 1")
        return [cs[0] for cs in self.assign]

    def colour_class(self, colour: int) -> list[int]:
        return [v for v, cs in enumerate(self.assign) if colour in cs]

    def decode(self, colour: int) -> tuple[int, ...]:
        """Factor colours of a flattened product colour id."""
        if self.palette_shape is None:
            return (colour,)
        out = []
        for base in reversed(self.palette_shape):
            colour, r = divmod(colour, base)
            out.append(r)
        return tuple(reversed(out))

    def check_graph(self, graph: Graph) -> None:
        if self.n != graph.n:
            raise ColoringError(f"colouring has {self.n} vertices, graph has {graph.n}")

    def slots(self) -> tuple[np.ndarray, np.ndarray]:
        cptr = np.arange(0, self.n * self.q + 1, self.q, dtype=np.int64)
        cols = np.fromiter((c for cs in self.assign for c in cs), dtype=np.int64, count=self.n * self.q)
        return cptr, cols


@dataclass(frozen=True)
class ConsistentColoring:
    """A ``(p:q)``-colouring with an ordering ``order[v]`` of each colour set.

    Consistency (checked by :func:`check_consistency`, not here) asks that
    across every edge ``xy``, ``order[x][i] != order[y][j]`` whenever ``i != j``.
    """

    p: int
    q: int
    order: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.q < 1 or self.p < self.q:
            raise ColoringError(f"need 1 <= q <= p, got p={self.p}, q={self.q}")
        for v, t in enumerate(self.order):
            if len(t) != self.q or len(set(t)) != self.q:
                raise ColoringError(f"vertex {v} needs {self.q} distinct colours, got {t}")
            if min(t) < 0 or max(t) >= self.p:
                raise ColoringError(f"vertex {v} uses a colour outside range({self.p})")

    @property
    def n(self) -> int:
        return len(self.order)

    def as_fractional(self) -> FractionalColoring:
        return FractionalColoring(self.p, self.q, tuple(tuple(sorted(t)) for t in self.order))


@dataclass(frozen=True)
class EdgePartition:
    """Assignment of every tree edge ``(u, v)``, ``u < v``, to one of ``k`` classes."""

    k: int
    class_of: Mapping[tuple[int, int], int] = field(hash=False)

    def __post_init__(self) -> None:
        for e, c in self.class_of.items():
            if not 0 <= c < self.k:
                raise ColoringError(f"edge {e} has class {c} outside range({self.k})")

    def __getitem__(self, edge: tuple[int, int]) -> int:
        u, v = edge
        return self.class_of[(u, v) if u < v else (v, u)]

    def check_graph(self, graph: Graph) -> None:
        edges = set(graph.edges())
        if set(self.class_of) != edges:
            raise ColoringError("edge partition does not cover exactly the edges of the tree")

    def classes(self) -> list[list[tuple[int, int]]]:
        out: list[list[tuple[int, int]]] = [[] for _ in range(self.k)]
        for e in sorted(self.class_of):
            out[self.class_of[e]].append(e)
        return out


class Infinity(enum.Enum):
    """Sentinel for the unbounded value of the properness parameter."""

    INFINITY = "inf"

    def __repr__(self) -> str:
        return "INFINITY"


INFINITY = Infinity.INFINITY


class DefectParameter(enum.Enum):
    """The measured graph parameter whose bound defines a defect notion.

    ``CLUSTER_SIZE`` is the largest component order, ``MAX_DEGREE`` the
    maximum degree, ``PROPERNESS`` is 1 on edgeless graphs and
    :data:`INFINITY` otherwise.
    """

    CLUSTER_SIZE = "star"
    MAX_DEGREE = "delta"
    PROPERNESS = "iota"

    def evaluate(self, graph: Graph) -> int | Infinity:
        if self is DefectParameter.CLUSTER_SIZE:
            return max((len(c) for c in graph.components()), default=0)
        if self is DefectParameter.MAX_DEGREE:
            return graph.max_degree
        return 1 if graph.num_edges == 0 else INFINITY

    def product_bound(self, a, b):
        """Bound on the parameter of a strong product from the factors' values."""
        if self is DefectParameter.MAX_DEGREE:
            return (a + 1) * (b + 1) - 1
        if INFINITY in (a, b):
            return INFINITY
        return a * b


@dataclass(frozen=True)
class VerificationReport:
    """Measured properties of a colouring.

    ``witness`` is ``(colour, vertices)`` of a largest monochromatic
    component (smallest colour id, then smallest vertex, on ties).
    ``eta_value`` is the value of the highlighted parameter ``eta``.
    """

    proper: bool
    clustering: int
    defect: int
    witness: tuple[int, tuple[int, ...]]
    eta: DefectParameter = DefectParameter.CLUSTER_SIZE
    consistent: bool | None = None
    p: int = 0
    q: int = 0

    @property
    def eta_value(self) -> int | Infinity:
        if self.eta is DefectParameter.CLUSTER_SIZE:
            return self.clustering
        if self.eta is DefectParameter.MAX_DEGREE:
            return self.defect
        return 1 if self.proper else INFINITY

    def within(self, bound) -> bool:
        """Whether the highlighted parameter is at most ``bound``."""
        value = self.eta_value
        if value is INFINITY:
            return bound is INFINITY
        if bound is INFINITY:
            return True
        return value <= bound


def _slot_analysis(graph: Graph, f: FractionalColoring):
    indptr, indices = graph.csr
    cptr, cols = f.slots()
    labels, degree = kernels.backend.slot_components(indptr, indices, cptr, cols)
    return cols, labels, degree


def monochromatic_components(graph: Graph, f: FractionalColoring, colour: int) -> list[list[int]]:
    """Components of the subgraph induced by the vertices carrying ``colour``."""
    f.check_graph(graph)
    if not 0 <= colour < f.p:
        raise ColoringError(f"colour {colour} outside range({f.p})")
    mask = np.zeros(graph.n, dtype=np.uint8)
    for v, cs in enumerate(f.assign):
        if colour in cs:
            mask[v] = 1
    labels = kernels.backend.mask_components(*graph.csr, mask)
    groups: dict[int, list[int]] = {}
    for v in np.flatnonzero(labels >= 0):
        groups.setdefault(int(labels[v]), []).append(int(v))
    return [groups[r] for r in sorted(groups)]


def all_monochromatic_components(graph: Graph, f: FractionalColoring) -> list[tuple[int, list[int]]]:
    """Every ``(colour, vertices)`` monochromatic component, sorted by colour then vertex."""
    f.check_graph(graph)
    cols, labels, _ = _slot_analysis(graph, f)
    q = f.q
    groups: dict[int, list[int]] = {}
    for s, r in enumerate(labels.tolist()):
        groups.setdefault(r, []).append(s // q)
    out = [(int(cols[r]), vs) for r, vs in groups.items()]
    out.sort(key=lambda t: (t[0], t[1][0]))
    return out


def verify_coloring(
    graph: Graph, f: FractionalColoring, eta: DefectParameter = DefectParameter.CLUSTER_SIZE
) -> VerificationReport:
    """Measure properness, clustering and defect of ``f`` on ``graph``."""
    f.check_graph(graph)
    if graph.n == 0:
        return VerificationReport(True, 0, 0, (0, ()), eta, p=f.p, q=f.q)
    cols, labels, degree = _slot_analysis(graph, f)
    roots, counts = np.unique(labels, return_counts=True)
    clustering = int(counts.max())
    defect = int(degree.max())
    # extremal component: smallest colour, then smallest first vertex
    candidates = roots[counts == clustering]
    q = f.q
    root = min(candidates.tolist(), key=lambda r: (int(cols[r]), r // q))
    members = tuple(int(s) // q for s in np.flatnonzero(labels == root))
    return VerificationReport(
        proper=clustering == 1,
        clustering=clustering,
        defect=defect,
        witness=(int(cols[root]), members),
        eta=eta,
        p=f.p,
        q=f.q,
    )


def check_consistency(graph: Graph, c: ConsistentColoring):
    """``(True, None)`` if ``c`` is consistent, else ``(False, (x, y, i, j))``.

    The witness is an edge ``xy`` with ``order[x][i] == order[y][j]``, ``i != j``.
    """
    if c.n != graph.n:
        raise ColoringError(f"colouring has {c.n} vertices, graph has {graph.n}")
    order = c.order
    for x, y in graph.edges():
        pos_y = {a: j for j, a in enumerate(order[y])}
        for i, a in enumerate(order[x]):
            j = pos_y.get(a)
            if j is not None and j != i:
                return False, (x, y, i, j)
    return True, None


def verify_consistent(
    graph: Graph, c: ConsistentColoring, eta: DefectParameter = DefectParameter.CLUSTER_SIZE
) -> VerificationReport:
    report = verify_coloring(graph, c.as_fractional(), eta)
    ok, _ = check_consistency(graph, c)
    return VerificationReport(
        report.proper, report.clustering, report.defect, report.witness, eta, ok, report.p, report.q
    )


def subgraph_parameter(graph: Graph, f: FractionalColoring, eta: DefectParameter):
    """Max of ``eta`` over all monochromatic subgraphs, computed directly."""
    f.check_graph(graph)
    values = []
    for colour in range(f.p):
        members = f.colour_class(colour)
        if members:
            values.append(eta.evaluate(graph.induced_subgraph(members)))
    if not values:
        return 0
    if INFINITY in values:
        return INFINITY
    return max(values)
