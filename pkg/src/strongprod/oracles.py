"""Exact reference searches: clique, independence and chromatic numbers,
clustered feasibility, the Hex side-to-side property and derived bounds.

Every oracle takes an :class:`OracleBudget`. Exceeding it raises
:class:`BudgetExceeded` (or, for :func:`clustered_feasibility`, returns a
``BUDGET_EXCEEDED`` outcome); no oracle ever returns a guessed answer.
"""

from __future__ import annotations

import enum
import math
import random
from collections import deque
from dataclasses import asdict, dataclass
from fractions import Fraction
from time import perf_counter

import numpy as np

from . import kernels
from .coloring import FractionalColoring, verify_coloring
from .errors import BudgetExceeded, ColoringError
from .graph import Graph, strong_power


@dataclass(frozen=True)
class OracleBudget:
    max_vertices: int = 200
    max_colours: int = 64
    time_limit: float = 60.0
    max_states: int = 2**26

    def __post_init__(self) -> None:
        for name in ("max_vertices", "max_colours", "time_limit", "max_states"):
            if not getattr(self, name) > 0:
                raise ValueError(f"budget field {name} must be positive")

    def deadline(self) -> float:
        return perf_counter() + self.time_limit

    def check_vertices(self, n: int, what: str = "graph") -> None:
        if n > self.max_vertices:
            raise BudgetExceeded(f"{what} has {n} vertices, budget allows {self.max_vertices}")

    def to_dict(self) -> dict:
        return asdict(self)


DEFAULT_BUDGET = OracleBudget()


def _csr(graph: Graph):
    return graph.csr


def _remaining(deadline: float) -> None:
    if perf_counter() > deadline:
        raise BudgetExceeded("time limit reached")


def maximum_clique(graph: Graph, budget: OracleBudget = DEFAULT_BUDGET, deadline: float | None = None) -> list[int]:
    """A maximum clique (sorted vertex list)."""
    budget.check_vertices(graph.n)
    deadline = budget.deadline() if deadline is None else deadline
    return [int(v) for v in kernels.backend.max_clique(*_csr(graph), deadline)]


def clique_number(graph: Graph, budget: OracleBudget = DEFAULT_BUDGET) -> int:
    return len(maximum_clique(graph, budget))


def maximum_independent_set(graph: Graph, budget: OracleBudget = DEFAULT_BUDGET, deadline: float | None = None) -> list[int]:
    budget.check_vertices(graph.n)
    return maximum_clique(graph.complement(), budget, deadline)


def independence_number(graph: Graph, budget: OracleBudget = DEFAULT_BUDGET) -> int:
    return len(maximum_independent_set(graph, budget))


def maximal_independent_sets(graph: Graph, limit: int = 50_000, deadline: float = math.inf) -> list[int] | None:
    """All maximal independent sets as bitmasks, or ``None`` past ``limit``.

    Bron-Kerbosch with pivoting on the complement.
    """
    n = graph.n
    full = (1 << n) - 1
    non_nbr = []
    for v in range(n):
        m = 0
        for w in graph.adjacency[v]:
            m |= 1 << w
        non_nbr.append(full & ~m & ~(1 << v))
    out: list[int] = []

    def expand(r: int, p: int, x: int) -> bool:
        if not p and not x:
            out.append(r)
            return len(out) <= limit
        if len(out) % 256 == 0 and perf_counter() > deadline:
            raise BudgetExceeded("time limit reached")
        px = p | x
        pivot = max(_bits(px), key=lambda u: (p & non_nbr[u]).bit_count())
        cand = p & ~non_nbr[pivot]
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            if not expand(r | low, p & non_nbr[v], x & non_nbr[v]):
                return False
            p &= ~low
            x |= low
            cand &= ~low
        return True

    return out if expand(0, full, 0) else None


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask &= ~low


def fractional_lower_bound(graph: Graph, deadline: float = math.inf, limit: int = 50_000) -> Fraction | None:
    """A certified lower bound on the fractional chromatic number.

    Solves the covering LP over all maximal independent sets, then rescales
    the LP dual in exact rationals so that no independent set has weight
    above 1; the dual total is then a proof. ``None`` when there are more
    than ``limit`` maximal independent sets.
    """
    from scipy.optimize import linprog

    sets = maximal_independent_sets(graph, limit, deadline)
    if not sets:
        return None
    n = graph.n
    a = np.zeros((n, len(sets)))
    for j, s in enumerate(sets):
        for v in _bits(s):
            a[v, j] = 1.0
    res = linprog(np.ones(len(sets)), A_ub=-a, b_ub=-np.ones(n), bounds=(0, None), method="highs")
    if res.status != 0:
        return None
    y = [Fraction(max(0.0, -float(m))).limit_denominator(10**6) for m in res.ineqlin.marginals]
    heaviest = max(sum((y[v] for v in _bits(s)), Fraction(0)) for s in sets)
    if heaviest <= 0:
        return None
    return sum(y, Fraction(0)) / max(heaviest, Fraction(1))


def tabu_coloring(graph: Graph, k: int, max_iters: int = 200_000, seed: int = 0, deadline: float = math.inf):
    """Seeded TabuCol search for a proper ``k``-colouring; a colour list or ``None``."""
    n = graph.n
    adj = graph.adjacency
    rng = random.Random(seed)
    col = [rng.randrange(k) for _ in range(n)]
    gamma = [[0] * k for _ in range(n)]
    for v in range(n):
        for w in adj[v]:
            gamma[v][col[w]] += 1
    conflicts = sum(gamma[v][col[v]] for v in range(n)) // 2
    best = conflicts
    tabu: dict[tuple[int, int], int] = {}
    for it in range(max_iters):
        if conflicts == 0:
            return col
        if it % 1024 == 0 and perf_counter() > deadline:
            raise BudgetExceeded("time limit reached")
        move, move_delta = None, None
        for v in range(n):
            cv = col[v]
            gv = gamma[v]
            if gv[cv] == 0:
                continue
            for c in range(k):
                if c == cv:
                    continue
                delta = gv[c] - gv[cv]
                if tabu.get((v, c), -1) >= it and conflicts + delta >= best:
                    continue
                if move_delta is None or delta < move_delta or (delta == move_delta and rng.random() < 0.5):
                    move, move_delta = (v, c), delta
        if move is None:
            continue
        v, c = move
        old = col[v]
        col[v] = c
        for w in adj[v]:
            gamma[w][old] -= 1
            gamma[w][c] += 1
        conflicts += move_delta
        best = min(best, conflicts)
        tabu[(v, old)] = it + int(0.6 * conflicts) + rng.randrange(10)
    return col if conflicts == 0 else None


def optimal_coloring(graph: Graph, budget: OracleBudget = DEFAULT_BUDGET) -> FractionalColoring:
    """A proper colouring with the minimum number of colours.

    Lower bounds: the clique number and, for graphs of at most 64 vertices,
    ``ceil(n / alpha)`` and the certified fractional bound (only computed when
    greedy DSATUR leaves a gap). The clique is precoloured ``0..omega-1``,
    which also breaks the colour symmetry.
    """
    budget.check_vertices(graph.n)
    if graph.n == 0:
        return FractionalColoring(1, 1, ())
    deadline = budget.deadline()
    csr = _csr(graph)
    clique = maximum_clique(graph, budget, deadline)
    lower = len(clique)
    clique_arr = np.asarray(clique, dtype=np.int64)
    if graph.n <= 64 and graph.num_edges:
        alpha = len(maximum_independent_set(graph, budget, deadline))
        lower = max(lower, -(-graph.n // alpha))
        # lower = n makes the kernel return its greedy DSATUR colouring
        greedy = kernels.backend.exact_coloring(*csr, clique_arr, graph.n, deadline)
        if int(greedy.max()) + 1 > lower:
            frac = fractional_lower_bound(graph, deadline)
            if frac is not None:
                lower = max(lower, math.ceil(frac))
            if int(greedy.max()) + 1 > lower:
                # a colouring meeting the lower bound is optimal as it stands
                found = tabu_coloring(graph, lower, deadline=deadline)
                if found is not None:
                    return FractionalColoring.from_colors(found, lower)
    if lower > budget.max_colours:
        raise BudgetExceeded(f"needs at least {lower} colours, budget allows {budget.max_colours}")
    colors = kernels.backend.exact_coloring(*csr, clique_arr, lower, deadline)
    return FractionalColoring.from_colors(colors.tolist())


def chromatic_number(graph: Graph, budget: OracleBudget = DEFAULT_BUDGET) -> int:
    if graph.n == 0:
        return 0
    return optimal_coloring(graph, budget).p


# clustered colourings -------------------------------------------------------


class Feasibility(enum.Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    BUDGET_EXCEEDED = "budget_exceeded"


@dataclass(frozen=True)
class FeasibilityResult:
    status: Feasibility
    k: int
    c: int
    coloring: FractionalColoring | None = None
    elapsed: float = 0.0

    @property
    def feasible(self) -> bool:
        return self.status is Feasibility.FEASIBLE

    def to_dict(self, budget: OracleBudget | None = None) -> dict:
        out = {
            "status": self.status.value,
            "k": self.k,
            "c": self.c,
            "coloring": None if self.coloring is None else self.coloring.colors,
        }
        if budget is not None:
            out["budget"] = budget.to_dict()
        return out


def _bfs_order(graph: Graph) -> list[int]:
    seen = [False] * graph.n
    order = []
    for s in range(graph.n):
        if seen[s]:
            continue
        seen[s] = True
        queue = deque([s])
        while queue:
            v = queue.popleft()
            order.append(v)
            for w in graph.adjacency[v]:
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
    return order


def clustered_feasibility(
    graph: Graph, k: int, c: int, budget: OracleBudget = DEFAULT_BUDGET
) -> FeasibilityResult:
    """Decide whether ``graph`` has a ``k``-colouring with clustering at most ``c``.

    Exhaustive backtracking in BFS order, pruning as soon as a monochromatic
    component would exceed ``c`` vertices. Colours are introduced in order.
    """
    if k < 1 or c < 1:
        raise ValueError("k and c must be >= 1")
    start = perf_counter()
    if graph.n > budget.max_vertices or k > budget.max_colours:
        return FeasibilityResult(Feasibility.BUDGET_EXCEEDED, k, c)
    if graph.n == 0:
        return FeasibilityResult(Feasibility.FEASIBLE, k, c, FractionalColoring(k, 1, ()))
    order = np.asarray(_bfs_order(graph), dtype=np.int64)
    try:
        colors = kernels.backend.clustered_search(*_csr(graph), order, k, c, start + budget.time_limit)
    except BudgetExceeded:
        return FeasibilityResult(Feasibility.BUDGET_EXCEEDED, k, c, elapsed=perf_counter() - start)
    elapsed = perf_counter() - start
    if colors is None:
        return FeasibilityResult(Feasibility.INFEASIBLE, k, c, elapsed=elapsed)
    return FeasibilityResult(Feasibility.FEASIBLE, k, c, FractionalColoring.from_colors(colors.tolist(), k), elapsed)


# Hex side-to-side property ---------------------------------------------------


@dataclass(frozen=True)
class HexLemmaResult:
    """Outcome of the exhaustive check on ``G_n^2``.

    Colour 0 must join the two sides with first coordinate ``0`` and ``n-1``;
    colour 1 the two sides with second coordinate ``0`` and ``n-1``.
    ``counterexample`` is a colour list (row-major) where neither happens.
    """

    n: int
    holds: bool
    states: int
    counterexample: tuple[int, ...] | None = None

    def to_dict(self, budget: OracleBudget | None = None) -> dict:
        out = {"n": self.n, "holds": self.holds, "states": self.states, "counterexample": self.counterexample}
        if budget is not None:
            out["budget"] = budget.to_dict()
        return out


def _hex_reach(region: np.ndarray, start: np.ndarray, n: int, not_last: int, not_first: int) -> np.ndarray:
    # flood fill inside region, batched over uint64 bitmasks
    reach = region & start
    n_ = np.uint64(n)
    one = np.uint64(1)
    diag = np.uint64(n + 1)
    nl, nf = np.uint64(not_last), np.uint64(not_first)
    while True:
        grow = (
            reach
            | (reach << n_)
            | (reach >> n_)
            | ((reach & nl) << one)
            | ((reach & nf) >> one)
            | ((reach & nl) << diag)
            | ((reach & nf) >> diag)
        ) & region
        if np.array_equal(grow, reach):
            return reach
        reach = grow


def hex_side_paths(colors, n: int) -> tuple[bool, bool]:
    """For one 2-colouring of ``G_n^2``: (colour 0 joins rows, colour 1 joins columns)."""
    mask = sum(1 << v for v, c in enumerate(colors) if c == 1)
    full = (1 << (n * n)) - 1
    ok0, ok1 = _hex_batch(np.asarray([mask], dtype=np.uint64), n, full)
    return bool(ok0[0]), bool(ok1[0])


def _hex_batch(masks: np.ndarray, n: int, full: int):
    first_row = (1 << n) - 1
    last_row = first_row << (n * (n - 1))
    first_col = sum(1 << (r * n) for r in range(n))
    last_col = first_col << (n - 1)
    not_last = full & ~last_col
    not_first = full & ~first_col
    ones = masks
    zeros = ~masks & np.uint64(full)
    r0 = _hex_reach(zeros, np.full_like(masks, first_row), n, not_last, not_first)
    r1 = _hex_reach(ones, np.full_like(masks, first_col), n, not_last, not_first)
    return (r0 & np.uint64(last_row)) != 0, (r1 & np.uint64(last_col)) != 0


def hex_lemma_check(n: int, budget: OracleBudget = DEFAULT_BUDGET, chunk: int = 1 << 18) -> HexLemmaResult:
    """Check every 2-colouring of ``G_n^2`` for a monochromatic side-to-side path."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > 7:
        raise BudgetExceeded("exhaustive Hex check supports n <= 7")
    states = 1 << (n * n)
    if states > budget.max_states:
        raise BudgetExceeded(f"2^{n * n} colourings exceed the state budget {budget.max_states}")
    deadline = budget.deadline()
    full = (1 << (n * n)) - 1
    for lo in range(0, states, chunk):
        _remaining(deadline)
        masks = np.arange(lo, min(states, lo + chunk), dtype=np.uint64)
        ok0, ok1 = _hex_batch(masks, n, full)
        bad = np.flatnonzero(~(ok0 | ok1))
        if bad.size:
            m = int(masks[bad[0]])
            return HexLemmaResult(n, False, lo + int(bad[0]) + 1, tuple((m >> v) & 1 for v in range(n * n)))
    return HexLemmaResult(n, True, states)


# derived bounds ----------------------------------------------------------------


def fractional_bounds(
    graph: Graph, proper_pq: FractionalColoring | None = None, budget: OracleBudget = DEFAULT_BUDGET
) -> tuple[Fraction, Fraction]:
    """``(|V|/alpha, p/q)`` bracketing the fractional chromatic number.

    The upper value comes from ``proper_pq`` when given (it must be proper on
    ``graph``), otherwise from the chromatic number.
    """
    if graph.n == 0:
        return Fraction(0), Fraction(0)
    lower = Fraction(graph.n, independence_number(graph, budget))
    if proper_pq is not None:
        report = verify_coloring(graph, proper_pq)
        if not report.proper:
            raise ColoringError(
                f"supplied colouring is not proper: colour {report.witness[0]} on {list(report.witness[1])}"
            )
        upper = Fraction(proper_pq.p, proper_pq.q)
    else:
        upper = Fraction(chromatic_number(graph, budget))
    return lower, upper


def shannon_lower_bound(graph: Graph, d: int, budget: OracleBudget = DEFAULT_BUDGET) -> float:
    """``alpha(G^d)^(1/d)`` for the ``d``-th strong power, a lower bound on the Shannon capacity."""
    if d < 1:
        raise ValueError("d must be >= 1")
    budget.check_vertices(graph.n**d, f"strong power of order {d}")
    alpha = independence_number(strong_power(graph, d), budget)
    if d == 2:
        return math.sqrt(alpha)
    return alpha ** (1.0 / d)
