"""Acceptance suite: one test per criterion, each timed against its limit.

Run with ``pytest tests/test_acceptance.py`` (a PASS/FAIL line per criterion is
printed in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import itertools
import math
import random
import sys
import time
from decimal import Decimal, getcontext
from fractions import Fraction

import networkx as nx
import numpy as np

from strongprod import constructions as cons
from strongprod import graph as gr
from strongprod import oracles as orc
from strongprod import percolation as perc
from strongprod.coloring import FractionalColoring, verify_coloring
from strongprod.graph import Graph

RESULTS: list[tuple[int, str, bool, float, float, str]] = []


def record(num: int, title: str, limit: float):
    """Time the wrapped check, store a result line and fail on error or overrun."""

    def wrap(fn):
        def test():
            t0 = time.perf_counter()
            detail, ok = "", False
            try:
                detail = fn() or ""
                ok = True
            except AssertionError as exc:
                detail = str(exc).splitlines()[0] if str(exc) else "assertion failed"
            elapsed = time.perf_counter() - t0
            if ok and elapsed >= limit:
                ok, detail = False, f"over time limit ({elapsed:.1f}s >= {limit:g}s)"
            RESULTS.append((num, title, ok, elapsed, limit, detail))
            assert ok, f"criterion {num}: {detail}"

        test.__name__ = fn.__name__
        test.__doc__ = fn.__doc__
        return test

    return wrap


def format_result(row) -> str:
    num, title, ok, elapsed, limit, detail = row
    line = f"{'PASS' if ok else 'FAIL'} [{num:2d}] {title} ({elapsed:.2f}s / {limit:g}s)"
    return f"{line}: {detail}" if detail else line


# independent helpers ------------------------------------------------------------


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def nx_clustering(g: Graph, f: FractionalColoring) -> int:
    h = to_nx(g)
    best = 0
    for colour in range(f.p):
        members = [v for v in range(g.n) if colour in f.assign[v]]
        for comp in nx.connected_components(h.subgraph(members)):
            best = max(best, len(comp))
    return best


def nx_defect(g: Graph, f: FractionalColoring) -> int:
    h = to_nx(g)
    best = 0
    for colour in range(f.p):
        sub = h.subgraph([v for v in range(g.n) if colour in f.assign[v]])
        best = max(best, max((d for _, d in sub.degree), default=0))
    return best


def sequence_consistent(order, cyclic: bool) -> bool:
    pairs = list(zip(order, order[1:]))
    if cyclic:
        pairs.append((order[-1], order[0]))
    for a, b in pairs:
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                if i != j and x == y:
                    return False
    return True


def longest_run(order, cyclic: bool) -> int:
    """Largest number of consecutive path/cycle vertices sharing a colour."""
    n = len(order)
    sets = [set(t) for t in order]
    best = 0
    for colour in set().union(*sets):
        has = [colour in s for s in sets]
        if cyclic and all(has):
            return n
        seq = has + has if cyclic else has
        run = 0
        for h in seq:
            run = run + 1 if h else 0
            best = max(best, min(run, n))
    return best


def random_graph(rng: random.Random, n: int, density: float | None = None) -> Graph:
    d = rng.random() if density is None else density
    return Graph.from_edges(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < d])


def random_pq(rng: random.Random, n: int, p: int, q: int) -> FractionalColoring:
    return FractionalColoring.from_sets(p, [rng.sample(range(p), q) for _ in range(n)])


# criteria -------------------------------------------------------------------------

K3_REFERENCE = [
    (0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3), (1, 2, 0), (1, 3, 0), (2, 3, 0),
    (2, 3, 1), (2, 0, 1), (3, 0, 1), (3, 0, 2), (3, 1, 2), (0, 1, 2),
]


@record(1, "consistent path colourings, k 1..6, n 1..500", 5)
def test_criterion_01_consistent_paths():
    """Every path colouring is consistent with clustering <= k; k=3 prefix matches."""
    checked = 0
    for k in range(1, 7):
        for n in range(1, 501):
            c = cons.consistent_path_coloring(n, k)
            assert (c.p, c.q) == (k + 1, k), f"k={k} n={n}: palette ({c.p}:{c.q})"
            assert sequence_consistent(c.order, False), f"k={k} n={n}: not consistent"
            run = longest_run(c.order, False)
            assert run <= k, f"k={k} n={n}: clustering {run} > {k}"
            checked += 1
    prefix = cons.consistent_path_coloring(13, 3).order
    assert list(prefix) == K3_REFERENCE, f"k=3 prefix {prefix} differs from the reference sequence"
    return f"{checked} colourings, k=3 prefix of 13 matches the reference"


@record(2, "consistent cycle colourings, k 1..5, 30 lengths each", 5)
def test_criterion_02_consistent_cycles():
    """Cycle colourings are consistent with clustering <= k^2 + 3k - 1."""
    worst = {}
    for k in range(1, 6):
        bound = k * k + 3 * k - 1
        assert cons.cycle_clustering_bound(k) == bound
        start = k * (k + 1) + 1
        for n in range(start, start + 30):
            c = cons.consistent_cycle_coloring(n, k)
            assert sequence_consistent(c.order, True), f"k={k} n={n}: not consistent"
            run = longest_run(c.order, True)
            assert run <= bound, f"k={k} n={n}: clustering {run} > {bound}"
            report = verify_coloring(gr.cycle(n), c.as_fractional())
            assert report.clustering == run, f"k={k} n={n}: verifier {report.clustering} vs {run}"
            worst[k] = max(worst.get(k, 0), run)
    return "max clustering per k " + ", ".join(f"{k}:{v}/{k * k + 3 * k - 1}" for k, v in worst.items())


@record(3, "hex grid colourings, d 1..4, n 2..8", 30)
def test_criterion_03_hex_grid():
    """(d+1) colours and clustering <= d! on G_n^d."""
    worst = {}
    for d in range(1, 5):
        for n in range(2, 9):
            g = gr.generate_hex_grid(n, d)
            f = cons.hex_grid_coloring(n, d)
            assert (f.p, f.q) == (d + 1, 1), f"n={n} d={d}: palette ({f.p}:{f.q})"
            clustering = verify_coloring(g, f).clustering
            if g.n <= 1000:
                ref = nx_clustering(g, f)
                assert ref == clustering, f"n={n} d={d}: verifier {clustering} vs networkx {ref}"
            assert clustering <= math.factorial(d), f"n={n} d={d}: clustering {clustering} > {math.factorial(d)}"
            worst[d] = max(worst.get(d, 0), clustering)
    return "max clustering per d " + ", ".join(f"{d}:{v}/{math.factorial(d)}" for d, v in worst.items())


@record(4, "Hex lemma exhaustive check, n 2..4, d=2", 60)
def test_criterion_04_hex_lemma():
    """Every 2-colouring of G_n^2 has a side-to-side path; 2 colours force clustering >= n."""
    notes = []
    for n in (2, 3, 4):
        res = orc.hex_lemma_check(n)
        assert res.holds, f"n={n}: counterexample {res.counterexample}"
        assert res.states == 2 ** (n * n)
        g = gr.generate_hex_grid(n, 2)
        low = orc.clustered_feasibility(g, 2, n - 1)
        assert low.status is orc.Feasibility.INFEASIBLE, f"n={n}: 2 colours, clustering {n - 1}: {low.status}"
        high = orc.clustered_feasibility(g, 2, n)
        assert high.feasible, f"n={n}: 2 colours, clustering {n}: {high.status}"
        three = verify_coloring(g, cons.hex_grid_coloring(n, 2)).clustering
        assert three <= 2
        notes.append(f"n={n}: {res.states} colourings")
    return "; ".join(notes)


@record(5, "constants of C5 x C5 and sqrt(5) capacity bound", 60)
def test_criterion_05_constants():
    """alpha = chi = 5 on C5 strong C5, fractional bounds (5, 5), sqrt(5) to 1e-12."""
    c5 = gr.cycle(5)
    g = gr.strong_product(c5, c5)
    alpha = orc.independence_number(g)
    chi = orc.chromatic_number(g)
    assert alpha == 5, f"alpha = {alpha}"
    assert chi == 5, f"chi = {chi}"
    # independent check of alpha: the set {(i, 2i mod 5)} is independent and networkx agrees
    ref_alpha = max(len(c) for c in nx.find_cliques(nx.complement(to_nx(g))))
    assert ref_alpha == 5
    bounds = orc.fractional_bounds(g)
    assert bounds == (Fraction(5), Fraction(5)), f"fractional bounds {bounds}"
    getcontext().prec = 50
    exact = Decimal(5).sqrt()
    value = orc.shannon_lower_bound(c5, 2)
    err = abs(Decimal(value) - exact)
    assert err <= Decimal("1e-12"), f"shannon bound {value} off by {err}"
    return f"alpha=5, chi=5, bounds=(5,5), |sqrt err|={float(err):.1e}"


@record(6, "tensor clustering multiplicativity, 200 pairs", 30)
def test_criterion_06_tensor():
    """Tensor clustering <= product of factor clusterings; equality on P4 AABB squared."""
    rng = random.Random(6)
    equal = 0
    for i in range(200):
        factors = []
        for _ in range(2):
            n = rng.randint(1, 12)
            p = rng.randint(1, 4)
            q = rng.randint(1, p)
            g = random_graph(rng, n)
            factors.append((g, random_pq(rng, n, p, q)))
        (g, a), (h, b) = factors
        t = cons.tensor_coloring(factors)
        prod = gr.strong_product(g, h)
        ca, cb = nx_clustering(g, a), nx_clustering(h, b)
        ct = nx_clustering(prod, t)
        assert verify_coloring(prod, t).clustering == ct, f"pair {i}: verifier disagrees with networkx"
        assert ct <= ca * cb, f"pair {i}: clustering {ct} > {ca}*{cb}"
        equal += ct == ca * cb
    p4 = gr.path(4)
    aabb = FractionalColoring.from_colors([0, 0, 1, 1])
    t = cons.tensor_coloring([(p4, aabb), (p4, aabb)])
    ct = nx_clustering(gr.strong_product(p4, p4), t)
    assert ct == 4, f"P4 AABB squared has clustering {ct}, expected 2*2"
    return f"200 pairs within bound, {equal} random pairs attain equality, P4 AABB^2 = 4"


@record(7, "pigeonhole combine coverage, 100 instances", 10)
def test_criterion_07_pigeonhole():
    """Every product vertex shares >= q + r - p colours; combined colouring stays clustered."""
    rng = random.Random(7)
    for i in range(100):
        p = rng.randint(2, 7)
        q = rng.randint(1, p)
        r = rng.randint(max(1, p - q + 1), p)
        g, h = random_graph(rng, rng.randint(1, 8)), random_graph(rng, rng.randint(1, 8))
        f, gc = random_pq(rng, g.n, p, q), random_pq(rng, h.n, p, r)
        cover = cons.pigeonhole_coverage(f, gc)
        for u, v in itertools.product(range(g.n), range(h.n)):
            shared = set(f.assign[u]) & set(gc.assign[v])
            assert tuple(sorted(shared)) == cover[u * h.n + v]
            assert len(shared) >= q + r - p, f"instance {i}: vertex ({u},{v}) shares {len(shared)}"
        comb = cons.pigeonhole_combine(g, f, h, gc)
        assert (comb.p, comb.q) == (p, q + r - p)
        prod = gr.strong_product(g, h)
        assert nx_clustering(prod, comb) <= nx_clustering(g, f) * nx_clustering(h, gc), f"instance {i}"
    return "100 instances"


@record(8, "MultiplyTree and TreeProduct clustering bounds, 50 + 50", 60)
def test_criterion_08_trees():
    """Clustering <= c * D^(k-1) for G x T and <= D^(d choose 2) for tree products."""
    rng = random.Random(8)
    for i in range(50):
        n = rng.randint(1, 6)
        g = random_graph(rng, n)
        k = rng.randint(1, 3)
        f = FractionalColoring.from_colors([rng.randrange(k) for _ in range(n)], k)
        dmax = rng.randint(2, 4)
        tree = gr.random_bounded_degree_tree(rng.randint(3, 16), dmax, seed=rng.randrange(10**6))
        delta = tree.graph.max_degree
        c = nx_clustering(g, f)
        col = cons.multiply_tree(g, f, tree)
        assert col.p == k + 1
        got = nx_clustering(gr.strong_product(g, tree.graph), col)
        bound = c * delta ** (k - 1)
        assert got <= bound, f"multiply_tree {i}: clustering {got} > {c}*{delta}^{k - 1}"
    for i in range(50):
        d = rng.randint(1, 3)
        dmax = rng.randint(2, 4)
        trees = [
            gr.random_bounded_degree_tree(rng.randint(3, 9), dmax, seed=rng.randrange(10**6)) for _ in range(d)
        ]
        delta = max([t.graph.max_degree for t in trees[1:]] + [2])
        col = cons.tree_product_coloring(trees)
        assert col.p == d + 1
        prod = gr.strong_product_all([t.graph for t in trees])
        got = verify_coloring(prod, col).clustering
        if prod.n <= 400:
            assert nx_clustering(prod, col) == got
        bound = delta ** math.comb(d, 2)
        assert got <= bound, f"tree_product {i}: clustering {got} > {delta}^C({d},2)"
    return "50 + 50 instances within bounds"


@record(9, "defective tensor product, 100 instances", 10)
def test_criterion_09_defect():
    """Defect of a tensor colouring <= prod(1 + c_i) - 1."""
    rng = random.Random(9)
    for i in range(100):
        factors = []
        for _ in range(rng.randint(2, 3)):
            n = rng.randint(1, 7)
            k = rng.randint(1, 3)
            factors.append((random_graph(rng, n), FractionalColoring.from_colors([rng.randrange(k) for _ in range(n)], k)))
        t = cons.tensor_coloring(factors)
        prod = gr.strong_product_all([g for g, _ in factors])
        got = nx_defect(prod, t)
        assert verify_coloring(prod, t).defect == got
        bound = math.prod(1 + nx_defect(g, f) for g, f in factors) - 1
        assert got <= bound, f"instance {i}: defect {got} > {bound}"
    return "100 instances"


def _connected_atlas(max_n: int):
    return [g for g in nx.graph_atlas_g() if 1 <= g.number_of_nodes() <= max_n and nx.is_connected(g)]


def _from_nx(h: nx.Graph) -> Graph:
    idx = {v: i for i, v in enumerate(h.nodes)}
    return Graph.from_edges(h.number_of_nodes(), [(idx[u], idx[v]) for u, v in h.edges])


@record(10, "oracle cross-properties on small graphs", 300)
def test_criterion_10_oracle_identities():
    """Vesztergombi exhaustively on connected graphs <= 6 vertices; KM94 and Sabidussi on 500 pairs each."""
    atlas = [_from_nx(h) for h in _connected_atlas(6)]
    chi = {}

    def chrom(g: Graph) -> int:
        key = (g.n, tuple(g.edges()))
        if key not in chi:
            chi[key] = orc.chromatic_number(g)
        return chi[key]

    k2 = gr.complete(2)
    with_edge = [g for g in atlas if g.num_edges]
    for g in with_edge:
        lhs = chrom(gr.strong_product(g, k2))
        assert lhs >= chrom(g) + 2, f"Vesztergombi fails on {list(g.edges())}"
    rng = random.Random(10)
    for _ in range(500):
        g, h = rng.choice(with_edge), rng.choice(atlas)
        lhs = chrom(gr.strong_product(g, h))
        rhs = chrom(g) + 2 * orc.clique_number(h) - 2
        assert lhs >= rhs, f"KM94 fails: G={list(g.edges())} H={list(h.edges())}"
    for _ in range(500):
        g, h = rng.choice(atlas), rng.choice(atlas)
        lhs = chrom(gr.cartesian_product(g, h))
        assert lhs == max(chrom(g), chrom(h)), f"Sabidussi fails: G={list(g.edges())} H={list(h.edges())}"
    # spot-check the oracle itself against brute force on the atlas
    for g in atlas:
        h = to_nx(g)
        k = chrom(g)
        assert any(
            all(col[u] != col[v] for u, v in h.edges) for col in itertools.product(range(k), repeat=g.n)
        )
        if k > 1:
            assert not any(
                all(col[u] != col[v] for u, v in h.edges) for col in itertools.product(range(k - 1), repeat=g.n)
            )
    return f"Vesztergombi on {len(with_edge)} graphs, KM94 and Sabidussi on 500 pairs each"


@record(11, "star clustering tightness, n <= 8", 5)
def test_criterion_11_star():
    """K_{1,n} needs clustering n+1 with one colour and admits clustering 1 with two."""
    for n in range(1, 9):
        s = gr.star(n)
        no = orc.clustered_feasibility(s, 1, n)
        yes = orc.clustered_feasibility(s, 1, n + 1)
        two = orc.clustered_feasibility(s, 2, 1)
        assert no.status is orc.Feasibility.INFEASIBLE, f"n={n}: k=1, c={n} gave {no.status}"
        assert yes.feasible, f"n={n}: k=1, c={n + 1} gave {yes.status}"
        assert two.feasible, f"n={n}: k=2, c=1 gave {two.status}"
        assert verify_coloring(s, two.coloring).clustering == 1
    return "n = 1..8"


@record(12, "percolation coupling, full density and estimator", 30)
def test_criterion_12_percolation():
    """Nested samples per trial, x=1 keeps everything, bound estimate >= 1."""
    c5 = gr.cycle(5)
    graphs = [gr.grid_product(12, 2), gr.strong_product(c5, c5), gr.generate_hex_grid(6, 3), gr.path(40)]
    densities = [0.05, 0.1, 0.2, 0.3, 0.45, 0.6, 0.8, 0.95, 1.0]
    estimates = []
    for g in graphs:
        for seed in range(5):
            for trial in range(20):
                prev = set()
                for x in densities:
                    cur = set(perc.sample_percolation(g, x, seed, trial))
                    assert prev <= cur, f"not nested at x={x} seed={seed} trial={trial}"
                    prev = cur
                assert prev == set(range(g.n)), "x=1 must keep every vertex"
            sweep = perc.percolation_sweep(g, densities, 20, seed=seed, threshold=1 + seed)
            per_trial = np.array([run.max_clusters for run in sweep.runs])
            assert (np.diff(per_trial, axis=0) >= 0).all(), "max cluster not monotone in density"
            if nx.is_connected(to_nx(g)):
                assert set(sweep.runs[-1].max_clusters) == {g.n}
            if sweep.bound is not None:
                assert sweep.bound >= 1, f"estimate {sweep.bound} < 1"
                estimates.append(sweep.bound)
            assert sweep.label == "ESTIMATE"
    return f"{len(estimates)} estimates, all >= 1"


CRITERIA = [obj for name, obj in sorted(globals().items()) if name.startswith("test_criterion_")]


if __name__ == "__main__":
    failed = 0
    for fn in CRITERIA:
        try:
            fn()
        except AssertionError:
            failed += 1
        print(format_result(RESULTS[-1]), flush=True)
    sys.exit(1 if failed else 0)
