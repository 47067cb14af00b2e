import csv
import io
import json

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strongprod import constructions as cons
from strongprod.coloring import verify_coloring
from strongprod.graph import complete, grid_product, path
from strongprod.percolation import (
    PercolationRun,
    cluster_statistics,
    percolation_sweep,
    sample_percolation,
    trial_uniforms,
)

from conftest import graphs


def test_full_density_keeps_everything():
    g = grid_product(5, 2)
    assert sample_percolation(g, 1.0, seed=3) == list(range(25))
    sweep = percolation_sweep(g, [1.0], 5, seed=0, threshold=25)
    assert set(sweep.runs[0].max_clusters) == {25}
    assert sweep.bound is None


def test_density_range():
    with pytest.raises(ValueError):
        sample_percolation(path(3), 0.0)
    with pytest.raises(ValueError):
        sample_percolation(path(3), 1.5)


def test_seed_determinism():
    g = path(200)
    assert sample_percolation(g, 0.4, seed=9) == sample_percolation(g, 0.4, seed=9)
    assert sample_percolation(g, 0.4, seed=9) != sample_percolation(g, 0.4, seed=10)


def test_mean_size_within_three_sigma():
    n, x, trials = 50, 0.02, 10_000
    sizes = np.array([len(sample_percolation(path(n), x, seed=1, trial=t)) for t in range(trials)])
    sigma = np.sqrt(n * x * (1 - x) / trials)
    assert abs(sizes.mean() - n * x) < 3 * sigma


def test_cluster_statistics_examples():
    assert cluster_statistics(path(4), []) == (0, {})
    assert cluster_statistics(complete(6), range(6)) == (6, {6: 1})
    assert cluster_statistics(path(7), [0, 1, 3, 5, 6]) == (2, {1: 1, 2: 2})
    with pytest.raises(ValueError):
        cluster_statistics(path(3), [5])


def test_colour_class_clusters_bounded_by_clustering():
    g = grid_product(6, 3)
    f = cons.hex_grid_coloring(6, 3)
    c = verify_coloring(g, f).clustering
    for colour in range(f.p):
        assert cluster_statistics(g, f.colour_class(colour))[0] <= c


@settings(max_examples=40)
@given(graphs(max_n=10), st.integers(0, 1000), st.sets(st.floats(0.01, 1.0), min_size=1, max_size=4))
def test_cluster_statistics_matches_networkx(g, seed, xs):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    for x in xs:
        s = sample_percolation(g, x, seed)
        sizes = sorted(len(c) for c in nx.connected_components(h.subgraph(s)))
        best, hist = cluster_statistics(g, s)
        assert best == (sizes[-1] if sizes else 0)
        assert sum(k * v for k, v in hist.items()) == len(s)


@settings(max_examples=30)
@given(graphs(max_n=12), st.integers(0, 1000), st.lists(st.floats(0.01, 1.0), min_size=2, max_size=5))
def test_coupled_monotonicity(g, seed, xs):
    xs = sorted(xs)
    for t in range(3):
        subsets = [set(sample_percolation(g, x, seed, t)) for x in xs]
        assert all(a <= b for a, b in zip(subsets, subsets[1:]))
    sweep = percolation_sweep(g, xs, 3, seed)
    for t in range(3):
        col = [r.max_clusters[t] for r in sweep.runs]
        assert col == sorted(col)


def test_sweep_estimate():
    g = grid_product(20, 2)
    sweep = percolation_sweep(g, [0.05, 0.1, 0.6, 1.0], 200, seed=4, threshold=30)
    assert sweep.label == "ESTIMATE"
    assert sweep.bound_density in (0.05, 0.1)
    assert sweep.bound == pytest.approx(1 / sweep.bound_density)
    assert sweep.bound >= 1
    means = [r.mean for r in sweep.runs]
    assert means == sorted(means)


def test_estimate_never_below_one():
    sweep = percolation_sweep(path(3), [1.0], 2, seed=0, threshold=100)
    assert sweep.bound == 1.0


def test_sparse_strong_grid_quantile():
    # 99% quantile of the largest cluster of ⊠_2 P_30 at x = 0.1 over 1000
    # trials; the value 12 is confirmed by an independent networkx count
    sweep = percolation_sweep(grid_product(30, 2), [0.1], 1000, seed=0)
    run = sweep.runs[0]
    assert run.quantile_value == 12
    assert run.mean < 6


def test_threads_do_not_change_results():
    g = grid_product(12, 2)
    a = percolation_sweep(g, [0.2, 0.5], 40, seed=2, threads=1)
    b = percolation_sweep(g, [0.2, 0.5], 40, seed=2, threads=4)
    assert a == b


def test_outputs_recomputable():
    g = grid_product(8, 2)
    sweep = percolation_sweep(g, [0.3, 0.6], 25, seed=1, threshold=10)
    rows = list(csv.DictReader(io.StringIO(sweep.to_csv())))
    assert len(rows) == 50 and rows[0].keys() == {"density", "trial", "max_cluster"}
    doc = json.loads(sweep.to_json())
    for run, summary in zip(sweep.runs, doc["runs"]):
        values = [int(r["max_cluster"]) for r in rows if float(r["density"]) == run.density]
        assert summary["mean_max_cluster"] == pytest.approx(np.mean(values))
        assert summary["quantile_max_cluster"] == int(np.quantile(values, 0.99, method="higher"))
    assert doc["estimate"]["label"] == "ESTIMATE"


def test_run_validation():
    with pytest.raises(ValueError):
        PercolationRun(0.5, 2, 0, (1,))
    with pytest.raises(ValueError):
        percolation_sweep(path(3), [0.5], 0)


def test_trial_uniforms_stream():
    assert np.array_equal(trial_uniforms(10, 3, 1), trial_uniforms(10, 3, 1))
    assert not np.array_equal(trial_uniforms(10, 3, 1), trial_uniforms(10, 3, 2))
