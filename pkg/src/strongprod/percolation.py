"""Bernoulli site percolation with coupled densities."""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .graph import Graph


def _check_density(x: float) -> None:
    if not 0 < x <= 1:
        raise ValueError(f"density must be in (0, 1], got {x}")


def trial_uniforms(n: int, seed: int | None, trial: int = 0) -> np.ndarray:
    """One uniform variate per vertex; the stream depends only on ``(seed, trial)``."""
    entropy = [0 if seed is None else int(seed), int(trial)]
    return np.random.default_rng(entropy).random(n)


def sample_percolation(graph: Graph, x: float, seed: int | None = None, trial: int = 0) -> list[int]:
    """Keep each vertex independently with probability ``x``.

    Vertex ``v`` is kept when its uniform variate is below ``x``, so samples
    for different ``x`` with the same ``(seed, trial)`` are nested.
    """
    _check_density(x)
    return np.flatnonzero(trial_uniforms(graph.n, seed, trial) < x).tolist()


def _max_cluster(graph: Graph, mask: np.ndarray) -> int:
    if not mask.any():
        return 0
    labels = kernels.backend.mask_components(*graph.csr, mask.astype(np.uint8))
    labels = labels[labels >= 0]
    return int(np.bincount(labels).max())


def cluster_statistics(graph: Graph, subset) -> tuple[int, dict[int, int]]:
    """``(largest cluster, {size: count})`` for the subgraph induced by ``subset``."""
    mask = np.zeros(graph.n, dtype=np.uint8)
    members = list(subset)
    if members:
        if min(members) < 0 or max(members) >= graph.n:
            raise ValueError("subset contains a vertex outside the graph")
        mask[members] = 1
    if not members:
        return 0, {}
    labels = kernels.backend.mask_components(*graph.csr, mask)
    sizes = np.bincount(labels[labels >= 0])
    sizes = sizes[sizes > 0]
    hist: dict[int, int] = {}
    for s in sizes.tolist():
        hist[s] = hist.get(s, 0) + 1
    return int(sizes.max()), dict(sorted(hist.items()))


def _quantile(values: Sequence[int], q: float) -> int:
    return int(np.quantile(np.asarray(values), q, method="higher"))


@dataclass(frozen=True)
class PercolationRun:
    """Per-trial largest cluster sizes at one density.

    ``mean`` and ``quantile_value`` are derived from ``max_clusters``.
    """

    density: float
    trials: int
    seed: int | None
    max_clusters: tuple[int, ...]
    quantile: float = 0.99

    def __post_init__(self) -> None:
        if self.trials < 1 or len(self.max_clusters) != self.trials:
            raise ValueError("need trials >= 1 and one max cluster per trial")

    @property
    def mean(self) -> float:
        return float(np.mean(self.max_clusters))

    @property
    def quantile_value(self) -> int:
        return _quantile(self.max_clusters, self.quantile)

    def summary(self) -> dict:
        return {
            "density": self.density,
            "trials": self.trials,
            "mean_max_cluster": self.mean,
            "quantile": self.quantile,
            "quantile_max_cluster": self.quantile_value,
            "max_max_cluster": max(self.max_clusters),
        }


@dataclass(frozen=True)
class SweepResult:
    """A density sweep plus the heuristic fractional bound.

    ``bound`` is ``1/x`` for the largest density ``x`` whose max-cluster
    quantile stays strictly below ``threshold``; it is a Monte Carlo
    ESTIMATE, not a certificate. ``None`` when no density qualifies.
    """

    runs: tuple[PercolationRun, ...]
    threshold: int | None
    bound: float | None = None
    bound_density: float | None = None
    label: str = field(default="ESTIMATE")

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["density", "trial", "max_cluster"])
        for run in self.runs:
            for t, m in enumerate(run.max_clusters):
                writer.writerow([repr(run.density), t, m])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "runs": [r.summary() for r in self.runs],
            "estimate": {
                "label": self.label,
                "threshold": self.threshold,
                "density": self.bound_density,
                "bound": self.bound,
            },
        }
        return json.dumps(doc, indent=2, sort_keys=True)


def _trial_max_clusters(graph: Graph, densities: Sequence[float], seed, trial: int) -> list[int]:
    u = trial_uniforms(graph.n, seed, trial)
    return [_max_cluster(graph, u < x) for x in densities]


def percolation_sweep(
    graph: Graph,
    densities: Sequence[float],
    trials: int,
    seed: int | None = 0,
    threshold: int | None = None,
    quantile: float = 0.99,
    threads: int | None = None,
) -> SweepResult:
    """Largest-cluster distribution per density with coupled samples.

    Trial ``t`` draws one uniform per vertex from ``(seed, t)`` and reuses it
    for every density, so the kept sets are nested in ``x``. Trials run on up
    to ``threads`` workers (default ``STRONGPROD_THREADS``); results are
    assembled in trial order.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 < quantile <= 1:
        raise ValueError("quantile must be in (0, 1]")
    densities = [float(x) for x in densities]
    for x in densities:
        _check_density(x)
    workers = min(trials, threads or kernels.thread_count())
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda t: _trial_max_clusters(graph, densities, seed, t), range(trials)))
    else:
        rows = [_trial_max_clusters(graph, densities, seed, t) for t in range(trials)]
    runs = tuple(
        PercolationRun(x, trials, seed, tuple(row[i] for row in rows), quantile) for i, x in enumerate(densities)
    )
    bound = bound_density = None
    if threshold is not None:
        ok = [r.density for r in runs if r.quantile_value < threshold]
        if ok:
            bound_density = max(ok)
            bound = max(1.0, 1.0 / bound_density)
    return SweepResult(runs, threshold, bound, bound_density)
