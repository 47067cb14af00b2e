"""Compare the compiled and pure-Python kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Every workload runs on each available backend; outputs are checked to be
identical before timings are reported.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from strongprod import constructions as cons
from strongprod import graph as gr
from strongprod.kernels import available_backends


def _workloads():
    grid = gr.grid_product(60, 2)
    f = cons.hex_grid_coloring(60, 2)
    cptr, cols = f.slots()
    big = gr.grid_product(14, 3)
    fb = cons.hex_grid_coloring(14, 3)
    bptr, bcols = fb.slots()
    rng = np.random.default_rng(0)
    mask = (rng.random(big.n) < 0.3).astype(np.uint8)
    c5 = gr.cycle(5)
    c55 = gr.strong_product(c5, c5)
    c555 = gr.strong_product(c55, c5)
    hexg = gr.generate_hex_grid(4, 2)
    order = np.arange(hexg.n, dtype=np.int64)
    inf = float("inf")
    return {
        "slot_components grid60^2": lambda k: k.slot_components(*grid.csr, cptr, cols),
        "slot_components grid14^3": lambda k: k.slot_components(*big.csr, bptr, bcols),
        "mask_components grid14^3": lambda k: k.mask_components(*big.csr, mask),
        "max_clique complement(C5^3)": lambda k: k.max_clique(*c555.complement().csr, inf),
        "exact_coloring C5^2": lambda k: k.exact_coloring(*c55.csr, np.array([0, 1, 5, 6]), 4, inf),
        "clustered_search hex4 k=2 c=3": lambda k: k.clustered_search(*hexg.csr, order, 2, 3, inf),
    }


def _same(a, b) -> bool:
    if a is None or b is None:
        return a is b
    if isinstance(a, tuple):
        return all(np.array_equal(x, y) for x, y in zip(a, b))
    return np.array_equal(a, b)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    backends = available_backends()
    print(f"backends: {', '.join(backends)}")
    header = f"{'workload':34s}" + "".join(f"{name:>12s}" for name in backends)
    if len(backends) > 1:
        header += f"{'speedup':>10s}"
    print(header)
    for label, work in _workloads().items():
        times, outputs = {}, {}
        for name, mod in backends.items():
            best = float("inf")
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                outputs[name] = work(mod)
                best = min(best, time.perf_counter() - t0)
            times[name] = best
        results = list(outputs.values())
        if not all(_same(results[0], r) for r in results[1:]):
            print(f"{label}: backends disagree")
            return 1
        row = f"{label:34s}" + "".join(f"{times[n] * 1e3:10.2f}ms" for n in backends)
        if "cython" in times and "python" in times:
            row += f"{times['python'] / max(times['cython'], 1e-9):9.1f}x"
        print(row)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
