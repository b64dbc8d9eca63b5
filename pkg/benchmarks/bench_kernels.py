"""Numba kernels against their numpy fallbacks on realistic inputs.

Run: python benchmarks/bench_kernels.py [--runs N]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from bogomolov import _kernels, catalog
from bogomolov.cohomology import _system, schur_multiplier


def _time(fn, runs):
    best = float("inf")
    for _ in range(runs):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _cases():
    rng = np.random.default_rng(7)
    G = catalog.named("A6")
    E = G.enumeration()
    mul = E.table()
    n = E.size
    M = schur_multiplier(G)
    gamma = M.generator_cocycles[0]
    table = np.ascontiguousarray(gamma.table)
    m = gamma.modulus
    sysd = _system(G)
    f = sysd.f_vector(table).reshape(sysd.N, sysd.S)
    tree = sysd.tree
    A = rng.integers(-3, 4, size=(180, 140)) * (rng.random((180, 140)) < 0.05)
    yield "local_snf 180x140 mod 2^5", lambda b: _kernels.local_snf(A, 2, 5, True, backend=b)
    yield f"cocycle_defects |G|={n}", lambda b: _kernels.cocycle_defects(table, mul, m, backend=b)
    yield f"expand_cocycle |G|={n}", lambda b: _kernels.expand_cocycle(
        f, mul, tree.parent, tree.pgen, tree.order, m, backend=b)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--runs", type=int, default=5)
    args = parser.parse_args()
    if not _kernels.HAS_NUMBA:
        print("numba not available; only the numpy backend can run")
    print(f"{'kernel':<32} {'numpy (s)':>10} {'numba (s)':>10} {'speedup':>8}")
    for label, fn in _cases():
        t_np = _time(lambda: fn("numpy"), args.runs)
        if _kernels.HAS_NUMBA:
            fn("numba")  # compile
            t_nb = _time(lambda: fn("numba"), args.runs)
            print(f"{label:<32} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>8.1f}")
        else:
            print(f"{label:<32} {t_np:>10.4f} {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
