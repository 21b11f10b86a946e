"""Time the numba and numpy flavours of every kernel on benchmark-dataset-sized inputs.

    python benchmarks/bench_kernels.py [--repeat N]

Numba compilation is excluded (one warm-up call per kernel).
"""
import argparse
import time

import numpy as np

from ppsonet import kernels
from ppsonet.lowdisc import direction_numbers

# (p, q, r, training samples) for Iris, Wine, Banknote and Breast Cancer at q = 2p + 1
TOPOLOGIES = {
    "iris": (4, 9, 3, 120),
    "wine": (13, 27, 3, 142),
    "banknote": (4, 9, 2, 1098),
    "cancer": (30, 61, 2, 455),
}


def _time(func, args, repeat):
    func(*args)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        func(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def cases(rng):
    for name, (p, q, r, s) in TOPOLOGIES.items():
        dim = p * q + q * r + q + r
        pos = rng.uniform(-10, 10, (50, dim))
        x = rng.uniform(-1, 1, (s, p))
        t = np.eye(r)[rng.integers(0, r, s)]
        yield "population_mse", name, (pos, p, q, r, x, t)

    for dim in (10, 4030):
        yield "sobol_ints", f"{dim}d x 51", (direction_numbers(dim), 1, 51)

    for dim in (43, 2015):
        pos = rng.uniform(-10, 10, (50, dim))
        mass = rng.dirichlet(np.ones(50))
        active = np.argsort(-mass)[:40].astype(np.int64)
        weights = rng.random((50, 40))
        yield "gsa_acceleration", f"50 x {dim}", (pos, mass, active, weights, 0.5, 1e-12)

    w, ps = np.meshgrid(np.linspace(-0.5, 1.5, 100), np.linspace(0, 4, 100), indexing="ij")
    yield "sweep", "100x100 grid, 2000 steps", (w, ps, 1.0, 1.0, 2000, 1e12)
    yield "trajectory", "500 steps", (0.7, 1.5, 1.0, 1.0, 500, 1e12)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(0)
    print(f"{'kernel':<18} {'case':<26} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for kernel, label, call_args in cases(rng):
        numpy_impl, numba_impl = kernels.IMPLEMENTATIONS[kernel]
        t_np = _time(numpy_impl, call_args, args.repeat)
        t_nb = _time(numba_impl, call_args, args.repeat)
        print(f"{kernel:<18} {label:<26} {1e3 * t_np:>10.3f} {1e3 * t_nb:>10.3f} {t_np / t_nb:>7.1f}x")
    print(f"active backend per kernel: {kernels.ACTIVE}")


if __name__ == "__main__":
    main()
