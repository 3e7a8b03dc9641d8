"""Time the numba and numpy kernel backends on the hot paths.

    python benchmarks/bench_backends.py --sizes 1000,100000 --repeat 7

Each row is the median wall time of one call after a warm-up call (which
also triggers JIT compilation for the numba set), plus the speed-up.
"""

import argparse
import statistics
import time

import numpy as np

from unitratio import _backend

THETA = (2.0, 3.0, 1.0, 1.5, 0.7)


def median_time(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def cases(k, n):
    rng = np.random.default_rng(0)
    u = rng.uniform(1e-6, 1 - 1e-6, n)
    uc = 1.0 - u
    a = np.exp(rng.uniform(-1, 2, n))
    b = np.exp(rng.uniform(-1, 2, n))
    return {
        "logpdf_w": lambda: k.logpdf_w(u, uc, *THETA),
        "logpdf_z": lambda: k.logpdf_z(u, uc, *THETA),
        "loglik_grad_w": lambda: k.loglik_grad_w(u, uc, *THETA),
        "loglik_grad_z": lambda: k.loglik_grad_z(u, uc, *THETA),
        "betainc_pair": lambda: k.betainc_pair(a, b, u, uc),
        "lgamma": lambda: k.lgamma(a * 10),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="1000,100000")
    ap.add_argument("--repeat", type=int, default=7)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    backends = {name: _backend.load(name) for name in ("numba", "numpy")}
    print(f"{'kernel':<15}{'n':>9}{'numba ms':>12}{'numpy ms':>12}{'speed-up':>10}")
    for n in sizes:
        runs = {name: cases(k, n) for name, k in backends.items()}
        for kernel in runs["numba"]:
            t_nb = median_time(runs["numba"][kernel], args.repeat)
            t_np = median_time(runs["numpy"][kernel], args.repeat)
            print(f"{kernel:<15}{n:>9}{t_nb * 1e3:>12.3f}{t_np * 1e3:>12.3f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
