#!/usr/bin/env python3
"""Benchmark the numba kernels against their pure-numpy fallbacks.

Runs each hot kernel at several batch sizes and reports per-call times
and the numba speedup. Launch with the default backend so both flavors
are importable:

    python3 benchmarks/bench_backends.py
    python3 benchmarks/bench_backends.py --sizes 1000,100000 --repeats 9
"""

import argparse
import time

import numpy as np

from pshcert.kernels import NUMBA_KERNELS, NUMPY_KERNELS


def _inputs(size, rng):
    j = np.arange(1, 61, dtype=np.float64)
    theta = 2 * np.pi * np.mod(j * 0.6180339887498949, 1.0)
    a = (1 + 1 / j) * np.exp(1j * theta)
    r = 1.0 / (4 * j * (j + 1))
    eps = 2e-4 / j**4
    z = rng.uniform(-3, 3, size) + 1j * rng.uniform(-3, 3, size)
    h2 = rng.standard_normal((size, 4, 4)) + 1j * rng.standard_normal((size, 4, 4))
    herm = h2 + np.conj(np.transpose(h2, (0, 2, 1)))
    e = rng.standard_normal(size)
    return {
        "chi_many": (np.abs(z),),
        "taper_many": (np.abs(z) / 3.0,),
        "sigma_many": (z.real.copy(), z.imag.copy(), a.real.copy(),
                       a.imag.copy(), 2.0 ** -(j + 1)),
        "u_many": (z.real.copy(), z.imag.copy(), a.real.copy(),
                   a.imag.copy(), r, eps),
        "min_eig_2x2_many": (np.abs(e) + 2.0, np.abs(e) + 1.0, e, e),
        "jacobi_min_eig_many": (herm.real.copy(), herm.imag.copy()),
    }


def _time(fn, args, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="1000,10000,100000")
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    rng = np.random.default_rng(0)

    if NUMBA_KERNELS is None:
        print("numba flavor unavailable (PSHCERT_BACKEND=numpy or no numba); "
              "timing the numpy fallbacks only")

    # warm up the JIT outside the timed region
    if NUMBA_KERNELS is not None:
        warm = _inputs(64, rng)
        for name, fn in NUMBA_KERNELS.items():
            fn(*warm[name])

    header = f"{'kernel':<22}{'size':>9}{'numpy [ms]':>13}{'numba [ms]':>13}{'speedup':>9}"
    print(header)
    print("-" * len(header))
    for size in sizes:
        data = _inputs(size, rng)
        for name in NUMPY_KERNELS:
            # jacobi batches of 100k 4x4 matrices are slow on the
            # vectorized path; cap its size
            if name == "jacobi_min_eig_many" and size > 20_000:
                continue
            t_np = _time(NUMPY_KERNELS[name], data[name], args.repeats)
            if NUMBA_KERNELS is not None:
                t_nb = _time(NUMBA_KERNELS[name], data[name], args.repeats)
                ratio = t_np / t_nb if t_nb > 0 else np.inf
                print(f"{name:<22}{size:>9}{1e3 * t_np:>13.3f}"
                      f"{1e3 * t_nb:>13.3f}{ratio:>9.2f}")
            else:
                print(f"{name:<22}{size:>9}{1e3 * t_np:>13.3f}{'-':>13}{'-':>9}")


if __name__ == "__main__":
    main()
