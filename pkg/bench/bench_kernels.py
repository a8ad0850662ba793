#!/usr/bin/env python3
"""Benchmark the compiled kernels against their pure-Python twins.

Both backends are loaded directly (ignoring BSDLAB_PURE) and run on
identical inputs; every workload also asserts that the two outputs agree
bit for bit, since the fallback is contractually an exact twin, not an
approximation.

Usage: python3 bench/bench_kernels.py [--repeat N]
"""

import argparse
import sys
import time

import numpy as np

from bsdlab import catalog, sieve_primes
import bsdlab._kernels._slow as slow

try:
    import bsdlab._kernels._fast as fast
except ImportError:
    print("compiled extension not built; nothing to compare", file=sys.stderr)
    sys.exit(1)


def best_of(fn, repeat):
    fn()  # warm up
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def fmt(seconds):
    if seconds < 1e-3:
        return f"{seconds * 1e6:7.1f} us"
    if seconds < 1.0:
        return f"{seconds * 1e3:7.1f} ms"
    return f"{seconds:7.2f} s "


def short_model_residues(curve, ps):
    amod = np.array([(-27 * curve.c4) % int(p) for p in ps], dtype=np.uint64)
    bmod = np.array([(-54 * curve.c6) % int(p) for p in ps], dtype=np.uint64)
    return amod, bmod


def workloads():
    rng = np.random.default_rng(12345)
    curve = catalog.curve_for("37a1")
    table = sieve_primes(10**5)

    # trace scan over a band of primes
    band = table.primes[(table.primes >= 10000) & (table.primes < 12000)]
    band = band.astype(np.uint64)
    amod, bmod = short_model_residues(curve, band)

    def scan(impl):
        out = np.zeros(len(band), dtype=np.int64)
        impl.ap_batch_range(band, amod, bmod, out, 0, len(band))
        return out

    yield f"ap_batch_range, {len(band)} primes near 1e4", scan

    # fixed-p ensemble slice
    p = 10007
    ca = rng.integers(1, p, size=300, dtype=np.uint64)
    cb = rng.integers(1, p, size=300, dtype=np.uint64)

    def fixed(impl):
        out = np.zeros(len(ca), dtype=np.int64)
        impl.ap_fixed_p_range(p, ca, cb, out, 0, len(ca))
        return out

    yield f"ap_fixed_p_range, p = {p}, 300 classes", fixed

    # quadratic-residue table build
    def chi(impl):
        return impl.chi_table(99991)

    yield "chi_table, p = 99991", chi

    # one simulated replica to x = 1e5
    ps = table.primes_upto(10**5)
    u = rng.random(len(ps))
    invp = 1.0 / ps
    csc = 2.0 / np.sqrt(ps)
    cps = np.searchsorted(
        ps, np.array([100, 1000, 10000, 100000]), side="right"
    ).astype(np.int64)

    def replica(impl):
        out = np.zeros(len(cps), dtype=np.float64)
        impl.mc_replica_noncm(u, invp, csc, cps, out)
        return out

    yield f"mc_replica_noncm, {len(ps)} primes", replica

    # angle sampling by bisection
    draws = rng.random(20000)

    def sample(impl):
        out = np.zeros(len(draws), dtype=np.float64)
        impl.sample_st_batch(draws, out)
        return out

    yield "sample_st_batch, 20000 draws", sample

    # compensated reduction
    xs = rng.standard_normal(10**6)

    def reduce_(impl):
        return np.float64(impl.kahan_sum(xs))

    yield "kahan_sum, 1e6 terms", reduce_


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3,
                    help="timed repetitions per workload (best is kept)")
    args = ap.parse_args(argv)

    width = 44
    print(f"{'workload':<{width}} {'compiled':>10} {'pure':>10} {'ratio':>8}")
    for name, fn in workloads():
        got_fast = fn(fast)
        got_slow = fn(slow)
        if not np.array_equal(np.asarray(got_fast), np.asarray(got_slow)):
            print(f"{name:<{width}} BACKEND MISMATCH", file=sys.stderr)
            return 1
        t_fast = best_of(lambda: fn(fast), args.repeat)
        t_slow = best_of(lambda: fn(slow), args.repeat)
        print(f"{name:<{width}} {fmt(t_fast)} {fmt(t_slow)} "
              f"{t_slow / t_fast:7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
