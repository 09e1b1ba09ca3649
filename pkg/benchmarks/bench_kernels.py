#!/usr/bin/env python3
"""Benchmark the jit kernels against the pure-Python/numpy fallback.

Runs the saturation + multiplicity recursion and the orbit expansion on a
few representative workloads through both paths, checks that the results
are identical, and prints a timing table.

    python3 benchmarks/bench_kernels.py [--repeat 3]

The dispatch used by the library itself is controlled by the
WEYLBRANCH_NO_NUMBA environment variable; this script calls both paths
explicitly regardless of the flag.
"""

import argparse
import time

import numpy as np

from weylbranch import kernels
from weylbranch.rootsys import LieType, build_root_system

WORKLOADS = [
    ("B4 spin-plus-natural", "B", 4, (1, 0, 0, 1)),
    ("C4 sum-3", "C", 4, (1, 1, 1, 0)),
    ("D5 adjoint-ish", "D", 5, (0, 1, 0, 0, 1)),
    ("B6 sum-3", "B", 6, (1, 1, 1, 0, 0, 0)),
    ("A6 sum-4", "A", 6, (2, 0, 1, 0, 0, 1)),
]

ORBITS = [
    ("B6 spin orbit", "B", 6, (0, 0, 0, 0, 0, 1)),
    ("D6 near-regular", "D", 6, (1, 1, 0, 0, 1, 1)),
]


def run_freudenthal(impls, rs, lam):
    bits = kernels.saturate_bits(rs, lam)
    keys, hts, status = impls["saturate"](
        np.array(lam, dtype=np.int64),
        rs.cartan_np,
        rs.pos_wc_np,
        rs.pos_height_np,
        np.int64(bits),
        np.int64(10**7),
    )
    assert status == kernels.OK
    mults, status = impls["freudenthal"](
        keys, hts, rs.cartan_np, rs.pos_wc_np, rs.pos_rc_np, rs.slen2_np, rs.gram_np, np.int64(bits)
    )
    assert status == kernels.OK
    return keys, mults


def run_orbit(impls, rs, w):
    bits = kernels.orbit_bits(rs, w)
    out, status = impls["orbit"](np.array(w, dtype=np.int64), rs.cartan_np, np.int64(bits), np.int64(10**7))
    assert status == kernels.OK
    return out


def timed(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    if not kernels.HAVE_NUMBA:
        print("numba is not installed; only the pure path is available")
        return

    # warm up compilation outside the timed region
    warm = build_root_system(LieType("A", 2))
    run_freudenthal(kernels.JIT_KERNELS, warm, (1, 1))
    run_orbit(kernels.JIT_KERNELS, warm, (1, 1))

    print(f"{'workload':<24} {'pure':>10} {'jit':>10} {'speedup':>9}")
    for name, fam, n, lam in WORKLOADS:
        rs = build_root_system(LieType(fam, n))
        t_pure, (k1, m1) = timed(lambda: run_freudenthal(kernels.PURE_KERNELS, rs, lam), args.repeat)
        t_jit, (k2, m2) = timed(lambda: run_freudenthal(kernels.JIT_KERNELS, rs, lam), args.repeat)
        assert np.array_equal(k1, k2) and np.array_equal(m1, m2), "path mismatch"
        print(f"{name:<24} {t_pure:>9.4f}s {t_jit:>9.4f}s {t_pure / t_jit:>8.1f}x")
    for name, fam, n, w in ORBITS:
        rs = build_root_system(LieType(fam, n))
        t_pure, a1 = timed(lambda: run_orbit(kernels.PURE_KERNELS, rs, w), args.repeat)
        t_jit, a2 = timed(lambda: run_orbit(kernels.JIT_KERNELS, rs, w), args.repeat)
        assert {tuple(r) for r in a1.tolist()} == {tuple(r) for r in a2.tolist()}
        print(f"{name:<24} {t_pure:>9.4f}s {t_jit:>9.4f}s {t_pure / t_jit:>8.1f}x")
    print("results identical on both paths")


if __name__ == "__main__":
    main()
