#!/usr/bin/env python3
"""Benchmark the compiled double-double kernels against the pure-Python mirror.

Both backends implement the same contract and must return bit-identical
``(hi, lo, ops)`` tuples; this script times representative workloads on each
and verifies that equivalence as it goes.

Usage:
    python3 benchmarks/bench_kernels.py            # quick sizes
    python3 benchmarks/bench_kernels.py --scale 10 # 10x the work
"""

import argparse
import importlib
import sys
import time

from identicheck import exactseq


def load_backends():
    try:
        compiled = importlib.import_module("identicheck._kernels")
    except ImportError:
        compiled = None
    pure = importlib.import_module("identicheck._kernels_py")
    return compiled, pure


def time_call(fn, *args, repeats=3):
    best = float("inf")
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--scale", type=int, default=1,
                    help="multiply workload sizes by this factor (default 1)")
    ap.add_argument("--repeats", type=int, default=3,
                    help="timing repeats, best-of (default 3)")
    args = ap.parse_args(argv)

    compiled, pure = load_backends()
    if compiled is None:
        print("compiled extension not available; timing the pure backend only",
              file=sys.stderr)

    n = 200_000 * args.scale
    primes = exactseq.odd_primes(1_000_000 * args.scale).values
    workloads = [
        ("alt_odd_power_sum(n, 9)", "alt_odd_power_sum", (n, 9)),
        ("alt_odd_power_sum(n, 3)", "alt_odd_power_sum", (n, 3)),
        ("power_sum(n, 2)", "power_sum", (n, 2)),
        ("paired_odd_product(n, 1)", "paired_odd_product", (n, 1)),
        ("paired_odd_product(n, 3)", "paired_odd_product", (n, 3)),
        (f"prime_product({len(primes)} primes, s=2)", "prime_product",
         (primes, 2, 0)),
        (f"prime_product({len(primes)} primes, s=3, chi4)", "prime_product",
         (primes, 3, 1)),
    ]

    name_w = max(len(label) for label, _, _ in workloads)
    print(f"workload sizes: n = {n:,}, prime limit = {1_000_000 * args.scale:,}")
    print(f"{'workload':<{name_w}}  {'pure (s)':>10}  {'compiled (s)':>12}  "
          f"{'speedup':>8}")
    for label, fname, call_args in workloads:
        pure_t, pure_r = time_call(getattr(pure, fname), *call_args,
                                   repeats=args.repeats)
        if compiled is None:
            print(f"{label:<{name_w}}  {pure_t:>10.4f}  {'-':>12}  {'-':>8}")
            continue
        comp_t, comp_r = time_call(getattr(compiled, fname), *call_args,
                                   repeats=args.repeats)
        if pure_r != comp_r:
            print(f"MISMATCH on {label}: pure={pure_r} compiled={comp_r}",
                  file=sys.stderr)
            return 1
        print(f"{label:<{name_w}}  {pure_t:>10.4f}  {comp_t:>12.4f}  "
              f"{pure_t / comp_t:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
