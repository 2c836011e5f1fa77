#!/usr/bin/env python3
"""Compare the compiled and pure-Python kernel lanes on the hot paths.

Run from the repository after an editable install:

    python3 benchmarks/compare_lanes.py [--repeat N]

Times the packed kernels head-to-head in process, then one end-to-end
campaign per lane in subprocesses (WEDGECRYS_PURE=1 forces the fallback).
"""
import argparse
import random
import subprocess
import sys
import time

from wedgecrys._kernel import _load_compiled, pylane
from wedgecrys.matrices import index_subsets
from wedgecrys.rings import defining_polynomial


def _time(fn, repeat):
    best = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best


def kernel_benchmarks(repeat):
    cy = _load_compiled()
    if cy is None:
        print("compiled lane not available; build it with pip install -e .")
        return
    rng = random.Random(1)
    p, mprec, a = 3, 3, 2
    q = p**mprec
    fred = tuple(c % q for c in defining_polynomial(p, a))

    cases = []
    for n, d in ((4, 2), (6, 3)):
        A = [rng.randrange(q) for _ in range(n * n * a)]
        subs = index_subsets(n, d)
        cases.append(
            (f"compound {n}x{n} d={d}", lambda L, A=A, n=n, d=d, subs=subs:
             L.compound(A, n, d, subs, a, fred, q, p, mprec))
        )
    for n in (8, 12, 20):
        A = [rng.randrange(q) for _ in range(n * n * a)]
        cases.append(
            (f"berkowitz {n}x{n}", lambda L, A=A, n=n: L.berkowitz(A, n, a, fred, q))
        )
    n = 12
    A = [rng.randrange(q) for _ in range(n * n * a)]
    B = [rng.randrange(q) for _ in range(n * n * a)]
    cases.append((f"matmul {n}x{n} x20", lambda L: [L.mat_mul(A, B, n, n, n, a, fred, q) for _ in range(20)]))
    cases.append((f"smith_vals {n}x{n}", lambda L: L.smith_vals(A, n, n, a, fred, q, p, mprec)))

    print(f"{'kernel (W(F_9)/3^3 entries)':<28} {'python':>10} {'cython':>10} {'speedup':>8}")
    for name, fn in cases:
        t_py = _time(lambda: fn(pylane), repeat)
        t_cy = _time(lambda: fn(cy), repeat)
        print(f"{name:<28} {t_py * 1e3:>8.2f}ms {t_cy * 1e3:>8.2f}ms {t_py / t_cy:>7.1f}x")


def end_to_end(repeat):
    cmd = [sys.executable, "-m", "wedgecrys.cli", "check", "cauchy-binet",
           "--seed", "1", "--trials", "300"]
    print(f"\n{'end-to-end':<28} {'python':>10} {'cython':>10} {'speedup':>8}")
    times = {}
    for lane, env in (("python", {"WEDGECRYS_PURE": "1"}), ("cython", {})):
        full_env = {"PATH": "/usr/bin:/bin", **env}
        best = None
        for _ in range(repeat):
            t0 = time.perf_counter()
            res = subprocess.run(cmd, capture_output=True, env=full_env)
            assert res.returncode == 0, res.stderr
            dt = time.perf_counter() - t0
            best = dt if best is None else min(best, dt)
        times[lane] = best
    print(
        f"{'check cauchy-binet x300':<28} {times['python']:>9.2f}s {times['cython']:>9.2f}s"
        f" {times['python'] / times['cython']:>7.1f}x"
    )


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    kernel_benchmarks(args.repeat)
    end_to_end(args.repeat)


if __name__ == "__main__":
    main()
