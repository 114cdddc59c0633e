"""Compare the numba kernels with their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Kernel timings call both paths in-process. The end-to-end row runs a float
planarity check in a subprocess with and without KRONSPLIT_DISABLE_JIT=1.
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np

from kronsplit import _kernels
from kronsplit._jit import HAVE_NUMBA
from kronsplit.circular import CircularOrder, enumerate_circular_pairs


def _best(fn, repeat):
    fn()  # warm-up, includes compilation
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def _minor_batch(n, k, seed):
    rng = np.random.default_rng(seed)
    a = rng.random((n, n))
    a = a + a.T
    pairs = [p for p in enumerate_circular_pairs(CircularOrder(range(n)), max_k=k, min_k=k)]
    rows = np.array([p.p for p in pairs], dtype=np.int64)
    cols = np.array([p.q for p in pairs], dtype=np.int64)
    return a, rows, cols


END_TO_END = """
import time
from kronsplit.circular import is_circular_planar
from kronsplit.matkernel import Arith
from kronsplit.network import random_circular_planar, response_matrix
m = response_matrix(random_circular_planar({n}, interior=4, seed=3)).to_float()
is_circular_planar(m, arith=Arith(False, 1e-6))
t = time.perf_counter()
for _ in range(3):
    is_circular_planar(m, arith=Arith(False, 1e-6))
print((time.perf_counter() - t) / 3)
"""


def _end_to_end(n, disable):
    env = dict(os.environ)
    if disable:
        env["KRONSPLIT_DISABLE_JIT"] = "1"
    else:
        env.pop("KRONSPLIT_DISABLE_JIT", None)
    out = subprocess.run([sys.executable, "-c", END_TO_END.format(n=n)], env=env,
                         capture_output=True, text=True, check=True)
    return float(out.stdout.strip())


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if not HAVE_NUMBA:
        print("numba unavailable: only the numpy path can be timed")
    print(f"{'kernel':<34}{'numba (ms)':>12}{'numpy (ms)':>12}{'speedup':>10}")

    def row(name, fj, fn):
        tj = _best(fj, args.repeat) if HAVE_NUMBA else float("nan")
        tn = _best(fn, args.repeat)
        print(f"{name:<34}{tj * 1e3:>12.3f}{tn * 1e3:>12.3f}{tn / tj:>10.2f}")

    for n, k in ((8, 3), (10, 4), (12, 5)):
        a, rows, cols = _minor_batch(n, k, args.seed)
        row(f"batch_minors n={n} k={k} ({len(rows)})",
            lambda: _kernels.batch_minors(a, rows, cols, jit=True),
            lambda: _kernels.batch_minors(a, rows, cols, jit=False))
    for n in (10, 20, 40):
        w = np.random.default_rng(args.seed).random((n, n))
        w = w + w.T
        pos = np.arange(n)
        row(f"kalmanson_scan n={n}",
            lambda: _kernels.kalmanson_scan(w, pos, jit=True),
            lambda: _kernels.kalmanson_scan(w, pos, jit=False))
    for n in (8, 10):
        tj = _end_to_end(n, disable=False)
        tn = _end_to_end(n, disable=True)
        print(f"{f'planarity check n={n} (process)':<34}{tj * 1e3:>12.3f}{tn * 1e3:>12.3f}{tn / tj:>10.2f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
