"""Time the numba Howell kernel against the numpy fallback.

    python3 benchmarks/bench_howell.py [--sizes 8 16 32 64] [--modulus 4] [--repeat 5]

Also times a full resolution under each path by toggling ``_kernels.USE_NUMBA``.
"""

import argparse
import time

import numpy as np

from grlocal import _kernels, load, minimal_resolution, shipped_rings


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 16, 32, 64, 128])
    ap.add_argument("--modulus", type=int, default=4)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    n = args.modulus

    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not importable")
    _kernels._howell_jit(np.array([[1]], dtype=np.int64), np.int64(n))  # compile

    print(f"{'shape':>10} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for s in args.sizes:
        mat = rng.integers(0, n, size=(s, s), dtype=np.int64)
        a = _kernels.howell_numpy(mat, n)
        b = _kernels._howell_jit(mat, np.int64(n))
        assert np.array_equal(a, b)
        t_np = best_of(lambda: _kernels.howell_numpy(mat, n), args.repeat)
        t_nb = best_of(lambda: _kernels._howell_jit(mat, np.int64(n)), args.repeat)
        print(f"{s:>4}x{s:<5} {t_np * 1e3:>10.2f} {t_nb * 1e3:>10.2f} {t_np / t_nb:>8.1f}")

    ws = load(shipped_rings()["z4x"])
    M = ws.module("k")
    for flag in (False, True):
        _kernels.USE_NUMBA = flag
        t = best_of(lambda: minimal_resolution(M, 6), 1)
        print(f"resolve z4x:k steps 6, {'numba' if flag else 'numpy'}: {t:.3f}s")


if __name__ == "__main__":
    main()
