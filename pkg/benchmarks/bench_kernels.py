"""Time the compiled series kernel against the numpy fallback.

    python benchmarks/bench_kernels.py [--points N] [--repeat R]
"""

import argparse
import time

import numpy as np

from kgoursat import _fallback

try:
    from kgoursat import _kernels
except ImportError:
    _kernels = None


def best_time(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=150_000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    x = rng.uniform(-10, 10, args.points)
    y = rng.uniform(-10, 10, args.points)
    x = np.ascontiguousarray(x * np.minimum(1, 10 / np.sqrt(np.abs(x * y) + 1e-300)))
    y = np.ascontiguousarray(y * np.minimum(1, 10 / np.sqrt(np.abs(x * y) + 1e-300)))

    print(f"{args.points} points, |xy| <= 100, best of {args.repeat}")
    for a in (0, 1):
        t_py = best_time(lambda: _fallback.biv_bessel(a, x, y, 1e-15, 400), args.repeat)
        line = f"a={a}  python {t_py:8.4f} s"
        if _kernels is not None:
            t_c = best_time(lambda: _kernels.biv_bessel(a, x, y, 1e-15, 400), args.repeat)
            v_py = _fallback.biv_bessel(a, x, y, 1e-15, 400)[0]
            v_c = np.asarray(_kernels.biv_bessel(a, x, y, 1e-15, 400)[0])
            line += f"  cython {t_c:8.4f} s  speedup {t_py / t_c:5.1f}x  max|diff| {np.max(np.abs(v_py - v_c)):.1e}"
        else:
            line += "  (compiled kernel not built)"
        print(line)


if __name__ == "__main__":
    main()
