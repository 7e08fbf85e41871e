"""Compare the compiled and pure-Python kernels.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``.  Each kernel
is timed on identical inputs under both backends and the results are checked
for agreement before the timings are reported.
"""
import argparse
import math
import timeit

import numpy as np

from mcsum import _kernels_py

try:
    from mcsum import _kernels
except ImportError:  # extension not built
    _kernels = None


def mathieu_terms(depth: int, x: float = 1.0):
    # Partial numerators/denominators of a quadratic-denominator CF.
    k = np.arange(1, depth + 1, dtype=float)
    a = k**4 / ((2 * k - 1) * (2 * k + 1))
    b = 2 * (x + 0.5) ** 2 + 2 * k * (k + 1) + 0.5
    return a, b


def cases(depth: int, count: int):
    a, b = mathieu_terms(depth)
    num = np.array([-1.0, 0.0, 0.0, 0.0, 12.0])
    den = np.array([1.0, 0, 0, 0, 8.0, 0, 0, 0, 16.0])
    return {
        f"cf_tails depth={depth}": lambda m: m.cf_tails(a, b),
        f"rational_partial_sum count={count}": lambda m: m.rational_partial_sum(num, den, 1, count, False),
        f"rational_partial_sum alternating count={count}": lambda m: m.rational_partial_sum(num, den, 1, count, True),
    }


def _close(x, y) -> bool:
    if isinstance(x, tuple):
        return all(_close(p, q) for p, q in zip(x, y))
    if isinstance(x, float) and math.isnan(x):
        return isinstance(y, float) and math.isnan(y)
    return math.isclose(x, y, rel_tol=1e-12, abs_tol=1e-300)


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--depth", type=int, default=1 << 18)
    ap.add_argument("--count", type=int, default=1 << 18)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    backends = [("python", _kernels_py)]
    if _kernels is not None:
        backends.insert(0, ("cython", _kernels))
    else:
        print("compiled extension not available; timing the fallback only")

    print(f"{'kernel':<44} {'backend':<8} {'best [ms]':>10} {'speedup':>8}")
    for name, fn in cases(args.depth, args.count).items():
        results = {label: fn(mod) for label, mod in backends}
        if len(results) == 2 and not _close(results["cython"], results["python"]):
            raise SystemExit(f"backend mismatch on {name}: {results}")
        times = {
            label: min(timeit.repeat(lambda m=mod: fn(m), number=1, repeat=args.repeat))
            for label, mod in backends
        }
        for label in times:
            speed = times["python"] / times[label]
            print(f"{name:<44} {label:<8} {1e3 * times[label]:>10.2f} {speed:>7.1f}x")


if __name__ == "__main__":
    main()
