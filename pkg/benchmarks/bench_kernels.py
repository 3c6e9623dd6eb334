"""Compare the compiled and pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import statistics
import time

from quatks import _kernels_py
from quatks.catalog import load_catalog
from quatks.quat import discriminant

try:
    from quatks import _kernels
except ImportError:
    _kernels = None


def mu_search_args(entry):
    O = entry.order()
    traces = [int(2 * e.coords[0]) for e in O.basis]
    gram = [[int(x) for x in row] for row in O.norm_gram()]
    d = discriminant(O.algebra)
    return traces, gram, 2 * d, 10 * d


def no_hit_args():
    # trace forces c0 = 0 and 7 is not a sum of three squares, so the whole box is scanned
    return [2, 0, 0, 0], [[2, 0, 0, 0], [0, 2, 0, 0], [0, 0, 2, 0], [0, 0, 0, 2]], 2 * 7, 30


def time_call(fn, args, repeat):
    out = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn(*args)
        out.append(time.perf_counter() - t)
    return statistics.median(out)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    cases = []
    for e in load_catalog():
        if e.maximal:
            cases.append((f"mu_search {e.id}", "mu_search", mu_search_args(e)))
    cases.append(("mu_search exhaustive box", "mu_search", no_hit_args()))
    for a, b, p, k in [(-1, 3, 3, 3), (-1, 11, 11, 3), (-10, -10, 2, 6), (3, 5, 7, 3)]:
        cases.append((f"local_solution_exists ({a},{b}) mod {p}^{k}", "local_solution_exists", (a, b, p, k)))

    print(f"{'case':<44} {'python [ms]':>12} {'cython [ms]':>12} {'speedup':>8}")
    for name, fn, fargs in cases:
        t_py = time_call(getattr(_kernels_py, fn), fargs, args.repeat)
        if _kernels is None:
            print(f"{name:<44} {1e3 * t_py:12.3f} {'n/a':>12} {'':>8}")
            continue
        t_cy = time_call(getattr(_kernels, fn), fargs, args.repeat)
        assert getattr(_kernels, fn)(*fargs) == getattr(_kernels_py, fn)(*fargs)
        print(f"{name:<44} {1e3 * t_py:12.3f} {1e3 * t_cy:12.3f} {t_py / t_cy:8.1f}")


if __name__ == "__main__":
    main()
