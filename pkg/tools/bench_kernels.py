"""Time the conjugator search with the compiled and the pure-Python kernels.

usage: python tools/bench_kernels.py [--bound B] [--repeat R]
"""

import argparse
import time

from flatfiber import _kernels_py
from flatfiber.classify import CLASS_REPS, finite_order_matrices


def flat(m):
    return tuple(int(x) for row in m for x in row)


def run(mod, cases, reps, bound):
    t = time.perf_counter()
    for m in cases:
        for r in reps:
            mod.find_conjugator(m, r, bound)
    return time.perf_counter() - t


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--bound", type=int, default=5)
    ap.add_argument("--repeat", type=int, default=3)
    a = ap.parse_args()
    cases = [flat(m) for m in finite_order_matrices(3)]
    reps = [flat(r) for r in CLASS_REPS.values()]
    mods = [("python", _kernels_py)]
    try:
        from flatfiber import _kernels
        mods.insert(0, ("cython", _kernels))
    except ImportError:
        print("compiled kernel not built; timing the fallback only")
    for name, mod in mods:
        best = min(run(mod, cases, reps, a.bound) for _ in range(a.repeat))
        print(f"{name:7s} {len(cases)} matrices x {len(reps)} classes, bound {a.bound}: {best:.3f} s")


if __name__ == "__main__":
    main()
