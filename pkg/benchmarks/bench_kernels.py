"""Time the compiled half-plane kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--regions 2000] [--repeat 3]

Also times the end-to-end region-equivalence sweep with each backend by
re-running it in a subprocess with IC_FEEDBACK_PURE_PYTHON set.
"""

import argparse
import os
import random
import subprocess
import sys
import time

from ic_feedback import _kernels_py
from ic_feedback._accel import compiled_kernels

SWEEP = """
import itertools, time
from ic_feedback.ldic_model import LdicParams
from ic_feedback.ldic_capacity import theorem3_region, appendixB_region
from ic_feedback.region_core import regions_equal
t = time.perf_counter()
ok = all(regions_equal(theorem3_region(LdicParams(*a, *c)), appendixB_region(LdicParams(*a, *c)))
         for a in itertools.product(range(5), repeat=4)
         for c in itertools.product((0, 1, 2, 4), repeat=2))
print(ok, time.perf_counter() - t)
"""


def random_rows(rng, k):
    a1, a2, b = [-1, 0], [0, -1], [0, 0]
    for _ in range(k):
        c1, c2 = rng.randint(0, 3), rng.randint(0, 3)
        if c1 == c2 == 0:
            c1 = 1
        a1.append(c1)
        a2.append(c2)
        b.append(rng.randint(0, 40))
    return a1, a2, b


def bench(kern, cases, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        for a1, a2, b in cases:
            verts = kern.int_vertices(a1, a2, b)
            kern.int_max_weighted(a1, a2, b, 1, 1)
            kern.int_contains_all(a1, a2, b, verts)
            kern.float_vertices([float(x) for x in a1], [float(x) for x in a2],
                                [float(x) for x in b], 1e-9)
        best = min(best, time.perf_counter() - t)
    return best


def sweep_time(pure):
    env = dict(os.environ)
    if pure:
        env["IC_FEEDBACK_PURE_PYTHON"] = "1"
    else:
        env.pop("IC_FEEDBACK_PURE_PYTHON", None)
    out = subprocess.run([sys.executable, "-c", SWEEP], env=env, check=True,
                         capture_output=True, text=True).stdout.split()
    return out[0] == "True", float(out[1])


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--regions", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--constraints", type=int, default=9)
    args = ap.parse_args()

    rng = random.Random(1)
    cases = [random_rows(rng, args.constraints) for _ in range(args.regions)]
    t_py = bench(_kernels_py, cases, args.repeat)
    print(f"kernels, {args.regions} regions x {args.constraints} constraints")
    print(f"  python   {t_py:8.3f} s")
    if compiled_kernels is None:
        print("  compiled (extension not built)")
    else:
        t_c = bench(compiled_kernels, cases, args.repeat)
        print(f"  compiled {t_c:8.3f} s   speedup {t_py / t_c:5.1f}x")
        for a1, a2, b in cases[:200]:
            assert sorted(compiled_kernels.int_vertices(a1, a2, b)) == \
                sorted(_kernels_py.int_vertices(a1, a2, b))

    print("region-equivalence sweep (5^4 gains x 16 feedback pairs)")
    for pure in (True, False):
        ok, t = sweep_time(pure)
        print(f"  {'python' if pure else 'default':8s} {t:8.3f} s  all equal: {ok}")


if __name__ == "__main__":
    main()
