"""Compare the compiled and pure-Python evaluation kernels.

Run from the repository root after an editable install::

    python benchmarks/bench_kernels.py [--repeat N]

Times the raw kernels on random polynomials and boxes, then times a whole
pipeline run under each backend (the backend is picked at import, so each
pipeline run happens in a fresh interpreter).
"""

import argparse
import os
import random
import subprocess
import sys
import timeit

from curvepair import _pykernels
from curvepair.poly import BivariatePolynomial

try:
    from curvepair import _ckernels
except ImportError:
    _ckernels = None

PIPELINE = (
    "import time; from curvepair.pipeline import solve; from curvepair.poly import CurvePair;"
    "t = time.perf_counter();"
    "solve(CurvePair.from_text('x^2+y^2-5', 'x*y-1'), (-4, -4, 4, 4));"
    "print(time.perf_counter() - t)"
)


def workload(seed=0, n=200):
    rng = random.Random(seed)
    jobs = []
    for _ in range(n):
        deg = rng.randint(2, 6)
        terms = {(i, j): rng.randint(-99, 99) for i in range(deg + 1) for j in range(deg + 1 - i)}
        rows, dx, dy = BivariatePolynomial(terms).dense()
        k = rng.randint(4, 40)
        xl, yl = rng.randint(-(1 << k), 1 << k), rng.randint(-(1 << k), 1 << k)
        jobs.append((rows, dx, dy, xl, xl + rng.randint(1, 1 << 8), yl, yl + rng.randint(1, 1 << 8), k))
    return jobs


def time_kernels(mod, jobs, repeat):
    def box():
        for j in jobs:
            mod.eval_box(*j)

    def point():
        for rows, dx, dy, xl, _, yl, _, k in jobs:
            mod.eval_point(rows, dx, dy, xl, yl, k)

    return min(timeit.repeat(box, number=1, repeat=repeat)), min(timeit.repeat(point, number=1, repeat=repeat))


def time_pipeline(pure):
    env = dict(os.environ, CURVEPAIR_PURE="1" if pure else "")
    out = subprocess.run([sys.executable, "-c", PIPELINE], capture_output=True, text=True, env=env, check=True)
    return float(out.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    jobs = workload()
    rows = [("python", _pykernels)]
    if _ckernels is None:
        print("compiled kernels not built; timing the pure-Python backend only")
    else:
        rows.append(("cython", _ckernels))
    base = None
    print(f"{'backend':<8} {'eval_box':>10} {'eval_point':>11} {'pipeline':>10}")
    for name, mod in rows:
        tb, tp = time_kernels(mod, jobs, args.repeat)
        tpipe = min(time_pipeline(name == "python") for _ in range(3))
        print(f"{name:<8} {tb * 1e3:>8.2f}ms {tp * 1e3:>9.2f}ms {tpipe:>9.3f}s")
        if base is None:
            base = (tb, tp, tpipe)
        else:
            print(f"{'speedup':<8} {base[0] / tb:>9.2f}x {base[1] / tp:>10.2f}x {base[2] / tpipe:>9.2f}x")


if __name__ == "__main__":
    main()
