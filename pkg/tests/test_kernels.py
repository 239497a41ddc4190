import os
import random
import subprocess
import sys

import pytest

from curvepair import _pykernels, kernels
from curvepair.poly import BivariatePolynomial

try:
    from curvepair import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS = [_pykernels] + ([_ckernels] if _ckernels is not None else [])


def random_rows(rng, deg):
    terms = {(i, j): rng.randint(-50, 50) for i in range(deg + 1) for j in range(deg + 1 - i) if rng.random() < 0.7}
    return BivariatePolynomial(terms).dense()


@pytest.mark.parametrize("mod", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[1])
def test_eval_box_encloses_points(mod):
    rng = random.Random(99)
    for _ in range(100):
        rows, dx, dy = random_rows(rng, rng.randint(0, 5))
        k = rng.randint(0, 8)
        xl, yl = rng.randint(-300, 300), rng.randint(-300, 300)
        xh, yh = xl + rng.randint(0, 100), yl + rng.randint(0, 100)
        lo, hi = mod.eval_box(rows, dx, dy, xl, xh, yl, yh, k)
        for _ in range(10):
            X, Y = rng.randint(xl, xh), rng.randint(yl, yh)
            assert lo <= mod.eval_point(rows, dx, dy, X, Y, k) <= hi


@pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")
def test_backends_agree():
    rng = random.Random(1234)
    for _ in range(300):
        rows, dx, dy = random_rows(rng, rng.randint(0, 6))
        k = rng.randint(0, 80)
        xl, yl = rng.randint(-10**12, 10**12), rng.randint(-10**12, 10**12)
        xh, yh = xl + rng.randint(0, 10**10), yl + rng.randint(0, 10**10)
        args = (rows, dx, dy, xl, xh, yl, yh, k)
        assert _pykernels.eval_box(*args) == _ckernels.eval_box(*args)
        assert _pykernels.eval_point(rows, dx, dy, xl, yh, k) == _ckernels.eval_point(rows, dx, dy, xl, yh, k)
        a, b = sorted((rng.randint(-99, 99), rng.randint(-99, 99)))
        n = rng.randint(0, 7)
        assert _pykernels.ipow(a, b, n) == _ckernels.ipow(a, b, n)
        c, d = sorted((rng.randint(-99, 99), rng.randint(-99, 99)))
        assert _pykernels.imul(a, b, c, d) == _ckernels.imul(a, b, c, d)


def test_backend_selected():
    assert kernels.BACKEND in ("python", "cython")
    if _ckernels is not None and not os.environ.get("CURVEPAIR_PURE"):
        assert kernels.BACKEND == "cython"


def test_pure_fallback_env():
    env = dict(os.environ, CURVEPAIR_PURE="1")
    out = subprocess.run(
        [sys.executable, "-c", "from curvepair import kernels; print(kernels.BACKEND)"],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    ).stdout.strip()
    assert out == "python"


def test_pipeline_same_on_both_backends():
    code = (
        "from curvepair.cli import main; import sys;"
        "sys.exit(main(['approx','--f','x^2+4*y^2-4','--g','16*x^2+16*y^2-17','--region','-1','0','1','2','--emit-partition']))"
    )
    outs = []
    for pure in ("1", ""):
        env = dict(os.environ, CURVEPAIR_PURE=pure)
        outs.append(subprocess.run([sys.executable, "-c", code], capture_output=True, env=env, check=True).stdout)
    assert outs[0] == outs[1]
