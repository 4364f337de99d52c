import os
import random
import subprocess
import sys

import numpy as np
import pytest

from conftest import random_poly
from extremal import kernels
from extremal.vectorized import IntPoly, eval_rows
from extremal.polyring import eval_poly

pytestmark = pytest.mark.skipif(kernels.numba_impl is None, reason="numba not importable")

NAMES = ("a", "b", "c")


def test_backends_agree_on_random_grids():
    rng = random.Random(9)
    nb, npy = kernels.get("numba"), kernels.get("numpy")
    for _ in range(60):
        p = random_poly(rng, NAMES, max_deg=3, max_terms=6, coef=3)
        ip = IntPoly.from_poly(p)
        axes = [np.array(sorted(rng.sample(range(-9, 10), rng.randint(1, 8))), dtype=np.int64) for _ in NAMES]
        lo = rng.randrange(len(axes[0]))
        hi = rng.randint(lo, len(axes[0]))
        assert nb.count_zeros(ip.coefs, ip.exps, axes, lo, hi) == npy.count_zeros(ip.coefs, ip.exps, axes, lo, hi)
        q = IntPoly.from_poly(random_poly(rng, NAMES[:2], max_deg=3, max_terms=6, coef=3))
        target = np.array(sorted(rng.sample(range(-30, 31), 10)), dtype=np.int64)
        for interval in (True, False):
            args = (q.coefs, q.exps, axes[:2], 0, len(axes[0]), 2, target, interval, -5, 5)
            assert nb.count_solved(*args) == npy.count_solved(*args)


def test_eval_rows_backends_agree_with_scalar():
    rng = random.Random(10)
    for _ in range(40):
        p = random_poly(rng, NAMES, max_deg=4, rational=True)
        rows = np.array([[rng.randint(-50, 50) for _ in NAMES] for _ in range(25)], dtype=np.int64)
        expected = [eval_poly(p, r.tolist()) for r in rows]
        for be in ("numba", "numpy"):
            assert eval_rows(p, rows, backend=be).tolist() == expected


def test_eval_rows_escalates_to_exact():
    from extremal.polyring import parse_poly

    p = parse_poly("x^3 + y^3", ["x", "y"])
    rows = np.array([[2**40, 3], [-(2**40), 2**40]], dtype=np.int64)
    out = eval_rows(p, rows)
    assert out.dtype == object
    assert out.tolist() == [2**120 + 27, 0]


def test_difference_kernels_agree():
    nb, npy = kernels.get("numba"), kernels.get("numpy")
    for n in (1, 2, 17, 1000, 65536):
        assert nb.main_f_count(n, 1, n + 1) == npy.main_f_count(n, 1, n + 1)
        assert nb.valtr_count(n, -n, n) == npy.valtr_count(n, -n, n) == npy.valtr_count_exact(n, -n, n)


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.get("fortran")


@pytest.mark.parametrize("flag", ["numpy", "numba"])
def test_env_flag_selects_backend(flag):
    env = dict(os.environ, EXTREMAL_KERNELS=flag)
    out = subprocess.run([sys.executable, "-c", "from extremal import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == flag


def test_env_flag_rejects_garbage():
    env = dict(os.environ, EXTREMAL_KERNELS="cuda")
    out = subprocess.run([sys.executable, "-c", "import extremal.kernels"], env=env, capture_output=True, text=True)
    assert out.returncode != 0 and "EXTREMAL_KERNELS" in out.stderr
