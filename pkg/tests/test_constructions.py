import json
from itertools import product
from math import isqrt

import numpy as np
import pytest

from extremal.constructions import (
    Construction,
    build,
    gen_graph_G,
    gen_main_T,
    gen_mvar_T,
    gen_valtr,
    main_polynomial,
    main_t_size,
    mvar_t_size,
    valtr_polynomial,
    valtr_symmetric_size,
    verify_construction,
)
from extremal.grid import Axis, GridSpec
from extremal.polyring import Polynomial


def rows(c):
    return [tuple(r) for r in c.tuples.tolist()]


def enum_main_T(n):
    return [(k, k + l, k + l * l) for k in range(1, n // 2 + 1) for l in range(0, isqrt(n) // 2 + 1)]


def enum_mvar_T(m, n):
    out = []
    for ks in product(range(n + 1), repeat=m - 2):
        for l in range(isqrt(n) + 1):
            out.append(tuple([ks[0]] + [ks[i] - ks[i - 1] for i in range(1, m - 2)] + [l - ks[-1], ks[0] + l * l]))
    return out


def test_main_T_small():
    assert rows(gen_main_T(4)) == [(1, 1, 1), (1, 2, 2), (2, 2, 2), (2, 3, 3)]
    assert gen_main_T(16).size == 24
    assert gen_main_T(1).size == 0


@pytest.mark.parametrize("n", [2, 3, 7, 16, 17, 63, 100])
def test_main_T_matches_enumeration(n):
    assert rows(gen_main_T(n)) == enum_main_T(n)


def test_graph_G_small():
    assert rows(gen_graph_G(4)) == [(1, 1), (1, 2), (2, 2), (2, 3)]
    assert gen_graph_G(16).size == 24
    assert gen_graph_G(1).size == 0


def test_valtr_symmetric_small():
    grid, c = gen_valtr("symmetric", n=4)
    assert sorted(rows(c)) == [(1, 2, 1, 2), (1, 2, 2, 3), (2, 3, 1, 2), (2, 3, 2, 3)]
    assert gen_valtr("symmetric", n=16)[1].size == 128
    assert str(grid) == "1..4,1..4,1..4,1..4"


def test_valtr_asymmetric_grid():
    grid, c = gen_valtr("asymmetric", M=2)
    assert grid == GridSpec([Axis.interval(1, 2)] * 2 + [Axis.interval(1, 4)] * 2)
    assert c.tuples is None
    assert verify_construction(c).passed


def test_mvar_T_small():
    grid, c = gen_mvar_T(3, 1)
    assert rows(c) == [(0, 0, 0), (0, 1, 1), (1, -1, 1), (1, 0, 2)]
    assert gen_mvar_T(4, 4)[1].size == 75
    assert str(grid) == "-1..2,-1..2,-1..2"


@pytest.mark.parametrize("m,n", [(3, 5), (4, 4), (5, 3), (6, 2)])
def test_mvar_T_matches_enumeration(m, n):
    c = gen_mvar_T(m, n)[1]
    assert rows(c) == enum_mvar_T(m, n)
    assert (c.tuples == 0).all(axis=1).any()


def test_mvar_T_rejects_small_m():
    with pytest.raises(ValueError):
        gen_mvar_T(2, 4)


def test_verify_main_T_64():
    rep = verify_construction(gen_main_T(64), GridSpec.cube(1, 64, 3))
    assert rep.passed and rep.size == 160


def test_verify_reports_tampered_tuple(backend):
    c = Construction("MainT", {"n": 4}, np.array([[1, 1, 1], [1, 2, 3]]), main_polynomial(), GridSpec.cube(1, 4, 3))
    rep = verify_construction(c, backend=backend)
    assert not rep.passed and not rep.on_zero_set
    assert rep.failure == {"reason": "not on zero set", "tuple": [1, 2, 3], "index": 1, "value": "-1"}


def test_verify_reports_duplicates_and_grid_escape():
    F = main_polynomial()
    dup = Construction("X", {}, np.array([[1, 1, 1], [1, 1, 1]]), F, GridSpec.cube(1, 4, 3))
    assert verify_construction(dup).failure["reason"] == "duplicate"
    out = Construction("X", {}, np.array([[5, 5, 5]]), F, GridSpec.cube(1, 4, 3))
    rep = verify_construction(out)
    assert not rep.in_grid and rep.on_zero_set


def test_verify_empty_passes():
    rep = verify_construction(gen_main_T(1))
    assert rep.passed and rep.size == 0


def test_distinctness_and_membership_exhaustive():
    for n in range(1, 1025):
        T = gen_main_T(n)
        assert T.size == main_t_size(n)
        assert verify_construction(T).passed
        G = gen_graph_G(n)
        assert G.size == main_t_size(n)
        assert verify_construction(G).passed
    for n in range(1, 129):
        Q = gen_valtr("symmetric", n=n)[1]
        assert Q.size == valtr_symmetric_size(n)
        assert verify_construction(Q).passed


def test_mvar_membership_exhaustive():
    limits = {3: 1024, 4: 64, 5: 24, 6: 8}
    for m, top in limits.items():
        for n in range(1, top + 1):
            c = gen_mvar_T(m, n)[1]
            assert c.size == mvar_t_size(m, n)
            assert verify_construction(c).passed, (m, n)


def test_lower_bound_constants():
    for n in range(16, 2**16 + 1):
        assert main_t_size(n) >= n ** 1.5 / 8
    for n in range(16, 2**12 + 1):
        assert valtr_symmetric_size(n) >= n ** 2.5 / 32
    for m in (3, 4, 5):
        for n in range(16, 257):
            assert mvar_t_size(m, n) >= n ** (m - 1.5) / 2**m


def test_projection_coherence():
    for n in (4, 16, 50, 257):
        assert np.array_equal(gen_main_T(n).tuples[:, :2], gen_graph_G(n).tuples)


def test_substitution_coherence():
    xyz = ("x", "y", "z")
    V = valtr_polynomial()
    sub = V.subs({"s": Polynomial.var(xyz, "x"), "t": Polynomial.var(xyz, "z")}, variables=xyz)
    assert sub == main_polynomial()


def test_csv_and_sidecar():
    c = gen_main_T(4)
    assert c.to_csv() == "x,y,z\n1,1,1\n1,2,2\n2,2,2\n2,3,3\n"
    meta = json.loads(c.sidecar_json())
    assert meta == {"name": "MainT", "params": {"n": 4}, "size": 4,
                    "polynomial": "x^2 - 2*x*y + y^2 + x - z", "grid": "1..4,1..4,1..4"}


def test_build_dispatch():
    assert build("mvar-t", n=1, m=3).size == 4
    with pytest.raises(ValueError, match="--n is required"):
        build("main-t")
    with pytest.raises(ValueError, match="unknown family"):
        build("nope", n=3)
