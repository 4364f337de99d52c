import json
import warnings

import pytest

from extremal.analysis import (
    count_series,
    fit_csv,
    fit_exponent,
    geometric_schedule,
    run_paper_suite,
)
from extremal.counting import count_bruteforce
from extremal.constructions import main_polynomial
from extremal.grid import GridSpec


def test_exact_square_law():
    fit = fit_exponent([(n, n * n) for n in (4, 8, 16, 32)])
    assert fit.slope == pytest.approx(2.0, abs=1e-12)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("alpha", [1, 1.5, 2, 2.5])
@pytest.mark.parametrize("c", [1, 3, 1000])
def test_power_law_recovery_and_scale_invariance(alpha, c):
    # powers of 4 keep n^alpha integral, so the data is an exact power law
    ns = [4**k for k in range(3, 8)]
    fit = fit_exponent([(n, c * int(n**alpha)) for n in ns])
    assert abs(fit.slope - alpha) < 1e-9
    base = fit_exponent([(n, int(n**alpha)) for n in ns])
    assert abs(fit.slope - base.slope) < 1e-9


def test_fit_errors_and_zero_handling():
    with pytest.raises(ValueError):
        fit_exponent([(4, 16)])
    with pytest.raises(ValueError):
        fit_exponent([(4, 16), (8, -1)])
    with pytest.raises(ValueError):
        fit_exponent([(4, 16), (4, 17)])
    with pytest.warns(UserWarning, match="dropped 1 zero"):
        fit = fit_exponent([(1, 0), (4, 16), (8, 64)])
    assert fit.slope == pytest.approx(2.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        with pytest.raises(ValueError):
            fit_exponent([(1, 0), (4, 16)])


def test_schedule():
    assert geometric_schedule(512, 8192) == [512, 1024, 2048, 4096, 8192]
    assert geometric_schedule(3, 3) == []


def test_main_f_counts_n512_matches_oracle():
    # 15197 also from an independent pure-Python loop over [1,512]^2
    pts = count_series("main-f", [512])
    assert pts == [(512, 15197)]
    assert count_bruteforce(main_polynomial(), GridSpec.cube(1, 512, 3)).count == 15197


def test_main_f_slope():
    fit = fit_exponent(count_series("main-f", geometric_schedule(512, 8192)))
    assert 1.45 <= fit.slope <= 1.55


def test_degenerate_sum_slope_and_closed_form():
    pts = count_series("degenerate-sum", geometric_schedule(512, 8192))
    assert all(c == n * (n - 1) // 2 for n, c in pts)
    assert 1.95 <= fit_exponent(pts).slope <= 2.05


def test_monotone_families_fit_tightly():
    for fam in ("main-f", "degenerate-sum", "valtr-symmetric", "graph-g"):
        fit = fit_exponent(count_series(fam, geometric_schedule(512, 8192)))
        assert fit.r_squared >= 0.999, fam


def test_fit_csv():
    fit = fit_exponent([(n, n * n) for n in (2, 4)])
    assert fit_csv(fit) == "n,count,fitted\n2,4,4\n4,16,16\n"


def test_suite_main_f():
    b = run_paper_suite(8192, ["main-f"])
    fam = b.family("main-f")
    assert b.passed, [c for c in fam.checks if not c.passed]
    assert 1.45 <= fam.fit.slope <= 1.55
    assert fam.degeneracy["verdict"] == "NonzeroCertified"
    assert fam.decompositions == {"additive": None, "multiplicative": None}


def test_suite_degenerate_sum():
    b = run_paper_suite(8192, ["degenerate-sum"])
    fam = b.family("degenerate-sum")
    assert b.passed
    assert 1.95 <= fam.fit.slope <= 2.05
    assert fam.degeneracy["verdict"] == "IdenticallyZero"
    assert fam.degeneracy["label"] == "consistent with degenerate"


def test_suite_empty():
    b = run_paper_suite(64, [])
    assert b.passed and b.families == []


def test_suite_all_families_pass_and_is_deterministic():
    a = run_paper_suite(1024, seed=5)
    assert a.passed, [(f.family, f.errors, [c.name for c in f.checks if not c.passed]) for f in a.families]
    b = run_paper_suite(1024, seed=5, workers=4)
    assert a.to_json() == b.to_json()
    assert a.plot_csv() == b.plot_csv()
    assert json.loads(a.to_json())["passed"] is True


def test_suite_rejects_unknown_family():
    with pytest.raises(ValueError):
        run_paper_suite(64, ["bogus"])


def test_suite_collects_component_errors(monkeypatch):
    import extremal.analysis as A

    def boom(*a, **k):
        raise RuntimeError("kaput")

    monkeypatch.setattr(A, "count_difference_structure", boom)
    b = run_paper_suite(64, ["main-f", "degenerate-sum"])
    assert not b.passed
    assert b.family("main-f").errors == ["RuntimeError: kaput"]
    assert b.family("degenerate-sum").passed
