import random

import pytest

from extremal import kernels
from extremal.polyring import Polynomial

BACKENDS = ["numpy"] + (["numba"] if kernels.numba_impl is not None else [])


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


def random_poly(rng: random.Random, variables, max_deg=4, max_terms=6, coef=5, rational=False):
    """Random polynomial of total degree <= max_deg over ``variables``."""
    from fractions import Fraction

    m = len(variables)
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        d = rng.randint(0, max_deg)
        mono = [0] * m
        for _ in range(d):
            mono[rng.randrange(m)] += 1
        c = rng.randint(-coef, coef)
        if rational and rng.random() < 0.3:
            c = Fraction(c, rng.randint(1, 4))
        terms[tuple(mono)] = terms.get(tuple(mono), 0) + c
    return Polynomial(variables, terms)


def random_uni(rng: random.Random, name, deg, coef=3):
    """Univariate polynomial of exact degree ``deg`` >= 1."""
    while True:
        c = [rng.randint(-coef, coef) for _ in range(deg + 1)]
        if c[-1]:
            return Polynomial((name,), {(e,): v for e, v in enumerate(c) if v})


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        terminalreporter.write_line(results[num])
