import random
from fractions import Fraction
from itertools import combinations

import pytest

from toricgcd.blowup import star_subdivision
from toricgcd.lattice_fan import p1_power, projective_space, standard_fan
from toricgcd.toric_divisor import ToricDivisor, is_nef, polytope_of_divisor


@pytest.fixture
def p2():
    return standard_fan("P2")


@pytest.fixture
def p1xp1():
    return standard_fan("P1xP1")


@pytest.fixture
def p2_blowup(p2):
    return star_subdivision(p2, (0, 2))


@pytest.fixture
def p1xp1_blowup(p1xp1):
    return star_subdivision(p1xp1, (1, 2))


BASES_2D = ("P2", "P1xP1", "F2")


def base_fan(name):
    if name == "P3":
        return projective_space(3)
    if name == "P1^3":
        return p1_power(3)
    return standard_fan(name)


def random_center(fan, rng, sizes=None):
    """A random cone of the fan with at least two rays."""
    cands = []
    for sigma in fan.max_cones:
        for k in range(2, len(sigma) + 1):
            if sizes is None or k in sizes:
                cands.extend(combinations(sigma, k))
    return rng.choice(sorted(set(cands)))


def random_smooth_fan(rng, names=BASES_2D, max_blowups=2):
    fan = base_fan(rng.choice(names))
    for _ in range(rng.randint(0, max_blowups)):
        fan = star_subdivision(fan, random_center(fan, rng)).source_fan
    return fan


def random_nef_divisor(fan, rng, hi=4):
    """Rejection-sample a nef and big integral divisor."""
    while True:
        d = ToricDivisor(fan, tuple(rng.randint(0, hi) for _ in range(fan.n_rays)))
        if is_nef(d) and polytope_of_divisor(d).volume() > 0:
            return d


def random_rational(rng, lo=-20, hi=20, den=6):
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS):
            terminalreporter.write_line(line)
