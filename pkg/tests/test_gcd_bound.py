import random
from fractions import Fraction
from itertools import product

import pytest

from toricgcd.blowup import star_subdivision
from toricgcd.errors import CodimensionOne, DecompositionMismatch
from toricgcd.gcd_bound import (
    AnticanonicalDecomposition,
    bound_coefficients,
    bound_report,
    check_hypotheses,
    gamma_delta,
    per_divisor_betas,
    prime_decomposition,
)
from toricgcd.lattice_fan import projective_space
from toricgcd.toric_divisor import anticanonical_divisor, prime_divisor, shift_by_character

EPS = Fraction(1, 100)


def test_hypotheses_p1xp1(p1xp1, p1xp1_blowup):
    rep = check_hypotheses(p1xp1_blowup, prime_decomposition(p1xp1))
    assert rep.big and rep.anticanonical_volume == 8
    status = {(j, k): s for j, k, s in rep.pairs}
    assert len(status) == 6
    # pi^*D2 and pi^*D3 both contain E
    assert status[(1, 2)] == "assumed (general members)"
    assert status[(0, 2)] == "proper"
    assert rep.proper_intersection == "assumed"
    assert rep.ok


def test_hypotheses_p2_non_prime_member(p2, p2_blowup):
    d = [prime_divisor(p2, i) for i in range(3)]
    decomp = AnticanonicalDecomposition(p2, (d[0], d[1] + d[2]))
    rep = check_hypotheses(p2_blowup, decomp)
    assert rep.big
    assert rep.pairs == ((0, 1, "assumed (general members)"),)


def test_decomposition_mismatch(p2):
    d = [prime_divisor(p2, i) for i in range(3)]
    with pytest.raises(DecompositionMismatch):
        AnticanonicalDecomposition(p2, (d[0], d[1], d[2], d[0]))
    with pytest.raises(DecompositionMismatch):
        AnticanonicalDecomposition(p2, (d[0] + d[1] + d[2], 0 * d[0]))
    with pytest.raises(DecompositionMismatch):
        AnticanonicalDecomposition(p2, ())


def test_gamma_delta_p1xp1(p1xp1, p1xp1_blowup):
    decomp = prime_decomposition(p1xp1)
    assert per_divisor_betas(p1xp1_blowup, decomp) == [Fraction(19, 21)] * 4
    assert gamma_delta(p1xp1_blowup, decomp) == (Fraction(21, 19), Fraction(2, 19))


def test_delta_clamps_at_zero(p1xp1_blowup, p1xp1):
    decomp = prime_decomposition(p1xp1)
    assert gamma_delta(p1xp1_blowup, decomp, betas=[Fraction(1), Fraction(3, 2)]) == (1, 0)
    rng = random.Random(41)
    for _ in range(30):
        betas = [Fraction(rng.randint(1, 30), rng.randint(1, 20)) for _ in range(4)]
        gamma, delta = gamma_delta(p1xp1_blowup, decomp, betas=betas)
        assert (delta == 0) == all(b >= 1 for b in betas)
        assert gamma <= 1 + delta


def test_bound_report_p1xp1(p1xp1, p1xp1_blowup):
    rep = bound_report(p1xp1_blowup, prime_decomposition(p1xp1), EPS, beta_lower_bound=Fraction(7, 8))
    delta = Fraction(2, 19)
    assert rep.coeff_height == (delta + EPS) / (1 + delta + EPS)
    assert rep.coeff_height == Fraction(219, 2119)
    assert rep.coeff_weil == Fraction(1900, 2119)
    assert rep.beta_lower_bound_ok is True
    obj = rep.to_dict()
    assert obj["o1_constant"] == obj["exceptional_set"] == "unspecified-by-theory"
    assert obj["beta_lower_bound"] == {"bound": "7/8", "holds": True}


def test_formal_epsilon_zero(p1xp1, p1xp1_blowup):
    rep = bound_report(p1xp1_blowup, prime_decomposition(p1xp1), 0)
    assert rep.coeff_height == Fraction(2, 21)


def test_r3_coefficients_halve():
    for delta, eps in product([0, Fraction(2, 19), Fraction(1, 3)], [Fraction(1, 100), Fraction(1, 2)]):
        h2, w2 = bound_coefficients(delta, eps, 2)
        h3, w3 = bound_coefficients(delta, eps, 3)
        assert (h3, w3) == (h2 / 2, w2 / 2)
    with pytest.raises(CodimensionOne):
        bound_coefficients(0, EPS, 1)


def test_point_blowup_of_p3():
    p3 = projective_space(3)
    bmap = star_subdivision(p3, (0, 1, 2))
    rep = bound_report(bmap, prime_decomposition(p3), EPS)
    assert rep.r == 3
    h2, w2 = bound_coefficients(rep.delta, EPS, 2)
    assert (rep.coeff_height, rep.coeff_weil) == (h2 / 2, w2 / 2)
    assert rep.gamma <= 1 + rep.delta


def test_coefficient_monotonicity():
    grid = [Fraction(k, 7) for k in range(8)]
    for delta in grid:
        for e1, e2 in zip(grid[1:], grid[2:]):
            h1, w1 = bound_coefficients(delta, e1, 2)
            h2, w2 = bound_coefficients(delta, e2, 2)
            assert h1 < h2 and w1 > w2
    for eps in grid[1:]:
        for d1, d2 in zip(grid, grid[1:]):
            assert bound_coefficients(d1, eps, 2)[0] < bound_coefficients(d2, eps, 2)[0]
    for delta, eps in product(grid, grid[1:]):
        h, w = bound_coefficients(delta, eps, 2)
        assert h > 0 and w > 0


def test_gamma_delta_permutation_invariance(p1xp1, p1xp1_blowup):
    primes = [prime_divisor(p1xp1, i) for i in range(4)]
    rng = random.Random(42)
    base = gamma_delta(p1xp1_blowup, prime_decomposition(p1xp1))
    for _ in range(5):
        order = list(primes)
        rng.shuffle(order)
        assert gamma_delta(p1xp1_blowup, AnticanonicalDecomposition(p1xp1, tuple(order))) == base


def test_gamma_delta_character_shift_invariance(p1xp1, p1xp1_blowup):
    """Replace members by effective linearly equivalent representatives."""
    primes = [prime_divisor(p1xp1, i) for i in range(4)]
    base = gamma_delta(p1xp1_blowup, prime_decomposition(p1xp1))
    seen = 0
    for j, m in product(range(4), product(range(-1, 2), repeat=2)):
        shifted = shift_by_character(primes[j], m)
        if not shifted.is_effective() or m == (0, 0):
            continue
        members = list(primes)
        members[j] = shifted
        decomp = AnticanonicalDecomposition(p1xp1, tuple(members))
        assert gamma_delta(p1xp1_blowup, decomp) == base
        seen += 1
    assert seen >= 4


def test_anticanonical_as_single_member(p1xp1, p1xp1_blowup):
    decomp = AnticanonicalDecomposition(p1xp1, (anticanonical_divisor(p1xp1),))
    (b,) = per_divisor_betas(p1xp1_blowup, decomp)
    assert 0 < b <= 1
