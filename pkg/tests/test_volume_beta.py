import random
from fractions import Fraction

import pytest

from conftest import random_nef_divisor, random_smooth_fan
from toricgcd.blowup import exceptional_divisor, pullback, star_subdivision
from toricgcd.errors import NotBig, PreconditionError
from toricgcd.lattice_fan import projective_space, standard_fan
from toricgcd.toric_divisor import (
    ToricDivisor,
    anticanonical_divisor,
    polytope_of_divisor,
    prime_divisor,
    shift_by_character,
    zero_divisor,
)
from toricgcd.volume_beta import PiecewisePolynomial, beta, pseudoeffective_threshold, volume_function


def pieces(pw):
    return [(a, b, p) for p, a, b in zip(pw.pieces, pw.breakpoints, pw.breakpoints[1:])]


def F(*xs):
    return tuple(Fraction(x) for x in xs)


@pytest.fixture
def anti_sprime(p1xp1_blowup):
    return anticanonical_divisor(p1xp1_blowup.source_fan)


def test_thresholds(p2, p1xp1, p2_blowup, p1xp1_blowup, anti_sprime):
    assert pseudoeffective_threshold(anti_sprime, pullback(p1xp1_blowup, prime_divisor(p1xp1, 3))) == 2
    E = exceptional_divisor(p1xp1_blowup)
    for a, b in [(1, 1), (2, 3), (3, 7)]:
        L = pullback(p1xp1_blowup, a * prime_divisor(p1xp1, 2) + b * prime_divisor(p1xp1, 3))
        assert pseudoeffective_threshold(L, E) == a + b
    for a in (1, 2, 5):
        L = pullback(p2_blowup, a * prime_divisor(p2, 1))
        assert pseudoeffective_threshold(L, exceptional_divisor(p2_blowup)) == a


def test_anticanonical_volume_function(p1xp1, p1xp1_blowup, anti_sprime):
    for i in range(4):
        pw = volume_function(anti_sprime, pullback(p1xp1_blowup, prime_divisor(p1xp1, i)))
        # 7/2 - 2t on [0, 1]; (2 - t)^2 / 2 + (2 - t) = 4 - 3t + t^2/2 on [1, 2]
        assert pieces(pw) == [(0, 1, F("7/2", -2)), (1, 2, F(4, -3, "1/2"))]


def test_three_case_volume_function(p1xp1, p1xp1_blowup):
    E = exceptional_divisor(p1xp1_blowup)
    for a, b in [(1, 2), (2, 3), (3, 7)]:
        a, b = Fraction(a), Fraction(b)
        L = pullback(p1xp1_blowup, a * prime_divisor(p1xp1, 2) + b * prime_divisor(p1xp1, 3))
        pw = volume_function(L, E)
        s = a + b
        assert pieces(pw) == [
            (0, a, F(a * b, 0, Fraction(-1, 2))),
            (a, b, F(a * b + a * a / 2, -a)),
            (b, s, F(s * s / 2, -s, Fraction(1, 2))),
        ]
    # a == b: the middle piece collapses
    L = pullback(p1xp1_blowup, prime_divisor(p1xp1, 2) + prime_divisor(p1xp1, 3))
    assert len(volume_function(L, E).pieces) == 2


def test_degenerate_threshold(p2):
    pw = volume_function(zero_divisor(p2), prime_divisor(p2, 0))
    assert pw.domain == (0, 0)
    assert pw.integral() == 0
    with pytest.raises(NotBig):
        beta(zero_divisor(p2), prime_divisor(p2, 0))
    with pytest.raises(NotBig):
        pseudoeffective_threshold(zero_divisor(p2), prime_divisor(p2, 0))


def test_preconditions_on_F(p2):
    L = anticanonical_divisor(p2)
    with pytest.raises(PreconditionError):
        beta(L, zero_divisor(p2))
    with pytest.raises(PreconditionError):
        beta(L, -prime_divisor(p2, 0))
    # principal but nonzero: D1 - D3 = div(chi^m)
    with pytest.raises(PreconditionError):
        beta(L, prime_divisor(p2, 0) - prime_divisor(p2, 2))


def test_beta_examples(p2, p1xp1, p2_blowup, p1xp1_blowup, anti_sprime):
    for a in (1, 2, 3, 5):
        L = pullback(p2_blowup, a * prime_divisor(p2, 1))
        assert beta(L, exceptional_divisor(p2_blowup)).beta == Fraction(2 * a, 3)
    for a, b in [(1, 1), (1, 2), (2, 3), (3, 7)]:
        L = pullback(p1xp1_blowup, a * prime_divisor(p1xp1, 2) + b * prime_divisor(p1xp1, 3))
        assert beta(L, exceptional_divisor(p1xp1_blowup)).beta == Fraction(a + b, 2)
    for i in range(4):
        res = beta(anti_sprime, pullback(p1xp1_blowup, prime_divisor(p1xp1, i)))
        assert res.beta == Fraction(19, 21)
        assert res.volume_L == Fraction(7, 2)


def test_beta_depends_only_on_class(p1xp1, p1xp1_blowup, anti_sprime):
    Fd = pullback(p1xp1_blowup, prime_divisor(p1xp1, 1))
    for m in [(1, 0), (0, -2), (3, 1)]:
        assert beta(shift_by_character(anti_sprime, m), Fd).beta == Fraction(19, 21)
        assert beta(anti_sprime, shift_by_character(Fd, m)).beta == Fraction(19, 21)


def test_beta_in_three_dimensions():
    p3 = projective_space(3)
    bmap = star_subdivision(p3, (0, 1, 2))
    res = beta(pullback(bmap, anticanonical_divisor(p3)), exceptional_divisor(bmap))
    # P_L is a simplex with legs 4; removing t from a corner leaves (64 - t^3)/6
    assert res.gamma_eff == 4
    assert pieces(res.volume_function) == [(0, 4, F("32/3", 0, 0, "-1/6"))]
    assert res.beta == Fraction(3, 1)


def test_piecewise_polynomial_helpers():
    pw = PiecewisePolynomial((0, 1, 2), ((1, -1), (0,)))
    assert pw(Fraction(1, 2)) == Fraction(1, 2)
    assert pw.integral() == Fraction(1, 2)
    assert pw.is_continuous()
    assert pw.to_list()[0] == {"interval": ["0", "1"], "coeffs": ["1", "-1"]}
    with pytest.raises(ValueError):
        pw(3)
    merged = PiecewisePolynomial((0, 1, 2), ((1, 2), (1, 2))).merged()
    assert merged.breakpoints == (0, 2)


# corpus properties -------------------------------------------------------------

def corpus(seed=31, n=20):
    """(L, F) pairs on randomized smooth surfaces, with F a pulled-back prime or E."""
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        base = random_smooth_fan(rng, max_blowups=1)
        bmap = star_subdivision(base, rng.choice(base.max_cones))
        L = pullback(bmap, random_nef_divisor(base, rng, hi=3))
        if rng.random() < 0.5:
            Fd = exceptional_divisor(bmap)
        else:
            Fd = pullback(bmap, prime_divisor(base, rng.randrange(base.n_rays)))
        out.append((L, Fd))
    return out


CORPUS = corpus()


def test_piecewise_matches_direct_volume():
    rng = random.Random(32)
    for L, Fd in CORPUS:
        pw = volume_function(L, Fd)
        gamma = pw.domain[1]
        assert pw.is_continuous()
        for _ in range(20):
            t = gamma * Fraction(rng.randint(0, 997), 997)
            assert pw(t) == polytope_of_divisor(L - t * Fd).volume()


def test_volume_function_nonincreasing():
    for L, Fd in CORPUS:
        pw = volume_function(L, Fd)
        gamma = pw.domain[1]
        vals = [pw(gamma * Fraction(j, 50)) for j in range(51)]
        assert all(x >= y for x, y in zip(vals, vals[1:]))
        assert vals[-1] >= 0


def test_beta_bounded_by_threshold():
    for L, Fd in CORPUS:
        res = beta(L, Fd)
        assert 0 < res.beta <= res.gamma_eff


def test_beta_scaling_invariance():
    for k, (L, Fd) in zip([2, 3, 5] * 7, CORPUS):
        assert beta(k * L, k * Fd).beta == beta(L, Fd).beta


def _count_area(L, Fd, t, k):
    return len(polytope_of_divisor(k * (L - t * Fd)).lattice_points()) / k ** 2


def test_simpson_lattice_oracle():
    """Simpson's rule on lattice-count areas at k = 60 agrees with exact beta to 3%."""
    k, n = 60, 12
    for L, Fd in CORPUS[:8]:
        res = beta(L, Fd)
        g = res.gamma_eff
        h = g / n
        vals = [_count_area(L, Fd, h * j, k) for j in range(n + 1)]
        simpson = float(h) / 3 * (vals[0] + vals[-1] + 4 * sum(vals[1:-1:2]) + 2 * sum(vals[2:-1:2]))
        approx = simpson / vals[0]
        assert abs(approx - float(res.beta)) / float(res.beta) < 0.03
