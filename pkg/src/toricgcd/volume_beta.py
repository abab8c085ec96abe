"""Pseudoeffective thresholds, volume functions and asymptotic volume constants.

For a big torus-invariant divisor ``L`` and an effective torus-invariant
``F`` on the same fan, the polytopes

    P(t) = {m : <m, v_i> >= -a_i + t f_i}

shrink as ``t`` grows and become empty after the pseudoeffective threshold
``gamma_eff``.  Their Euclidean area is a piecewise polynomial of degree at
most ``dim`` in ``t``; ``beta(L, F)`` is its integral over ``[0, gamma_eff]``
divided by ``Vol(P_L)``.
"""

import bisect
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from . import _linalg
from .errors import NotBig, PreconditionError, Unbounded
from .polytope import fourier_motzkin
from .rational import as_fraction, format_rational
from .toric_divisor import polytope_of_divisor

__all__ = [
    "PiecewisePolynomial",
    "BetaResult",
    "pseudoeffective_threshold",
    "volume_function",
    "beta",
]


def poly_eval(coeffs, t):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def poly_integral(coeffs, a, b):
    return sum((c * (b ** (k + 1) - a ** (k + 1)) / (k + 1) for k, c in enumerate(coeffs)), Fraction(0))


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs) or (Fraction(0),)


def interpolate(xs, ys):
    """Exact interpolating polynomial through the nodes, constant term first."""
    vander = [[x ** k for k in range(len(xs))] for x in xs]
    coeffs = _linalg.solve(vander, ys)
    if coeffs is None:
        raise ValueError("interpolation nodes must be distinct")
    return _trim(coeffs)


@dataclass(frozen=True)
class PiecewisePolynomial:
    """Polynomial pieces on consecutive intervals ``[b_k, b_{k+1}]``."""

    breakpoints: tuple
    pieces: tuple

    def __post_init__(self):
        bps = tuple(as_fraction(b) for b in self.breakpoints)
        pieces = tuple(_trim(as_fraction(c) for c in p) for p in self.pieces)
        if len(pieces) != len(bps) - 1:
            raise ValueError("need exactly one piece per interval")
        if any(a > b for a, b in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be increasing")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "pieces", pieces)

    @property
    def domain(self):
        return self.breakpoints[0], self.breakpoints[-1]

    def __call__(self, t):
        t = as_fraction(t)
        lo, hi = self.domain
        if t < lo or t > hi:
            raise ValueError(f"t = {t} outside [{lo}, {hi}]")
        k = min(max(bisect.bisect_right(self.breakpoints, t) - 1, 0), len(self.pieces) - 1)
        return poly_eval(self.pieces[k], t)

    def integral(self):
        return sum((poly_integral(p, a, b) for p, a, b in
                    zip(self.pieces, self.breakpoints, self.breakpoints[1:])), Fraction(0))

    def scaled(self, k):
        k = as_fraction(k)
        return PiecewisePolynomial(self.breakpoints, tuple(tuple(k * c for c in p) for p in self.pieces))

    def merged(self):
        """Drop breakpoints whose neighbouring pieces coincide."""
        bps, pieces = [self.breakpoints[0]], []
        for p, b in zip(self.pieces, self.breakpoints[1:]):
            if pieces and pieces[-1] == p:
                bps[-1] = b
            else:
                pieces.append(p)
                bps.append(b)
        return PiecewisePolynomial(tuple(bps), tuple(pieces))

    def is_continuous(self):
        return all(poly_eval(p, b) == poly_eval(q, b)
                   for p, q, b in zip(self.pieces, self.pieces[1:], self.breakpoints[1:-1]))

    def to_list(self):
        return [
            {"interval": [format_rational(a), format_rational(b)],
             "coeffs": [format_rational(c) for c in p]}
            for p, a, b in zip(self.pieces, self.breakpoints, self.breakpoints[1:])
        ]


@dataclass(frozen=True)
class BetaResult:
    beta: Fraction
    gamma_eff: Fraction
    volume_L: Fraction
    volume_function: PiecewisePolynomial

    def to_dict(self):
        return {
            "beta": format_rational(self.beta),
            "gamma_eff": format_rational(self.gamma_eff),
            "volume_L": format_rational(self.volume_L),
            "pieces": self.volume_function.to_list(),
        }


def _principal(F):
    """True iff ``F = div(chi^m)`` for some rational character m."""
    fan = F.fan
    cone = fan.max_cones[0]
    m = _linalg.solve(fan.generators(cone), [F.coeffs[i] for i in cone])
    return all(_linalg.dot(m, v) == a for v, a in zip(fan.rays, F.coeffs))


def _check_pair(L, F):
    """F must be linearly equivalent to a nonzero effective divisor.

    A coefficientwise-effective F passes directly; otherwise P_F must be
    nonempty (the class is effective) and F must not be principal.
    """
    if L.fan != F.fan:
        raise ValueError("L and F must live on the same fan")
    if F.is_effective() and not F.is_zero():
        return
    if polytope_of_divisor(F).is_empty() or _principal(F):
        raise PreconditionError("F must be linearly equivalent to a nonzero effective divisor",
                                F=F.to_dict()["coeffs"])


def _threshold(L, F):
    """sup{t >= 0 : P_{L - tF} nonempty}, by projecting (m, t) space onto t."""
    d = L.fan.dim
    rows = [(tuple(v) + (-f,), -a) for v, a, f in zip(L.fan.rays, L.coeffs, F.coeffs)]
    rows.append((tuple([0] * d) + (1,), 0))
    proj = fourier_motzkin(rows, range(d))
    if proj is None:
        raise NotBig("P_L is empty: L is not effective")
    upper = [rhs / c[d] for c, rhs in proj if c[d] < 0]
    if not upper:
        raise Unbounded("pseudoeffective threshold is infinite")
    return min(upper)


def pseudoeffective_threshold(L, F):
    _check_pair(L, F)
    if polytope_of_divisor(L).volume() == 0:
        raise NotBig("L is not big", L=L.to_dict()["coeffs"])
    return _threshold(L, F)


def _slice_volume(L, F, t):
    return polytope_of_divisor(L - t * F).volume()


def _breakpoint_candidates(L, F, gamma):
    """Values of t where d + 1 of the moving facets pass through one point."""
    fan = L.fan
    d = fan.dim
    rows = [(tuple(v) + (-f,), -a) for v, a, f in zip(fan.rays, L.coeffs, F.coeffs)]
    out = {Fraction(0), gamma}
    for combo in combinations(rows, d + 1):
        if all(r[0][d] == 0 for r in combo):
            continue
        x = _linalg.solve([r[0] for r in combo], [r[1] for r in combo])
        if x is not None and 0 < x[d] < gamma:
            out.add(x[d])
    return sorted(out)


def volume_function(L, F):
    """Exact piecewise polynomial ``t -> Vol(P_{L - tF})`` on ``[0, gamma_eff]``."""
    _check_pair(L, F)
    gamma = _threshold(L, F)
    d = L.fan.dim
    if polytope_of_divisor(L).volume() == 0:
        return PiecewisePolynomial((Fraction(0), gamma), ((Fraction(0),),))
    bps = _breakpoint_candidates(L, F, gamma)
    pieces = []
    for a, b in zip(bps, bps[1:]):
        nodes = [a + (b - a) * Fraction(j, d + 3) for j in range(1, d + 3)]
        vals = [_slice_volume(L, F, t) for t in nodes]
        coeffs = interpolate(nodes[:-1], vals[:-1])
        if poly_eval(coeffs, nodes[-1]) != vals[-1]:
            raise AssertionError(f"volume is not polynomial on [{a}, {b}]: missed breakpoint")
        pieces.append(coeffs)
    pw = PiecewisePolynomial(tuple(bps), tuple(pieces)).merged()
    assert pw.is_continuous()
    return pw


def beta(L, F):
    """``beta(L, F) = int_0^gamma_eff Vol(P_{L - tF}) dt / Vol(P_L)``."""
    _check_pair(L, F)
    vol_l = polytope_of_divisor(L).volume()
    if vol_l == 0:
        raise NotBig("L is not big", L=L.to_dict()["coeffs"])
    pw = volume_function(L, F)
    return BetaResult(pw.integral() / vol_l, pw.domain[1], vol_l, pw)
