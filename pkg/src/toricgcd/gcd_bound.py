"""Coefficients of the generalized-gcd height bound for a toric blow-up.

Given a blow-up ``pi: X' -> X`` along a torus-invariant center of
codimension ``r >= 2`` and effective divisors ``D_1 + ... + D_q ~ -K_X``,

    gamma = max_j 1 / beta(-K_{X'}, pi^* D_j),   delta = max(gamma - 1, 0),

and outside an unspecified proper Zariski closed set the height along the
exceptional divisor satisfies

    h_E <= coeff_height * h_{-pi^*K_X} - coeff_weil * sum_{v not in S} lambda_{pi^*K_X, v} + O(1)

with ``coeff_height = (delta + eps) / ((1 + delta + eps)(r - 1))`` and
``coeff_weil = 1 / ((1 + delta + eps)(r - 1))``.  Neither the O(1) term nor
the closed set is computable from this data; the report carries them as
placeholders.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from . import _linalg
from .blowup import pullback
from .errors import CodimensionOne, DecompositionMismatch
from .rational import as_fraction, format_rational
from .toric_divisor import (
    ToricDivisor,
    anticanonical_divisor,
    intersect_properly,
    linear_equivalence_character,
    prime_divisor,
    shift_by_character,
    supports_intersect_properly,
    volume_of_divisor,
)
from .volume_beta import beta

__all__ = [
    "AnticanonicalDecomposition",
    "HypothesisReport",
    "GcdBoundReport",
    "prime_decomposition",
    "check_hypotheses",
    "gamma_delta",
    "bound_coefficients",
    "bound_report",
]

UNSPECIFIED = "unspecified-by-theory"


@dataclass(frozen=True)
class AnticanonicalDecomposition:
    fan: object
    divisors: tuple

    def __post_init__(self):
        divisors = tuple(self.divisors)
        if not divisors:
            raise DecompositionMismatch("empty decomposition")
        for d in divisors:
            if d.fan != self.fan:
                raise DecompositionMismatch("decomposition member lives on another fan")
            if not d.is_effective() or d.is_zero():
                raise DecompositionMismatch(f"{d!r} is not effective and nonzero",
                                            divisor=d.to_dict()["coeffs"])
        total = divisors[0]
        for d in divisors[1:]:
            total = total + d
        if linear_equivalence_character(total, anticanonical_divisor(self.fan)) is None:
            raise DecompositionMismatch(
                "divisors do not sum to the anticanonical class",
                sum=total.to_dict()["coeffs"],
            )
        object.__setattr__(self, "divisors", divisors)

    @classmethod
    def from_dict(cls, fan, obj):
        return cls(fan, tuple(ToricDivisor.from_dict(fan, d) for d in obj["divisors"]))


def prime_decomposition(fan):
    """``-K_X = D_1 + ... + D_n`` into the prime torus-invariant divisors."""
    return AnticanonicalDecomposition(fan, tuple(prime_divisor(fan, i) for i in range(fan.n_rays)))


@dataclass(frozen=True)
class HypothesisReport:
    anticanonical_volume: Fraction
    big: bool
    pairs: tuple  # (j, k, status)
    proper_intersection: str  # "verified" | "assumed" | "failed"

    @property
    def ok(self):
        return self.big and self.proper_intersection != "failed"

    def to_dict(self):
        return {
            "anticanonical_volume": format_rational(self.anticanonical_volume),
            "big": self.big,
            "proper_intersection": self.proper_intersection,
            "pairs": [{"j": j, "k": k, "status": s} for j, k, s in self.pairs],
        }


def _pullbacks(bmap, decomp):
    if decomp.fan != bmap.target_fan:
        raise DecompositionMismatch("decomposition does not live on the blow-up's target fan")
    return [pullback(bmap, d) for d in decomp.divisors]


def check_hypotheses(bmap, decomp):
    """Bigness of ``-K_X`` and proper intersection of the pulled-back members.

    Pairs whose pullbacks are both prime, or whose supports are disjoint,
    are decided exactly.  Pairs sharing a prime component are reported as
    ``"assumed (general members)"``: the bound only needs some linearly
    equivalent members meeting properly, which torus-invariant data cannot
    exhibit.
    """
    vol = volume_of_divisor(anticanonical_divisor(bmap.target_fan))
    pulled = _pullbacks(bmap, decomp)
    pairs = []
    for j, k in combinations(range(len(pulled)), 2):
        a, b = pulled[j], pulled[k]
        if a.is_prime() and b.is_prime():
            status = "proper" if intersect_properly([a, b]) else "not proper"
        elif supports_intersect_properly([a, b]):
            status = "proper"
        else:
            status = "assumed (general members)"
        pairs.append((j, k, status))
    statuses = {s for _, _, s in pairs}
    if "not proper" in statuses:
        overall = "failed"
    elif "assumed (general members)" in statuses:
        overall = "assumed"
    else:
        overall = "verified"
    return HypothesisReport(vol, vol > 0, tuple(pairs), overall)


def _normal_form(d):
    """Shift by a character so D vanishes on the rays of the first maximal cone."""
    fan = d.fan
    cone = fan.max_cones[0]
    m = _linalg.solve(fan.generators(cone), [-d.coeffs[i] for i in cone])
    return shift_by_character(d, m)


def per_divisor_betas(bmap, decomp):
    anti = _normal_form(anticanonical_divisor(bmap.source_fan))
    return [beta(anti, _normal_form(pd)).beta for pd in _pullbacks(bmap, decomp)]


def gamma_delta(bmap, decomp, betas=None):
    """``(gamma, delta)`` with the minimal admissible ``delta = max(gamma - 1, 0)``."""
    if betas is None:
        betas = per_divisor_betas(bmap, decomp)
    gamma = max(1 / b for b in betas)
    return gamma, max(gamma - 1, Fraction(0))


def bound_coefficients(delta, epsilon, r):
    """``(coeff_height, coeff_weil)`` of the final inequality; ``epsilon = 0`` is allowed as a formal limit."""
    delta, epsilon = as_fraction(delta), as_fraction(epsilon)
    if r < 2:
        raise CodimensionOne("center must have codimension r >= 2", r=r)
    if epsilon < 0 or delta < 0:
        raise ValueError("delta and epsilon must be nonnegative")
    denom = (1 + delta + epsilon) * (r - 1)
    return (delta + epsilon) / denom, 1 / denom


@dataclass(frozen=True)
class GcdBoundReport:
    gamma: Fraction
    delta: Fraction
    r: int
    epsilon: Fraction
    coeff_height: Fraction
    coeff_weil: Fraction
    per_divisor_betas: tuple
    hypotheses: HypothesisReport = None
    beta_lower_bound: Fraction = None
    o1_constant: str = UNSPECIFIED
    exceptional_set: str = UNSPECIFIED

    @property
    def beta_lower_bound_ok(self):
        if self.beta_lower_bound is None:
            return None
        return all(b >= self.beta_lower_bound for b in self.per_divisor_betas)

    def to_dict(self):
        out = {
            "gamma": format_rational(self.gamma),
            "delta": format_rational(self.delta),
            "r": self.r,
            "epsilon": format_rational(self.epsilon),
            "coeff_height": format_rational(self.coeff_height),
            "coeff_weil": format_rational(self.coeff_weil),
            "per_divisor_betas": [format_rational(b) for b in self.per_divisor_betas],
            "o1_constant": self.o1_constant,
            "exceptional_set": self.exceptional_set,
        }
        if self.beta_lower_bound is not None:
            out["beta_lower_bound"] = {
                "bound": format_rational(self.beta_lower_bound),
                "holds": self.beta_lower_bound_ok,
            }
        if self.hypotheses is not None:
            out["hypotheses"] = self.hypotheses.to_dict()
        return out


def bound_report(bmap, decomp, epsilon, beta_lower_bound=None):
    r = bmap.codim
    if r < 2:
        raise CodimensionOne("center must have codimension r >= 2", r=r)
    hyp = check_hypotheses(bmap, decomp)
    betas = per_divisor_betas(bmap, decomp)
    gamma, delta = gamma_delta(bmap, decomp, betas)
    epsilon = as_fraction(epsilon)
    ch, cw = bound_coefficients(delta, epsilon, r)
    assert gamma <= 1 + delta
    lb = None if beta_lower_bound is None else as_fraction(beta_lower_bound)
    return GcdBoundReport(gamma, delta, r, epsilon, ch, cw, tuple(betas), hyp, lb)
