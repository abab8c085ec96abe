"""Heights, Weil functions and gcd heights over the rational numbers.

Only the number field Q is supported.  Places are the primes ``p`` with
``|x|_p = p^(-ord_p x)`` and the infinite place with the usual absolute
value, so the product formula holds with multiplicity one.

Every local quantity here is the logarithm of a positive rational, so it is
represented exactly as a :class:`FactoredLog` ``sum_p c_p log p``.

Conventions on the blown-up P1 x P1 (point ``x' = [1:alpha] x [1:beta]``):

* ``lambda_{E,v} = min(max(-log|alpha|_v, 0), max(-log|beta|_v, 0))``; summed
  over all places this is ``h_gcd(alpha, beta)`` with no O(1) term.
* ``-pi^*K`` is represented by ``2{alpha = 0} + 2{beta = 0}``, so
  ``lambda_{-pi^*K, v} = 2 max(-log|alpha|_v, 0) + 2 max(-log|beta|_v, 0)``
  and ``lambda_{pi^*K, v}`` is its negative.  These sum to
  ``h_{-pi^*K} = 2 h(alpha) + 2 h(beta)``.
* The inequality checked by :func:`sweep_inequality` is
  ``h_E <= coeff_height * h_{-pi^*K} - coeff_weil * sum_{v not in S} lambda_{pi^*K, v}``
  with the O(1) term dropped.  Since the O(1) term and the exceptional set
  are unknown, the sweep is a heuristic characterization, not a proof or
  refutation.
"""

import csv
import math
import random
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from sympy import factorint, isprime, multiplicity

from .errors import EmptyGrid, ZeroInput
from .rational import as_fraction, format_rational

__all__ = [
    "Place",
    "INFINITY",
    "FactoredLog",
    "ord_p",
    "abs_log",
    "log_gcd",
    "h_gcd",
    "local_gcd",
    "weil_E",
    "height_p1",
    "height_p1_exact",
    "lambda_anticanonical",
    "product_formula_sum",
    "places_of",
    "SweepReport",
    "sweep_inequality",
    "max_excess_slope",
    "parse_places",
]


@dataclass(frozen=True)
class Place:
    """A place of Q: ``prime=None`` is the infinite place."""

    prime: int = None

    def __post_init__(self):
        if self.prime is not None and not isprime(int(self.prime)):
            raise ValueError(f"{self.prime} is not prime")

    @property
    def is_infinite(self):
        return self.prime is None

    def __str__(self):
        return "inf" if self.prime is None else str(self.prime)


INFINITY = Place()


def parse_places(text):
    """``"inf,2,3"`` -> set of places."""
    out = set()
    for tok in str(text).split(","):
        tok = tok.strip().lower()
        if not tok:
            continue
        out.add(INFINITY if tok in ("inf", "infinity", "oo") else Place(int(tok)))
    return out


@dataclass(frozen=True)
class FactoredLog:
    """Exact real number ``sum_p c_p log p`` with rational ``c_p``."""

    terms: tuple = ()

    @classmethod
    def from_mapping(cls, mapping):
        return cls(tuple(sorted((int(p), Fraction(c)) for p, c in mapping.items() if c != 0)))

    @classmethod
    def of(cls, q):
        """``log q`` for a positive rational ``q``."""
        q = as_fraction(q)
        if q <= 0:
            raise ValueError("log of a nonpositive number")
        m = defaultdict(Fraction)
        for p, e in factorint(q.numerator).items():
            m[p] += e
        for p, e in factorint(q.denominator).items():
            m[p] -= e
        return cls.from_mapping(m)

    def _map(self):
        return dict(self.terms)

    def __add__(self, other):
        m = defaultdict(Fraction, self._map())
        for p, c in other.terms:
            m[p] += c
        return FactoredLog.from_mapping(m)

    def __neg__(self):
        return FactoredLog(tuple((p, -c) for p, c in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        k = as_fraction(k)
        return FactoredLog.from_mapping({p: k * c for p, c in self.terms})

    __rmul__ = __mul__

    def is_zero(self):
        return not self.terms

    @property
    def value(self):
        return float(sum(float(c) * math.log(p) for p, c in self.terms))

    def __float__(self):
        return self.value

    def to_dict(self):
        return {"factors": [[p, format_rational(c)] for p, c in self.terms], "float": self.value}


ZERO = FactoredLog()


def _nonzero(*xs):
    out = []
    for x in xs:
        x = as_fraction(x)
        if x == 0:
            raise ZeroInput("inputs must be nonzero")
        out.append(x)
    return out


def ord_p(x, p):
    x = as_fraction(x)
    if x == 0:
        raise ZeroInput("ord_p(0) is infinite")
    return multiplicity(p, abs(x.numerator)) - multiplicity(p, x.denominator)


def abs_log(place, x):
    """``log |x|_v``."""
    (x,) = _nonzero(x)
    if place.is_infinite:
        return FactoredLog.of(abs(x))
    return FactoredLog.from_mapping({place.prime: -ord_p(x, place.prime)})


def places_of(*xs):
    """The infinite place and every prime where some input is not a unit."""
    primes = set()
    for x in xs:
        x = as_fraction(x)
        primes |= set(factorint(abs(x.numerator))) | set(factorint(x.denominator))
    return [INFINITY] + [Place(p) for p in sorted(primes)]


def log_gcd(alpha, beta):
    """``log gcd(alpha, beta)`` for nonzero integers, factored."""
    alpha, beta = _nonzero(alpha, beta)
    if alpha.denominator != 1 or beta.denominator != 1:
        raise ValueError("log_gcd takes integers; use h_gcd for rationals")
    return FactoredLog.from_mapping(factorint(math.gcd(alpha.numerator, beta.numerator)))


def local_gcd(place, alpha, beta):
    """``min(max(-log|alpha|_v, 0), max(-log|beta|_v, 0))``, exactly."""
    alpha, beta = _nonzero(alpha, beta)
    if place.is_infinite:
        r = min(max(1 / abs(alpha), Fraction(1)), max(1 / abs(beta), Fraction(1)))
        return FactoredLog.of(r)
    p = place.prime
    e = min(max(ord_p(alpha, p), 0), max(ord_p(beta, p), 0))
    return FactoredLog.from_mapping({p: e})


def weil_E(place, alpha, beta):
    """Local Weil function of the exceptional divisor at ``pi^-1(alpha, beta)``."""
    return local_gcd(place, alpha, beta).value


def h_gcd(alpha, beta):
    """Generalized log gcd, summed place by place."""
    alpha, beta = _nonzero(alpha, beta)
    total = ZERO
    for v in places_of(alpha, beta):
        total = total + local_gcd(v, alpha, beta)
    return total


def height_p1_exact(x):
    x = as_fraction(x)
    return FactoredLog.of(max(abs(x.numerator), x.denominator))


def height_p1(x):
    """Weil height of ``[1 : x]``: ``log max(|p|, |q|)`` for ``x = p/q`` reduced."""
    return height_p1_exact(x).value


def _pos_part(place, x):
    """``max(-log|x|_v, 0)``."""
    if place.is_infinite:
        return FactoredLog.of(max(1 / abs(x), Fraction(1)))
    return FactoredLog.from_mapping({place.prime: max(ord_p(x, place.prime), 0)})


def lambda_anticanonical(place, alpha, beta):
    """``lambda_{-pi^*K, v}`` for the representative ``2{alpha=0} + 2{beta=0}``."""
    alpha, beta = _nonzero(alpha, beta)
    return 2 * _pos_part(place, alpha) + 2 * _pos_part(place, beta)


def product_formula_sum(x):
    """``sum_v log|x|_v``; identically zero on Q^x."""
    total = ZERO
    for v in places_of(x):
        total = total + abs_log(v, x)
    return total


# Sweep

def _low_height_relation(alpha, beta, max_exp=3):
    """Return ``(i, j)`` with ``alpha^i = beta^(+-j)``, ``1 <= i, j <= max_exp``, or None."""
    for i in range(1, max_exp + 1):
        ai = alpha ** i
        for j in range(1, max_exp + 1):
            bj = beta ** j
            if ai == bj:
                return (i, j)
            if ai * bj == 1:
                return (i, -j)
    return None


def _sample(alpha, beta, ch, cw, finite_s, inf_in_s):
    """(lhs, rhs) in floats via closed forms of the place sums."""
    a, b, c, d = alpha.numerator, alpha.denominator, beta.numerator, beta.denominator
    inv_a = max(Fraction(b, abs(a)), Fraction(1))
    inv_b = max(Fraction(d, abs(c)), Fraction(1))
    lhs = math.log(math.gcd(a, c)) + math.log(min(inv_a, inv_b))
    h = 2 * math.log(max(abs(a), b)) + 2 * math.log(max(abs(c), d))
    # sum over finite p not in S of 2 max(ord_p, 0) log p, for both coordinates
    off_s = math.log(abs(a)) + math.log(abs(c))
    for p in finite_s:
        off_s -= (multiplicity(p, abs(a)) + multiplicity(p, abs(c))) * math.log(p)
    off_s *= 2
    if not inf_in_s:
        off_s += 2 * math.log(inv_a) + 2 * math.log(inv_b)
    return lhs, ch * h + cw * off_s


@dataclass
class SweepReport:
    delta: Fraction
    epsilon: Fraction
    places: tuple
    grid: tuple
    seed: int
    rows: list = field(repr=False)
    max_excess: float = 0.0
    argmax: tuple = None
    histogram: tuple = None
    z_suspects: list = field(default_factory=list, repr=False)
    label: str = "heuristic characterization; O(1) term and exceptional set unspecified"

    @property
    def samples(self):
        return len(self.rows)

    @property
    def lhs_values(self):
        return [r[2] for r in self.rows]

    @property
    def rhs_values(self):
        return [r[3] for r in self.rows]

    def to_dict(self):
        counts, edges = self.histogram
        return {
            "label": self.label,
            "delta": format_rational(self.delta),
            "epsilon": format_rational(self.epsilon),
            "places": [str(p) for p in self.places],
            "grid": list(self.grid),
            "seed": self.seed,
            "samples": self.samples,
            "max_excess_float": self.max_excess,
            "argmax": [format_rational(x) for x in self.argmax],
            "excess_histogram": {"counts": [int(c) for c in counts],
                                 "edges_float": [float(e) for e in edges]},
            "z_suspects": len(self.z_suspects),
            "z_suspect_examples": [
                {"alpha": format_rational(a), "beta": format_rational(b),
                 "relation": list(rel), "ratio_float": ratio}
                for a, b, rel, ratio in self.z_suspects[:20]
            ],
        }

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["alpha", "beta", "lhs", "rhs", "excess"])
            for a, b, lhs, rhs, ex in self.rows:
                w.writerow([format_rational(a), format_rational(b), repr(lhs), repr(rhs), repr(ex)])


def _grid_values(grid):
    if isinstance(grid, int):
        grid = range(1, grid + 1)
    vals = [int(g) for g in grid if int(g) != 0]
    if not vals:
        raise EmptyGrid("grid has no nonzero values")
    return vals


def sweep_inequality(report, places, grid, seed=0, n_random=0):
    """Evaluate both sides of the gcd bound over a grid of points.

    Every pair of nonzero integers from ``grid`` (an int N means 1..N) is
    sampled, plus ``n_random`` seeded rational pairs whose numerators and
    denominators are drawn from the grid.  Points on low-height
    multiplicative relations (``alpha^i = beta^(+-j)``) are recorded as
    candidates for the exceptional set, never dropped.
    """
    if report.r != 2:
        raise ValueError("the sweep models a point blow-up of P1 x P1 (r = 2)")
    vals = _grid_values(grid)
    places = tuple(sorted(places, key=lambda v: (v.prime is not None, v.prime or 0)))
    finite_s = [v.prime for v in places if not v.is_infinite]
    inf_in_s = any(v.is_infinite for v in places)
    ch, cw = float(report.coeff_height), float(report.coeff_weil)

    pairs = [(Fraction(a), Fraction(b)) for a in vals for b in vals]
    rng = random.Random(seed)
    for _ in range(n_random):
        pairs.append(tuple(Fraction(rng.choice(vals), abs(rng.choice(vals))) for _ in range(2)))

    rows, suspects = [], []
    for alpha, beta in pairs:
        lhs, rhs = _sample(alpha, beta, ch, cw, finite_s, inf_in_s)
        rows.append((alpha, beta, lhs, rhs, lhs - rhs))
        rel = _low_height_relation(alpha, beta)
        if rel is not None:
            suspects.append((alpha, beta, rel, lhs / rhs if rhs > 0 else math.inf))
    excess = np.array([r[4] for r in rows])
    k = int(np.argmax(excess))
    hist = np.histogram(excess, bins=20)
    return SweepReport(
        delta=report.delta, epsilon=report.epsilon, places=places,
        grid=(min(vals), max(vals)), seed=seed, rows=rows,
        max_excess=float(excess[k]), argmax=rows[k][:2], histogram=hist,
        z_suspects=suspects,
    )


def max_excess_slope(report, places, sides=(50, 100, 200), seed=0):
    """Least-squares slope of the per-grid max excess against ``log(side)``."""
    maxima = [sweep_inequality(report, places, n, seed=seed).max_excess for n in sides]
    slope = float(np.polyfit(np.log(np.array(sides, dtype=float)), np.array(maxima), 1)[0])
    return slope, maxima
