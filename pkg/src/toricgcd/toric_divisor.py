"""Torus-invariant divisors ``D = sum a_i D_i`` on a fan.

Coefficients are Fractions so that R-divisors like ``pi^*L - t E`` at a
rational ``t`` reuse the same type.
"""

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from . import _linalg
from .errors import NonInvertibleFlagMap, NotPrime, PreconditionError
from .polytope import HalfSpace, Polytope
from .rational import as_fraction, format_rational

__all__ = [
    "ToricDivisor",
    "TorusFlag",
    "prime_divisor",
    "zero_divisor",
    "canonical_divisor",
    "anticanonical_divisor",
    "polytope_of_divisor",
    "shift_by_character",
    "volume_of_divisor",
    "intersect_properly",
    "supports_intersect_properly",
    "okounkov_body",
    "linear_equivalence_character",
    "support_function",
    "is_nef",
    "global_sections",
]


@dataclass(frozen=True)
class ToricDivisor:
    fan: object
    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(as_fraction(c) for c in self.coeffs)
        if len(coeffs) != self.fan.n_rays:
            raise ValueError(
                f"divisor has {len(coeffs)} coefficients but the fan has {self.fan.n_rays} rays")
        object.__setattr__(self, "coeffs", coeffs)

    def _check_same(self, other):
        if other.fan != self.fan:
            raise ValueError("divisors live on different fans")

    def __add__(self, other):
        self._check_same(other)
        return ToricDivisor(self.fan, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check_same(other)
        return ToricDivisor(self.fan, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return ToricDivisor(self.fan, tuple(-a for a in self.coeffs))

    def __mul__(self, k):
        k = as_fraction(k)
        return ToricDivisor(self.fan, tuple(k * a for a in self.coeffs))

    __rmul__ = __mul__

    def __repr__(self):
        terms = [f"{format_rational(a)}*D{i}" for i, a in enumerate(self.coeffs) if a]
        return "ToricDivisor(" + (" + ".join(terms) or "0") + ")"

    @property
    def support(self):
        return tuple(i for i, a in enumerate(self.coeffs) if a != 0)

    def is_zero(self):
        return not any(self.coeffs)

    def is_effective(self):
        return all(a >= 0 for a in self.coeffs)

    def is_integral(self):
        return all(a.denominator == 1 for a in self.coeffs)

    def is_prime(self):
        return len(self.support) == 1 and self.coeffs[self.support[0]] == 1

    def to_dict(self):
        return {"coeffs": [format_rational(a) for a in self.coeffs]}

    @classmethod
    def from_dict(cls, fan, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(fan, tuple(as_fraction(c) for c in obj["coeffs"]))


def prime_divisor(fan, i):
    return ToricDivisor(fan, tuple(int(j == i) for j in range(fan.n_rays)))


def zero_divisor(fan):
    return ToricDivisor(fan, (0,) * fan.n_rays)


def canonical_divisor(fan):
    return ToricDivisor(fan, (-1,) * fan.n_rays)


def anticanonical_divisor(fan):
    return ToricDivisor(fan, (1,) * fan.n_rays)


def polytope_of_divisor(d):
    """``P_D = {m : <m, v_i> >= -a_i}``, one halfspace per ray."""
    return Polytope(d.fan.dim, [HalfSpace(v, -a) for v, a in zip(d.fan.rays, d.coeffs)])


def global_sections(d):
    """Lattice points of ``P_D``: characters of a torus-invariant basis of H^0."""
    return polytope_of_divisor(d).lattice_points()


def shift_by_character(d, m):
    """``D + div(chi^m)``: ``a_i -> a_i + <m, v_i>``.  P_D is translated by ``-m``."""
    if len(m) != d.fan.dim:
        raise ValueError(f"character must have length {d.fan.dim}")
    return ToricDivisor(d.fan, tuple(a + _linalg.dot(m, v) for a, v in zip(d.coeffs, d.fan.rays)))


def volume_of_divisor(d):
    """``Vol_X(D) = dim! * Vol(P_D)``."""
    return math.factorial(d.fan.dim) * polytope_of_divisor(d).volume()


def linear_equivalence_character(d1, d2):
    """Return an integral m with ``d1 - d2 = div(chi^m)``, or None.

    Solves on the first maximal cone (a lattice basis on a smooth fan) and
    checks the remaining rays.
    """
    d1._check_same(d2)
    fan = d1.fan
    diff = [a - b for a, b in zip(d1.coeffs, d2.coeffs)]
    cone = fan.max_cones[0]
    m = _linalg.solve(fan.generators(cone), [diff[i] for i in cone])
    if m is None or any(c.denominator != 1 for c in m):
        return None
    if any(_linalg.dot(m, v) != a for v, a in zip(fan.rays, diff)):
        return None
    return tuple(int(c) for c in m)


def support_function(d, u):
    """Evaluate the support function ``psi_D`` at a point ``u`` of ``N_R``.

    ``psi_D`` is linear on each maximal cone with ``psi_D(v_i) = -a_i``.
    """
    fan = d.fan
    for cone in fan.max_cones:
        gens = fan.generators(cone)
        lam = _linalg.solve(_linalg.transpose(gens), u)
        if lam is not None and all(x >= 0 for x in lam):
            return -sum((x * d.coeffs[i] for x, i in zip(lam, cone)), Fraction(0))
    raise ValueError(f"point {u} lies in no maximal cone")


def _cone_vertex(d, cone):
    """The character ``m_sigma`` with ``<m, v_i> = -a_i`` on the rays of sigma."""
    return _linalg.solve(d.fan.generators(cone), [-d.coeffs[i] for i in cone])


def is_nef(d):
    """Every ``m_sigma`` lies in ``P_D`` (convexity of the support function)."""
    p = polytope_of_divisor(d)
    return all(p.contains(_cone_vertex(d, c)) for c in d.fan.max_cones)


def intersect_properly(ds):
    """Proper intersection for distinct prime torus-invariant divisors.

    For every subset whose supports share a point, the local equations must
    form a regular sequence; on a smooth toric variety this holds iff the
    rays of every subset with a common point span a cone of codimension
    equal to the subset size.
    """
    ds = list(ds)
    if not ds:
        return True
    fan = ds[0].fan
    rays = []
    for d in ds:
        if d.fan != fan:
            raise ValueError("divisors live on different fans")
        if not d.is_prime():
            raise NotPrime(f"{d!r} is not a prime torus-invariant divisor", coeffs=d.to_dict()["coeffs"])
        rays.append(d.support[0])
    if len(set(rays)) != len(rays):
        return False
    for k in range(2, len(rays) + 1):
        for sub in combinations(rays, k):
            # a common point exists iff sub spans a cone; then codim == k because
            # generators of a cone are linearly independent on a simplicial fan
            if fan.is_cone(sub) and _linalg.rank(fan.generators(sub)) != k:
                return False
    return True


def supports_intersect_properly(ds):
    """Proper intersection for effective torus-invariant divisors (not nec. prime).

    The support of each D_j is a union of orbit closures D_i; the intersection
    over a subset I is a union of V(cone(R)) over choices of one ray per
    member.  Codimension |I| everywhere fails exactly when some choice
    repeats a ray, i.e. when two members share a prime component.
    """
    ds = list(ds)
    for d in ds:
        if not d.is_effective():
            raise ValueError(f"{d!r} is not effective")
    for d1, d2 in combinations(ds, 2):
        if set(d1.support) & set(d2.support):
            return False
    return True


@dataclass(frozen=True)
class TorusFlag:
    """A torus-invariant admissible flag ``Y_i = D_{r_1} cap ... cap D_{r_i}``."""

    fan: object
    ray_order: tuple

    def __post_init__(self):
        order = tuple(int(i) for i in self.ray_order)
        if len(order) != self.fan.dim or len(set(order)) != len(order):
            raise ValueError("a flag needs dim distinct rays")
        if tuple(sorted(order)) not in self.fan.max_cones:
            raise ValueError(f"rays {order} do not span a maximal cone")
        object.__setattr__(self, "ray_order", order)


def okounkov_body(d, flag):
    """Okounkov body of D for a torus-invariant flag, as a polytope in R^dim.

    D is first moved by a character so it vanishes on the flag's rays
    (``D|_{U_sigma} = 0``); the body is then the image of ``P_D`` under
    ``u -> (<u, v_i>)`` over the flag rays in order.
    """
    fan = d.fan
    b = [list(fan.rays[i]) for i in flag.ray_order]
    binv = _linalg.inverse(b)
    if binv is None or abs(_linalg.det(b)) != 1:
        raise NonInvertibleFlagMap("flag rays are not a lattice basis", rays=list(flag.ray_order))
    m = _linalg.matvec(binv, [-d.coeffs[i] for i in flag.ray_order])
    if any(c.denominator != 1 for c in m):
        raise PreconditionError("no integral character trivializes D on the flag cone",
                                character=[format_rational(c) for c in m])
    d0 = shift_by_character(d, m)
    assert all(d0.coeffs[i] == 0 for i in flag.ray_order)
    # <u, v> with u = B^-1 w  becomes  <w, B^-T v>
    binv_t = _linalg.transpose(binv)
    hs = []
    for v, a in zip(fan.rays, d0.coeffs):
        n = _linalg.matvec(binv_t, v)
        assert all(c.denominator == 1 for c in n)
        hs.append(HalfSpace(tuple(int(c) for c in n), -a))
    return Polytope(fan.dim, hs)
