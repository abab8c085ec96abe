"""Lattices, simplicial cones and complete smooth fans.

Rays are primitive integer vectors in ``N = Z^d``; a fan is stored by its
ray list (whose order is the index space for divisor coefficients) and its
maximal cones, each a sorted tuple of ray indices.
"""

import json
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from . import _linalg
from .errors import DuplicateRay, IncompleteFan, InvalidFan, NonPrimitiveRay, NonSmoothCone
from .polytope import fourier_motzkin

__all__ = [
    "Cone",
    "Fan",
    "make_fan",
    "standard_fan",
    "projective_space",
    "p1_power",
    "is_smooth",
    "fan_from_json",
]


@dataclass(frozen=True)
class Cone:
    ray_indices: tuple

    def __post_init__(self):
        idx = tuple(int(i) for i in self.ray_indices)
        if len(set(idx)) != len(idx):
            raise InvalidFan(f"cone {idx} repeats a ray index", cone=list(idx))
        object.__setattr__(self, "ray_indices", tuple(sorted(idx)))

    def __iter__(self):
        return iter(self.ray_indices)

    def __len__(self):
        return len(self.ray_indices)


@dataclass(frozen=True)
class Fan:
    """A validated complete simplicial fan.  Build with :func:`make_fan`."""

    dim: int
    rays: tuple
    max_cones: tuple

    @property
    def n_rays(self):
        return len(self.rays)

    def generators(self, indices):
        return [self.rays[i] for i in indices]

    def is_cone(self, indices):
        s = set(indices)
        return any(s <= set(c) for c in self.max_cones)

    def max_cones_containing(self, indices):
        s = set(indices)
        return [c for c in self.max_cones if s <= set(c)]

    def to_dict(self):
        return {
            "dim": self.dim,
            "rays": [list(r) for r in self.rays],
            "max_cones": [list(c) for c in self.max_cones],
        }

    def to_json(self):
        return json.dumps(self.to_dict())


def _primitive(v):
    return math.gcd(*v) == 1


def _interiors_meet(fan_rays, c1, c2):
    """Exact test whether two full-dimensional simplicial cones share interior points.

    Writes x = B1 lam = B2 mu, eliminates mu = B2^-1 B1 lam, and asks for
    lam >= 1, mu >= 1 (strict positivity, homogenized).
    """
    b1 = _linalg.transpose([fan_rays[i] for i in c1])
    b2inv = _linalg.inverse(_linalg.transpose([fan_rays[i] for i in c2]))
    t = [[sum((b2inv[i][k] * b1[k][j] for k in range(len(b1))), Fraction(0))
          for j in range(len(c1))] for i in range(len(c2))]
    d = len(c1)
    rows = [(tuple(int(i == j) for i in range(d)), 1) for j in range(d)]
    rows += [(tuple(row), 1) for row in t]
    return fourier_motzkin(rows, range(d)) is not None


def _check_complete(dim, rays, cones):
    facets = Counter()
    for c in cones:
        for f in combinations(c, dim - 1):
            facets[f] += 1
    bad = [list(f) for f, n in facets.items() if n != 2]
    if bad:
        raise IncompleteFan(
            "every facet of a maximal cone must be shared by exactly two maximal cones",
            facets=bad,
        )
    for c1, c2 in combinations(cones, 2):
        if _interiors_meet(rays, c1, c2):
            raise IncompleteFan("maximal cones overlap", cones=[list(c1), list(c2)])


def make_fan(dim, rays, max_cones, *, require_smooth=True):
    """Validate and build a complete simplicial fan.

    Raises NonPrimitiveRay, DuplicateRay, NonSmoothCone or IncompleteFan.
    ``require_smooth=False`` admits complete simplicial fans with
    ``|det| > 1`` cones (only useful for exercising :func:`is_smooth`).
    """
    dim = int(dim)
    if dim < 1:
        raise InvalidFan("dimension must be positive", dim=dim)
    rays = tuple(tuple(int(c) for c in r) for r in rays)
    if not rays:
        raise InvalidFan("a fan needs at least one ray")
    for r in rays:
        if len(r) != dim:
            raise InvalidFan(f"ray {r} is not of length {dim}", ray=list(r))
        if not any(r):
            raise InvalidFan("zero ray", ray=list(r))
        if not _primitive(r):
            raise NonPrimitiveRay(f"ray {r} is not primitive", ray=list(r))
    dupes = [r for r, n in Counter(rays).items() if n > 1]
    if dupes:
        raise DuplicateRay(f"ray {dupes[0]} listed twice", ray=list(dupes[0]))

    cones = []
    for c in max_cones:
        cone = c if isinstance(c, Cone) else Cone(tuple(c))
        idx = cone.ray_indices
        if any(i < 0 or i >= len(rays) for i in idx):
            raise InvalidFan(f"cone {list(idx)} has an out-of-range ray index", cone=list(idx))
        if len(idx) != dim:
            raise IncompleteFan(f"maximal cone {list(idx)} does not have {dim} rays", cone=list(idx))
        det = _linalg.int_det([rays[i] for i in idx])
        if det == 0:
            raise InvalidFan(f"cone {list(idx)} is not full-dimensional", cone=list(idx))
        if require_smooth and abs(det) != 1:
            raise NonSmoothCone(f"cone {list(idx)} has |det| = {abs(det)}", cone=list(idx), det=abs(det))
        cones.append(idx)
    if len(set(cones)) != len(cones):
        raise InvalidFan("a maximal cone is listed twice")
    used = {i for c in cones for i in c}
    unused = [i for i in range(len(rays)) if i not in used]
    if unused:
        raise InvalidFan("every ray must lie in some maximal cone", rays=unused)
    _check_complete(dim, rays, cones)
    return Fan(dim, rays, tuple(sorted(cones)))


def is_smooth(fan):
    """True iff every cone's generators have maximal minors with gcd 1."""
    for c in fan.max_cones:
        gens = fan.generators(c)
        k = len(gens)
        minors = [_linalg.int_det([[g[j] for j in cols] for g in gens])
                  for cols in combinations(range(fan.dim), k)]
        if math.gcd(*minors) != 1:
            return False
    return True


def standard_fan(name, r=None):
    """Fans of P2, P1xP1 and the Hirzebruch surfaces F_r (r >= 2).

    ``name`` is one of ``"P2"``, ``"P1xP1"``, ``"Hirzebruch"``; the string
    forms ``"hirzebruch:3"`` / ``"F3"`` are accepted too.
    """
    key = str(name).strip().lower()
    if key.startswith("hirzebruch:"):
        key, r = "hirzebruch", int(key.split(":", 1)[1])
    elif key.startswith("f") and key[1:].isdigit():
        key, r = "hirzebruch", int(key[1:])
    if key == "p2":
        return make_fan(2, [(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (2, 0)])
    if key in ("p1xp1", "p1p1"):
        return make_fan(2, [(-1, 0), (0, 1), (1, 0), (0, -1)], [(0, 1), (1, 2), (2, 3), (3, 0)])
    if key == "hirzebruch":
        if r is None or int(r) < 2:
            raise ValueError("Hirzebruch surfaces need r >= 2")
        r = int(r)
        return make_fan(2, [(1, 0), (0, 1), (-1, r), (0, -1)], [(0, 1), (1, 2), (2, 3), (3, 0)])
    raise ValueError(f"unknown standard fan {name!r}")


def projective_space(n):
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)] + [tuple([-1] * n)]
    cones = [tuple(j for j in range(n + 1) if j != i) for i in range(n + 1)]
    return make_fan(n, rays, cones)


def p1_power(n):
    """Fan of (P1)^n with rays e_1, -e_1, e_2, -e_2, ..."""
    rays = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        rays += [tuple(e), tuple(-x for x in e)]
    cones = []
    for signs in range(2 ** n):
        cones.append(tuple(2 * i + ((signs >> i) & 1) for i in range(n)))
    return make_fan(n, rays, cones)


def fan_from_json(obj):
    """Build a fan from the ``{"dim", "rays", "max_cones"}`` schema (dict or str)."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    return make_fan(obj["dim"], obj["rays"], obj["max_cones"])
