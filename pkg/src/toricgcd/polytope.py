"""Exact rational convex polytopes in H-representation.

A polytope is the set ``{m : <m, normal_i> >= offset_i for all i}``.  All
arithmetic is done with :class:`fractions.Fraction`; there is no floating
point anywhere in this module except the numpy integer scan in
:func:`lattice_points`, which is exact because it works on integers.
"""

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import _linalg
from .errors import UnboundedPolytope
from .rational import as_fraction

__all__ = [
    "HalfSpace",
    "Polytope",
    "fourier_motzkin",
    "is_empty",
    "vertex_enumeration",
    "volume",
    "lattice_points",
    "scale",
]


@dataclass(frozen=True)
class HalfSpace:
    """``{m : <m, normal> >= offset}`` with an integral normal."""

    normal: tuple
    offset: Fraction

    def __post_init__(self):
        normal = tuple(int(c) for c in self.normal)
        if not any(normal):
            raise ValueError("halfspace normal must be nonzero")
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", as_fraction(self.offset))

    def slack(self, point):
        return _linalg.dot(self.normal, point) - self.offset


# Fourier-Motzkin elimination.  A row is (coeffs, rhs) meaning coeffs.x >= rhs.

def _normalize_row(coeffs, rhs):
    s = max(abs(c) for c in coeffs)
    if s == 0:
        return coeffs, rhs
    return tuple(c / s for c in coeffs), rhs / s


def _add_row(table, coeffs, rhs):
    """Insert a row keeping only the tightest rhs per direction.

    Returns False if the row is a contradiction ``0 >= positive``.
    """
    coeffs, rhs = _normalize_row(coeffs, rhs)
    if not any(coeffs):
        return rhs <= 0
    old = table.get(coeffs)
    if old is None or rhs > old:
        table[coeffs] = rhs
    return True


def fourier_motzkin(rows, eliminate):
    """Project the system ``{x : a.x >= b for (a, b) in rows}``.

    ``eliminate`` lists the variable indices to project out.  Returns the
    rows of the projection (coefficients of eliminated variables are zero),
    or None when the system is infeasible.
    """
    table = {}
    for coeffs, rhs in rows:
        if not _add_row(table, tuple(Fraction(c) for c in coeffs), Fraction(rhs)):
            return None
    for j in eliminate:
        pos, neg, new = [], [], {}
        for coeffs, rhs in table.items():
            if coeffs[j] > 0:
                pos.append((coeffs, rhs))
            elif coeffs[j] < 0:
                neg.append((coeffs, rhs))
            elif not _add_row(new, coeffs, rhs):
                return None
        for cp, rp in pos:
            for cn, rn in neg:
                sp, sn = cp[j], -cn[j]
                coeffs = tuple(a / sp + b / sn for a, b in zip(cp, cn))
                if not _add_row(new, coeffs, rp / sp + rn / sn):
                    return None
        table = new
    return list(table.items())


def _rows(halfspaces):
    return [(h.normal, h.offset) for h in halfspaces]


def is_empty(halfspaces, dim):
    """True iff no rational point satisfies every halfspace (decided exactly)."""
    halfspaces = list(halfspaces)
    if not halfspaces:
        return False
    return fourier_motzkin(_rows(halfspaces), range(dim)) is None


class Polytope:
    """A rational polyhedron ``{m : <m, n_i> >= b_i}`` in ``R^dim``.

    Vertices are computed on first use and cached; the cache fill is
    guarded by a lock so a Polytope can be shared between threads.
    """

    def __init__(self, dim, halfspaces):
        self.dim = int(dim)
        hs = tuple(h if isinstance(h, HalfSpace) else HalfSpace(*h) for h in halfspaces)
        for h in hs:
            if len(h.normal) != self.dim:
                raise ValueError(f"halfspace normal {h.normal} is not of length {self.dim}")
        self.halfspaces = hs
        self._lock = threading.Lock()
        self._vertices = None

    @classmethod
    def from_inequalities(cls, normals, offsets):
        normals = [tuple(n) for n in normals]
        return cls(len(normals[0]), [HalfSpace(n, b) for n, b in zip(normals, offsets)])

    def __repr__(self):
        return f"Polytope(dim={self.dim}, halfspaces={len(self.halfspaces)})"

    def contains(self, point):
        return all(h.slack(point) >= 0 for h in self.halfspaces)

    def is_empty(self):
        return is_empty(self.halfspaces, self.dim)

    def is_bounded(self):
        """True iff the recession cone ``{x : <x, n_i> >= 0}`` is ``{0}``."""
        if self.is_empty():
            return True
        cone = [(h.normal, 0) for h in self.halfspaces]
        for k in range(self.dim):
            for sign in (1, -1):
                unit = tuple(sign if i == k else 0 for i in range(self.dim))
                if fourier_motzkin(cone + [(unit, 1)], range(self.dim)) is not None:
                    return False
        return True

    def vertices(self):
        with self._lock:
            if self._vertices is None:
                self._vertices = self._enumerate_vertices()
            return self._vertices

    def _enumerate_vertices(self):
        if self.is_empty():
            return ()
        if not self.is_bounded():
            raise UnboundedPolytope("polytope has a nonzero recession direction")
        found = set()
        for combo in combinations(self.halfspaces, self.dim):
            x = _linalg.solve([h.normal for h in combo], [h.offset for h in combo])
            if x is not None and self.contains(x):
                found.add(x)
        return tuple(sorted(found))

    def volume(self):
        verts = self.vertices()
        d = self.dim
        if len(verts) <= d or _linalg.affine_rank(list(verts)) < d:
            return Fraction(0)
        tight = []
        for h in self.halfspaces:
            s = frozenset(i for i, v in enumerate(verts) if h.slack(v) == 0)
            if s:
                tight.append(s)
        total = Fraction(0)
        for simplex in _triangulate(verts, tight, frozenset(range(len(verts))), d):
            p0 = verts[simplex[0]]
            m = [[a - b for a, b in zip(verts[i], p0)] for i in simplex[1:]]
            total += abs(_linalg.det(m))
        return total / math.factorial(d)

    def lattice_points(self):
        verts = self.vertices()
        if not verts:
            return []
        lo = [math.floor(min(v[k] for v in verts)) for k in range(self.dim)]
        hi = [math.ceil(max(v[k] for v in verts)) for k in range(self.dim)]
        axes = [np.arange(a, b + 1, dtype=np.int64) for a, b in zip(lo, hi)]
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, self.dim)
        normals = np.array([h.normal for h in self.halfspaces], dtype=np.int64)
        den = math.lcm(*(h.offset.denominator for h in self.halfspaces))
        rhs = np.array([int(h.offset * den) for h in self.halfspaces], dtype=np.int64)
        inside = np.all(grid @ normals.T * den >= rhs, axis=1)
        return [tuple(int(c) for c in row) for row in grid[inside]]

    def scale(self, k):
        return Polytope(self.dim, [HalfSpace(h.normal, h.offset * k) for h in self.halfspaces])

    def translate(self, m):
        return Polytope(
            self.dim,
            [HalfSpace(h.normal, h.offset + _linalg.dot(h.normal, m)) for h in self.halfspaces],
        )


def _triangulate(verts, tight, face, k):
    """Pulling triangulation of a k-dimensional face (a set of vertex indices).

    Cones from the lexicographically smallest vertex over every facet of the
    face that avoids it; facets are recovered from the tight-constraint sets.
    """
    if k == 0:
        return [(min(face),)]
    apex = min(face)
    facets = set()
    for s in tight:
        sub = face & s
        if apex in sub or sub == face or len(sub) < k:
            continue
        if _linalg.affine_rank([verts[i] for i in sorted(sub)]) == k - 1:
            facets.add(sub)
    out = []
    for f in facets:
        for simplex in _triangulate(verts, tight, f, k - 1):
            out.append((apex,) + simplex)
    return out


def vertex_enumeration(p):
    return list(p.vertices())


def volume(p):
    return p.volume()


def lattice_points(p):
    return p.lattice_points()


def scale(p, k):
    if k <= 0:
        raise ValueError("scale factor must be a positive integer")
    return p.scale(k)
