"""Star subdivisions (torus-invariant blow-ups) and divisor pullback.

The new ray is always placed at index 0 of the subdivided fan and old ray
``i`` moves to index ``i + 1``.  For the point blow-ups of P2 and P1xP1
this reproduces the ``v_0', v_1', ...`` labelling used in the literature.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import ChainMismatch, CodimensionOne, FanMismatch, NotACone
from .lattice_fan import make_fan
from .toric_divisor import ToricDivisor, canonical_divisor, prime_divisor

__all__ = [
    "BlowupMap",
    "BlowupChain",
    "star_subdivision",
    "exceptional_divisor",
    "pullback",
    "canonical_relation_check",
    "compose",
]


@dataclass(frozen=True)
class BlowupMap:
    source_fan: object
    target_fan: object
    center: tuple
    new_ray_index: int
    ray_correspondence: tuple

    @property
    def codim(self):
        return len(self.center)

    @property
    def new_ray(self):
        return self.source_fan.rays[self.new_ray_index]

    def to_dict(self):
        return {
            "source_fan": self.source_fan.to_dict(),
            "center": list(self.center),
            "new_ray_index": self.new_ray_index,
            "new_ray": list(self.new_ray),
            "ray_correspondence": [
                {"target": i, "source": j} for i, j in enumerate(self.ray_correspondence)
            ],
        }


def star_subdivision(fan, center):
    center = tuple(sorted(int(i) for i in center))
    if len(set(center)) != len(center) or any(i < 0 or i >= fan.n_rays for i in center):
        raise NotACone(f"{list(center)} is not a set of ray indices", center=list(center))
    if len(center) < 2:
        raise CodimensionOne("blowing up a divisor is the identity", center=list(center))
    if not fan.is_cone(center):
        raise NotACone(f"rays {list(center)} do not span a cone of the fan", center=list(center))

    new_ray = tuple(sum(fan.rays[i][k] for i in center) for k in range(fan.dim))
    corr = tuple(i + 1 for i in range(fan.n_rays))
    rays = [new_ray] + list(fan.rays)
    cones = []
    for sigma in fan.max_cones:
        if set(center) <= set(sigma):
            for rho in center:
                cones.append((0,) + tuple(corr[i] for i in sigma if i != rho))
        else:
            cones.append(tuple(corr[i] for i in sigma))
    source = make_fan(fan.dim, rays, cones)
    return BlowupMap(source, fan, center, 0, corr)


def exceptional_divisor(bmap):
    return prime_divisor(bmap.source_fan, bmap.new_ray_index)


def pullback(bmap, d):
    """Pull back a divisor on the target fan.

    Old rays keep their coefficient; the new ray gets the sum of the
    coefficients on the center's rays (``-psi_D(v_0)``).
    """
    if d.fan != bmap.target_fan:
        raise FanMismatch("divisor does not live on the blow-up's target fan")
    coeffs = [Fraction(0)] * bmap.source_fan.n_rays
    for i, j in enumerate(bmap.ray_correspondence):
        coeffs[j] = d.coeffs[i]
    coeffs[bmap.new_ray_index] = sum((d.coeffs[i] for i in bmap.center), Fraction(0))
    return ToricDivisor(bmap.source_fan, tuple(coeffs))


def canonical_relation_check(bmap):
    """``K_{X'} == pi^*K_X + (r - 1) E`` coefficientwise."""
    lhs = canonical_divisor(bmap.source_fan)
    rhs = pullback(bmap, canonical_divisor(bmap.target_fan)) + (bmap.codim - 1) * exceptional_divisor(bmap)
    return lhs == rhs


class BlowupChain:
    """Composite of successive blow-ups ``X_n -> ... -> X_1 -> X_0``.

    ``maps[0]`` blows up ``X_0``; each later map blows up the previous
    source.  Calling the chain pulls a divisor on ``X_0`` back to ``X_n``.
    """

    def __init__(self, maps):
        self.maps = tuple(maps)
        for prev, nxt in zip(self.maps, self.maps[1:]):
            if nxt.target_fan != prev.source_fan:
                raise ChainMismatch("blow-up chain does not compose")

    def __len__(self):
        return len(self.maps)

    @property
    def target_fan(self):
        return self.maps[0].target_fan if self.maps else None

    @property
    def source_fan(self):
        return self.maps[-1].source_fan if self.maps else None

    def pullback(self, d):
        for m in self.maps:
            d = pullback(m, d)
        return d

    __call__ = pullback

    def exceptional_divisors(self):
        """Each map's exceptional divisor, pulled back to the top of the chain."""
        out = []
        for k, m in enumerate(self.maps):
            e = exceptional_divisor(m)
            for later in self.maps[k + 1:]:
                e = pullback(later, e)
            out.append(e)
        return out


def compose(maps):
    return BlowupChain(maps)
