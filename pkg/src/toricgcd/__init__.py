"""Exact toric computations of asymptotic volume constants and gcd height bounds."""

from fractions import Fraction

from .blowup import compose, exceptional_divisor, pullback, star_subdivision
from .errors import ToricError
from .gcd_bound import bound_report, check_hypotheses, gamma_delta, prime_decomposition
from .lattice_fan import Fan, make_fan, standard_fan
from .polytope import HalfSpace, Polytope
from .toric_divisor import (
    ToricDivisor,
    anticanonical_divisor,
    canonical_divisor,
    polytope_of_divisor,
    prime_divisor,
    volume_of_divisor,
)
from .volume_beta import beta, pseudoeffective_threshold, volume_function

__version__ = "0.1.0"
