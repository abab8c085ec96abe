"""Exception hierarchy.

Every error carries a machine-readable ``code`` (the class name) plus a
``details`` mapping, so the CLI can emit a structured error object.
"""


class ToricError(ValueError):
    """Base class for all validation and precondition failures."""

    def __init__(self, message="", **details):
        super().__init__(message or self.__class__.__name__)
        self.details = details

    @property
    def code(self):
        return type(self).__name__

    def to_dict(self):
        out = {"code": self.code}
        out.update(self.details)
        out["message"] = str(self)
        return out


# lattice_fan
class InvalidFan(ToricError):
    pass


class NonPrimitiveRay(InvalidFan):
    pass


class NonSmoothCone(InvalidFan):
    pass


class IncompleteFan(InvalidFan):
    pass


class DuplicateRay(InvalidFan):
    pass


# polytope
class UnboundedPolytope(ToricError):
    pass


# toric_divisor
class NotPrime(ToricError):
    pass


class NonInvertibleFlagMap(ToricError):
    pass


class PreconditionError(ToricError):
    pass


# blowup
class NotACone(ToricError):
    pass


class CodimensionOne(ToricError):
    pass


class FanMismatch(ToricError):
    pass


class ChainMismatch(ToricError):
    pass


# volume_beta
class NotBig(ToricError):
    pass


class Unbounded(ToricError):
    pass


# gcd_bound
class DecompositionMismatch(ToricError):
    pass


# arith_heights
class ZeroInput(ToricError):
    pass


class EmptyGrid(ToricError):
    pass


# cli
class UnknownExample(ToricError):
    pass
