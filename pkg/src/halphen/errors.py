"""Domain error hierarchy.

Every mathematically meaningful refusal gets its own class; the CLI maps
DomainError to exit code 1 and InputError to exit code 2.
"""


class DomainError(Exception):
    """A contract of an operation is violated in a mathematically detectable way."""


class InputError(Exception):
    """Malformed user input (parsing, job specs)."""


class PolyParseError(InputError):
    pass


# algebra kernel
class SingularAtOrigin(DomainError):
    pass


class NotVanishing(DomainError):
    pass


class ZeroPolynomial(DomainError):
    pass


# ideal theory
class NoTermination(DomainError):
    pass


class UnsupportedDimension(DomainError):
    pass


# cubic surface
class LineOnSurface(DomainError):
    pass


# linear systems
class SingularPoint(DomainError):
    pass


class UnsupportedDegree(DomainError):
    pass


class PointOffExceptional(DomainError):
    pass


# birational maps
class DimensionMismatch(DomainError):
    pass


class InterpolationDegenerate(DomainError):
    pass


class NonMinimalConfiguration(DomainError):
    pass


class ZeroMap(DomainError):
    pass


class EliminationOverflow(DomainError):
    pass


# fibration pipeline
class ReducibleG(DomainError):
    pass


class PointOnSingularLocus(DomainError):
    pass


class BadWeights(DomainError):
    pass


class NotAPencil(DomainError):
    pass


class DegreeNotDecreasing(DomainError):
    pass
