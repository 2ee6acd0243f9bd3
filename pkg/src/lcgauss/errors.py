"""Exception types shared across the package."""


class LcgaussError(Exception):
    """Base class for every package-specific error."""


class ZeroVector(LcgaussError):
    """Causal classification was asked for the zero vector."""


class DegeneratePlane(LcgaussError):
    """A spanning pair does not define a timelike 2-plane."""


class NotSpacelike(LcgaussError):
    """First fundamental form is not positive definite at this point."""


class DegenerateNormalPlane(LcgaussError):
    """Lightcone-normal quadratic has no two distinct real roots.

    Cannot happen for a genuinely spacelike jet; signals numerical
    breakdown of the normal-plane construction.
    """


class ComplexRoots(LcgaussError):
    """Principal-curvature discriminant is negative beyond tolerance."""


class DegenerateCloud(LcgaussError):
    """Point cloud does not determine the requested fit."""


class DomainError(LcgaussError):
    """Expression evaluation left the mathematical domain.

    ``node`` is the rendered sub-expression that failed.
    """

    def __init__(self, node: str, message: str):
        super().__init__(f"{message} in '{node}'")
        self.node = node
        self.message = message


class ParseError(LcgaussError):
    """Malformed expression text.

    ``offset`` is a byte offset into the input; ``expected`` the set of
    token descriptions that would have been accepted there.
    """

    def __init__(self, offset: int, message: str, expected: frozenset = frozenset()):
        super().__init__(f"at offset {offset}: {message}")
        self.offset = offset
        self.message = message
        self.expected = expected


class ArcLengthViolation(LcgaussError):
    """Profile curve is not parametrized by arc length."""

    def __init__(self, max_residual: float, worst_u: float):
        super().__init__(
            f"arc-length residual {max_residual:.3e} at u={worst_u:.6g}"
        )
        self.max_residual = max_residual
        self.worst_u = worst_u


class ConstraintViolation(LcgaussError):
    """Family constants outside the admissible range."""


class DegenerateFit(LcgaussError):
    """Linear-dependence fit attempted against a constant function."""


class BlowUp(LcgaussError):
    """ODE trajectory left the integrable region."""
