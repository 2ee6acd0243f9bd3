"""Core linear algebra of Minkowski 4-space.

R^4_1 carries the indefinite bilinear form

    <x, y> = x1*y1 + x2*y2 + x3*y3 - x4*y4,

with the fourth coordinate playing the role of time.  Everything here
is double precision; classification near the lightcone is tolerance
based, never exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DegeneratePlane, ZeroVector

# Relative tolerance for "squared length is zero", scaled by the squared
# largest component of the vector under test.
CAUSAL_TOL = 1e-10

# Tolerance for signature / degeneracy tests in frame construction.
FRAME_TOL = 1e-10


@dataclass(frozen=True)
class MVec4:
    """A vector of R^4_1.  Components must be finite."""

    x1: float
    x2: float
    x3: float
    x4: float

    def __post_init__(self):
        for c in (self.x1, self.x2, self.x3, self.x4):
            if not math.isfinite(c):
                raise ValueError(f"non-finite MVec4 component: {c!r}")
        object.__setattr__(self, "x1", float(self.x1))
        object.__setattr__(self, "x2", float(self.x2))
        object.__setattr__(self, "x3", float(self.x3))
        object.__setattr__(self, "x4", float(self.x4))

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.x1, self.x2, self.x3, self.x4)

    def __add__(self, other: "MVec4") -> "MVec4":
        return MVec4(self.x1 + other.x1, self.x2 + other.x2,
                     self.x3 + other.x3, self.x4 + other.x4)

    def __sub__(self, other: "MVec4") -> "MVec4":
        return MVec4(self.x1 - other.x1, self.x2 - other.x2,
                     self.x3 - other.x3, self.x4 - other.x4)

    def __mul__(self, s: float) -> "MVec4":
        return MVec4(self.x1 * s, self.x2 * s, self.x3 * s, self.x4 * s)

    __rmul__ = __mul__

    def __neg__(self) -> "MVec4":
        return MVec4(-self.x1, -self.x2, -self.x3, -self.x4)

    def max_abs(self) -> float:
        return max(abs(self.x1), abs(self.x2), abs(self.x3), abs(self.x4))

    def euclid_norm(self) -> float:
        return math.sqrt(self.x1 ** 2 + self.x2 ** 2 + self.x3 ** 2 + self.x4 ** 2)

    @classmethod
    def parse(cls, text: str) -> "MVec4":
        """Parse the comma-separated form ``x1,x2,x3,x4``."""
        parts = text.split(",")
        if len(parts) != 4:
            raise ValueError(f"expected 4 comma-separated components, got {len(parts)}")
        return cls(*(float(p) for p in parts))

    def format(self) -> str:
        """Round-trip text form with 17 significant digits."""
        return ",".join(f"{c:.17g}" for c in self.as_tuple())


ZERO = MVec4(0.0, 0.0, 0.0, 0.0)


class CausalCharacter(Enum):
    SPACELIKE = "spacelike"
    TIMELIKE = "timelike"
    LIGHTLIKE = "lightlike"


def inner(x: MVec4, y: MVec4) -> float:
    """The pseudo scalar product of R^4_1."""
    return x.x1 * y.x1 + x.x2 * y.x2 + x.x3 * y.x3 - x.x4 * y.x4


def norm(x: MVec4) -> float:
    """sqrt(|<x, x>|); zero exactly on the lightcone."""
    return math.sqrt(abs(inner(x, x)))


def causal_character(x: MVec4, tol: float = CAUSAL_TOL) -> CausalCharacter:
    """Classify a nonzero vector as spacelike, timelike or lightlike.

    |<x,x>| below ``tol`` times the squared largest component counts as
    lightlike; downstream constructions need robust lightcone detection,
    so near-null vectors are classified rather than rejected.
    """
    m = x.max_abs()
    if m == 0.0:
        raise ZeroVector("cannot classify the zero vector")
    q = inner(x, x)
    cut = tol * m * m
    if q > cut:
        return CausalCharacter.SPACELIKE
    if q < -cut:
        return CausalCharacter.TIMELIKE
    return CausalCharacter.LIGHTLIKE


@dataclass(frozen=True)
class Hyperplane:
    """HP(n, c) = {x : <x, n> = c} with pseudo normal n != 0."""

    normal: MVec4
    offset: float

    def __post_init__(self):
        if self.normal.max_abs() == 0.0:
            raise ValueError("hyperplane normal must be nonzero")


def hyperplane_character(h: Hyperplane, tol: float = CAUSAL_TOL) -> CausalCharacter:
    """Causal type of the hyperplane.

    The type is inverted relative to the normal: a timelike normal gives
    a spacelike hyperplane and vice versa; lightlike maps to lightlike.
    """
    nc = causal_character(h.normal, tol)
    if nc is CausalCharacter.TIMELIKE:
        return CausalCharacter.SPACELIKE
    if nc is CausalCharacter.SPACELIKE:
        return CausalCharacter.TIMELIKE
    return CausalCharacter.LIGHTLIKE


class QuadricKind(Enum):
    HYPERBOLIC = "hyperbolic"
    DESITTER = "desitter"
    LIGHTCONE = "lightcone"


@dataclass(frozen=True)
class Quadric:
    """Central quadric <x-a, x-a> = t with t = -R, +R or 0 by kind.

    Note the defining equation uses R itself, not R squared; we keep
    that convention and call R the radius throughout.
    """

    kind: QuadricKind
    center: MVec4 = ZERO
    radius: float = 0.0

    def __post_init__(self):
        if self.kind is not QuadricKind.LIGHTCONE and not self.radius > 0.0:
            raise ValueError(f"radius must be positive for {self.kind.value}")


def quadric_residual(q: Quadric, x: MVec4) -> float:
    """<x-a, x-a> minus the quadric's target value; zero on the quadric."""
    d = x - q.center
    val = inner(d, d)
    if q.kind is QuadricKind.HYPERBOLIC:
        return val + q.radius
    if q.kind is QuadricKind.DESITTER:
        return val - q.radius
    return val


def _lex_sign(v: MVec4, tol: float) -> float:
    """+1/-1 so that the first significantly nonzero component is positive."""
    cut = tol * max(v.max_abs(), 1e-300)
    for c in v.as_tuple():
        if abs(c) > cut:
            return 1.0 if c > 0 else -1.0
    return 1.0


def orthonormal_normal_frame(n1: MVec4, n2: MVec4,
                             tol: float = FRAME_TOL) -> tuple[MVec4, MVec4]:
    """Orthonormalize a basis of a timelike 2-plane.

    Returns (e3, e4) spanning span{n1, n2} with <e3,e3> = 1,
    <e4,e4> = -1, <e3,e4> = 0.  e4 points to the future (positive x4);
    the sign of e3 is fixed by making its first significantly nonzero
    component positive, so the output is deterministic.

    The construction subtracts projections starting from whichever input
    is not lightlike; if both are lightlike (the two null lines of the
    plane) it starts from their sum and difference instead.
    """
    g11 = inner(n1, n1)
    g12 = inner(n1, n2)
    g22 = inner(n2, n2)
    scale = max(abs(g11), abs(g12), abs(g22))
    if scale == 0.0:
        raise DegeneratePlane("spanning vectors are zero")
    det = g11 * g22 - g12 * g12
    if det >= -tol * scale * scale:
        raise DegeneratePlane(
            f"induced form is not of signature (+,-): gram det {det:.3e}"
        )

    if abs(g11) > tol * scale:
        a, b, gaa = n1, n2, g11
    elif abs(g22) > tol * scale:
        a, b, gaa = n2, n1, g22
    else:
        # both inputs lightlike: their sum/difference are orthogonal and
        # non-null because <n1,n2> != 0 on a timelike plane
        a, b = n1 + n2, n1 - n2
        gaa = inner(a, a)

    w = b - (inner(b, a) / gaa) * a
    gww = inner(w, w)
    if gaa > 0:
        if not gww < 0:
            raise DegeneratePlane("projection did not produce a timelike direction")
        e3 = a * (1.0 / math.sqrt(gaa))
        e4 = w * (1.0 / math.sqrt(-gww))
    else:
        if not gww > 0:
            raise DegeneratePlane("projection did not produce a spacelike direction")
        e3 = w * (1.0 / math.sqrt(gww))
        e4 = a * (1.0 / math.sqrt(-gaa))

    if e4.x4 < 0:
        e4 = -e4
    e3 = e3 * _lex_sign(e3, tol)
    return e3, e4
