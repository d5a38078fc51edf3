"""Planar vectors and 2x2 operators.

Everything here is closed-form double-precision arithmetic: no iterative
linear algebra. Vectors and matrices are immutable value types, safe to
share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import SingularMatrix

# Determinant threshold below which a 2x2 matrix is treated as singular.
SINGULARITY_TOL = 1e-12


@dataclass(frozen=True, slots=True)
class Vec2:
    """A point or velocity in the plane (meters / meters per second)."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite Vec2 components ({self.x}, {self.y})")

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def __neg__(self) -> "Vec2":
        return Vec2(-self.x, -self.y)

    def __mul__(self, s: float) -> "Vec2":
        return Vec2(self.x * s, self.y * s)

    __rmul__ = __mul__

    def dot(self, other: "Vec2") -> float:
        return self.x * other.x + self.y * other.y

    def cross(self, other: "Vec2") -> float:
        """z-component of the 3D cross product."""
        return self.x * other.y - self.y * other.x

    def norm_sq(self) -> float:
        return self.x * self.x + self.y * self.y

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def unit(self) -> "Vec2":
        n = self.norm()
        if n == 0.0:
            raise ZeroDivisionError("cannot normalize the zero vector")
        return Vec2(self.x / n, self.y / n)

    def distance_to(self, other: "Vec2") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def angle(self) -> float:
        """Polar angle in (-pi, pi]."""
        return math.atan2(self.y, self.x)


ZERO2 = Vec2(0.0, 0.0)


def rot90(v: Vec2) -> Vec2:
    """Rotate a vector by 90 degrees in the positive (counterclockwise) direction."""
    return Vec2(-v.y, v.x)


@dataclass(frozen=True)
class Mat2:
    """A 2x2 real matrix acting on Vec2."""

    a11: float
    a12: float
    a21: float
    a22: float

    def __post_init__(self):
        if not all(math.isfinite(a) for a in (self.a11, self.a12, self.a21, self.a22)):
            raise ValueError("non-finite Mat2 entries")

    def apply(self, v: Vec2) -> Vec2:
        return Vec2(self.a11 * v.x + self.a12 * v.y, self.a21 * v.x + self.a22 * v.y)

    def __matmul__(self, other):
        if isinstance(other, Vec2):
            return self.apply(other)
        return Mat2(
            self.a11 * other.a11 + self.a12 * other.a21,
            self.a11 * other.a12 + self.a12 * other.a22,
            self.a21 * other.a11 + self.a22 * other.a21,
            self.a21 * other.a12 + self.a22 * other.a22,
        )

    def __add__(self, other: "Mat2") -> "Mat2":
        return _preserve_conformal(
            self, other,
            self.a11 + other.a11, self.a12 + other.a12,
            self.a21 + other.a21, self.a22 + other.a22,
        )

    def __sub__(self, other: "Mat2") -> "Mat2":
        return _preserve_conformal(
            self, other,
            self.a11 - other.a11, self.a12 - other.a12,
            self.a21 - other.a21, self.a22 - other.a22,
        )

    def det(self) -> float:
        return self.a11 * self.a22 - self.a12 * self.a21

    def rows(self) -> list[list[float]]:
        return [[self.a11, self.a12], [self.a21, self.a22]]


@dataclass(frozen=True)
class ConformalMat2(Mat2):
    """Scaled-rotation matrix [a -b; b a]; the constructor enforces the shape."""

    def __post_init__(self):
        super().__post_init__()
        if self.a11 != self.a22 or self.a12 != -self.a21:
            raise ValueError("ConformalMat2 requires a11 == a22 and a12 == -a21")

    @property
    def alpha(self) -> float:
        return self.a11

    @property
    def beta(self) -> float:
        return self.a21


def _preserve_conformal(m1: Mat2, m2: Mat2, b11, b12, b21, b22) -> Mat2:
    # closed under addition/subtraction: keep the subtype when both operands have it
    if isinstance(m1, ConformalMat2) and isinstance(m2, ConformalMat2):
        return ConformalMat2(b11, b12, b21, b22)
    return Mat2(b11, b12, b21, b22)


def identity() -> ConformalMat2:
    return ConformalMat2(1.0, 0.0, 0.0, 1.0)


def conformal(alpha: float, beta: float) -> ConformalMat2:
    """Build alpha*I + beta*J, where J is the positive 90-degree rotation."""
    return ConformalMat2(alpha, -beta, beta, alpha)


def operator_norm(M: Mat2) -> float:
    """Largest singular value, computed via the stable closed form.

    For any 2x2 matrix the two singular values are (f + g)/2 and |f - g|/2
    with f = |(a11+a22, a21-a12)| and g = |(a11-a22, a21+a12)|; for a
    conformal matrix with parameters (a, b) this collapses to sqrt(a^2+b^2).
    """
    f = math.hypot(M.a11 + M.a22, M.a21 - M.a12)
    g = math.hypot(M.a11 - M.a22, M.a21 + M.a12)
    return (f + g) / 2.0


def inverse(M: Mat2) -> Mat2:
    d = M.det()
    if abs(d) <= SINGULARITY_TOL:
        raise SingularMatrix(f"|det| = {abs(d)} <= {SINGULARITY_TOL}")
    if isinstance(M, ConformalMat2):
        return ConformalMat2(M.a22 / d, -M.a12 / d, -M.a21 / d, M.a11 / d)
    return Mat2(M.a22 / d, -M.a12 / d, -M.a21 / d, M.a11 / d)
