"""Closed-form collision calculus for constant-coefficient linear mechanisms.

When the ego responds with vM = alpha*vN + beta*rot90(vN), the trajectory
integrates in closed form: cM(t) = A*cN(t) - c0 with A the conformal matrix
of (alpha, beta). Away from the offset-conserving case (1, 0) this yields a
distinguished center point and disks around it that classify obstacle
positions as colliding / admissible, an exact membership test for the
in-between shell, and a constructive adversary: the obstacle can always
force a collision by driving into the inner disk.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .errors import DegenerateGeometry, InadmissibleConfig, InvalidParameters
from .geometry import ConformalMat2, Mat2, Vec2, conformal, identity, operator_norm
from .bundle import ADMISSIBILITY_TOL, SAFE_DISTANCE, Config, boundary_distance
from .lifting import SampledPath

# below this operator norm of B the disks blow up; the geometry is flagged
# rather than silently reporting near-infinite radii
NEAR_DEGENERATE_NORM = 1e-6


class Classification(Enum):
    COLLISION = "Collision"
    ADMISSIBLE = "Admissible"
    INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class CollisionGeometry:
    """Trajectory-law record for one constant-coefficient mechanism run.

    ``A`` maps obstacle velocity to ego velocity; ``B = A - I`` maps the
    obstacle's offset from the center point to the separation vector
    cM - cN. In the degenerate case (alpha, beta) = (1, 0) the offset
    c0 = cN(0) - cM(0) is conserved and no disk data exists.
    """

    A: Mat2
    B: Mat2
    c0: Vec2
    c_tilde0: Optional[Vec2]
    r_d: Optional[float]
    r_d_prime: Optional[float]
    degenerate: bool
    near_degenerate: bool = False


def collision_geometry(alpha: float, beta: float, cM0: Vec2, cN0: Vec2) -> CollisionGeometry:
    """Build the collision geometry from mechanism parameters and initial state."""
    if alpha == 0.0 and beta == 0.0:
        raise InvalidParameters("(alpha, beta) = (0, 0) is excluded")
    if boundary_distance(Config(cM0, cN0)) < -ADMISSIBILITY_TOL:
        raise InadmissibleConfig(f"initial configuration overlaps: cM0={cM0}, cN0={cN0}")
    A = conformal(alpha, beta)
    B = A - identity()
    if alpha == 1.0 and beta == 0.0:
        c0 = cN0 - cM0
        return CollisionGeometry(A, B, c0, None, None, None, degenerate=True)
    c0 = A.apply(cN0) - cM0
    # closed-form conformal inverse: exact for any nonzero (alpha-1, beta),
    # so near-degenerate geometries are reported (with the warning flag)
    # instead of tripping the generic determinant guard
    s = B.a11 * B.a11 + B.a21 * B.a21
    B_inv = ConformalMat2(B.a11 / s, B.a21 / s, -B.a21 / s, B.a11 / s)
    c_tilde0 = (identity() + B_inv).apply(cN0) - B_inv.apply(cM0)
    norm_B = operator_norm(B)
    return CollisionGeometry(
        A,
        B,
        c0,
        c_tilde0,
        r_d=SAFE_DISTANCE / norm_B,
        r_d_prime=SAFE_DISTANCE * operator_norm(B_inv),
        degenerate=False,
        near_degenerate=norm_B < NEAR_DEGENERATE_NORM,
    )


def _require_disks(geom: CollisionGeometry):
    if geom.degenerate:
        raise DegenerateGeometry("no collision disks exist for (alpha, beta) = (1, 0)")


def classify_obstacle_position(geom: CollisionGeometry, cN: Vec2) -> Classification:
    """Sufficient-condition classification by distance from the center point.

    Inside the inner disk the vehicles are provably in collision; on or
    outside the outer disk the configuration is provably admissible; the
    shell in between is indeterminate at this level of the calculus (use
    ``exact_collision`` there).
    """
    _require_disks(geom)
    r = cN.distance_to(geom.c_tilde0)
    if r < geom.r_d:
        return Classification.COLLISION
    if r >= geom.r_d_prime:
        return Classification.ADMISSIBLE
    return Classification.INDETERMINATE


def exact_collision(geom: CollisionGeometry, cN: Vec2) -> bool:
    """Exact membership test: collision iff |B(cN - c_tilde0)| < 2.

    Strict inequality: the separation vector equals B(cN - c_tilde0), so
    equality means touching disks, which is admissible.
    """
    _require_disks(geom)
    return geom.B.apply(cN - geom.c_tilde0).norm() < SAFE_DISTANCE


def closed_form_cM(geom: CollisionGeometry, cN_t: Vec2) -> Vec2:
    """Ego position determined by the obstacle position: A*cN(t) - c0."""
    return geom.A.apply(cN_t) - geom.c0


def adversary_path(
    geom: CollisionGeometry,
    cN0: Vec2,
    speed: float,
    n: int = 129,
) -> SampledPath:
    """A forcing strategy: drive straight at the center point into the disk.

    Constant speed from cN0 toward c_tilde0, stopping at half the inner
    radius inside the disk (any positive penetration forces the collision).
    Integrating the mechanism along this path produces a collision event.
    """
    _require_disks(geom)
    if speed <= 0.0:
        raise ValueError("speed must be positive")
    offset = cN0 - geom.c_tilde0
    dist = offset.norm()
    if dist == 0.0:
        raise InadmissibleConfig("obstacle already at the center point")
    u = Vec2(offset.x / dist, offset.y / dist)
    target = geom.c_tilde0 + u * (geom.r_d / 2.0)
    travel = cN0.distance_to(target)
    duration = travel / speed
    v = Vec2((target.x - cN0.x) / duration, (target.y - cN0.y) / duration)

    times = np.linspace(0.0, duration, n)
    pts = np.empty((n, 2))
    pts[:, 0] = cN0.x + v.x * times
    pts[:, 1] = cN0.y + v.y * times
    pts[-1] = (target.x, target.y)
    return SampledPath(
        times,
        pts,
        velocity_fn=lambda t: v,
        position_fn=lambda t: Vec2(cN0.x + v.x * t, cN0.y + v.y * t),
    )


def collinearity_check(alpha: float, cM0: Vec2, cN0: Vec2, tol: float = 1e-10) -> bool:
    """Check the beta = 0 geometry: the center point lies on the line
    through the initial centers, with |c_tilde0 - cM0| = alpha * |c_tilde0 - cN0|."""
    if alpha == 1.0:
        raise InvalidParameters("alpha = 1 has no center point")
    c_tilde0 = cN0 * (alpha / (alpha - 1.0)) - cM0 * (1.0 / (alpha - 1.0))
    cross = (c_tilde0 - cM0).cross(cN0 - cM0)
    ratio_gap = abs(c_tilde0.distance_to(cM0) - alpha * c_tilde0.distance_to(cN0))
    return abs(cross) <= tol and ratio_gap <= tol
