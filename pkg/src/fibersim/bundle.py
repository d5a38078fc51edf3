"""The two-disk configuration bundle.

The compound state of the ego vehicle M and the obstacle vehicle N is a pair
of centers (cM, cN); the projection onto the obstacle coordinate makes the
set of safe states a bundle over the plane. Admissibility means the two
unit-radius safety disks have disjoint interiors (touching allowed):
|cM - cN| >= 2.

All operations are pure functions over immutable values.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass

from .errors import InadmissibleConfig
from .geometry import Vec2, ZERO2

# Safety-constraint tolerance band. The constraint itself is exact; floating
# arithmetic needs a band, sized well above accumulated RK4 roundoff at the
# coordinate scales used here (O(1-10) meters).
ADMISSIBILITY_TOL = 1e-9

SAFE_DISTANCE = 2.0  # two unit safety disks


@dataclass(frozen=True, slots=True)
class Config:
    """A compound state: ego center cM and obstacle center cN."""

    cM: Vec2
    cN: Vec2


@dataclass(frozen=True, slots=True)
class TotalTangent:
    """A velocity of the compound system attached at a config (m/s)."""

    at: Config
    vM: Vec2
    vN: Vec2


@dataclass(frozen=True, slots=True)
class BaseTangent:
    """An obstacle velocity attached at a base point (m/s)."""

    at: Vec2
    v: Vec2


def project(e: Config) -> Vec2:
    """Bundle projection: forget the ego, keep the obstacle."""
    return e.cN


def differential_project(Y: TotalTangent) -> BaseTangent:
    """Pushforward of the projection: kills the fiber velocity component."""
    return BaseTangent(at=Y.at.cN, v=Y.vN)


def boundary_distance(e: Config) -> float:
    """Signed clearance |cM - cN| - 2; zero exactly on touching configs."""
    return e.cM.distance_to(e.cN) - SAFE_DISTANCE


def is_admissible(e: Config) -> bool:
    return boundary_distance(e) >= -ADMISSIBILITY_TOL


def is_admissible_velocity(Y: TotalTangent) -> bool:
    """Whether a compound velocity keeps the state inside the safe region.

    In the interior every velocity is admissible. On the boundary band the
    center distance must not decrease infinitesimally:
    <vM - vN, cM - cN> >= 0 (up to the tolerance band).
    """
    bd = boundary_distance(Y.at)
    if bd < -ADMISSIBILITY_TOL:
        raise InadmissibleConfig(f"boundary_distance = {bd}")
    if bd > ADMISSIBILITY_TOL:
        return True
    rel = Y.vM - Y.vN
    sep = Y.at.cM - Y.at.cN
    return rel.dot(sep) >= -ADMISSIBILITY_TOL

def inward_normal_field(e: Config) -> TotalTangent:
    """Unit vertical field pushing the ego radially away from the obstacle.

    Vertical (vN = 0), so it projects to zero; at boundary configs it points
    into the safe region.
    """
    n = (e.cM - e.cN).unit()
    return TotalTangent(at=e, vM=n, vN=ZERO2)


class BundleModel(ABC):
    """A bundle of configuration spaces presented by one scalar constraint.

    The safe set is {e : constraint(e) >= 0} and constraint(e) == 0 is its
    boundary. Multi-constraint bundles are out of scope; one inequality is
    all the two-disk model needs, and the interface stays extensible.
    """

    total_dim: int
    base_dim: int

    @abstractmethod
    def constraint(self, e: Config) -> float: ...

    @abstractmethod
    def project(self, e: Config) -> Vec2: ...

    @abstractmethod
    def differential_project(self, Y: TotalTangent) -> BaseTangent: ...


class TwoDiskBundle(BundleModel):
    """The canonical instance: two unit safety disks in the plane."""

    total_dim = 4
    base_dim = 2

    def constraint(self, e: Config) -> float:
        return boundary_distance(e)

    def project(self, e: Config) -> Vec2:
        return project(e)

    def differential_project(self, Y: TotalTangent) -> BaseTangent:
        return differential_project(Y)


TWO_DISK = TwoDiskBundle()
