import pytest

from fibersim.errors import InadmissibleConfig
from fibersim.geometry import Vec2, ZERO2
from fibersim.bundle import (
    ADMISSIBILITY_TOL,
    TWO_DISK,
    Config,
    TotalTangent,
    boundary_distance,
    differential_project,
    inward_normal_field,
    is_admissible,
    is_admissible_velocity,
    project,
)

from conftest import random_admissible_config, random_boundary_config


def test_project():
    assert project(Config(Vec2(3, 0), Vec2(0, 0))) == Vec2(0, 0)
    assert project(Config(Vec2(0, 5), Vec2(0, 2))) == Vec2(0, 2)
    assert project(Config(Vec2(2, 2), Vec2(0, 2))) == Vec2(0, 2)


def test_differential_project():
    e = Config(Vec2(3, 0), Vec2(0, 0))
    Y = TotalTangent(e, vM=Vec2(1, 1), vN=Vec2(0, 2))
    assert differential_project(Y).v == Vec2(0, 2)
    Y = TotalTangent(e, vM=ZERO2, vN=ZERO2)
    assert differential_project(Y).v == ZERO2
    e2 = Config(Vec2(5, 5), Vec2(3, 3))
    Y = TotalTangent(e2, vM=Vec2(5, 5), vN=Vec2(1, 0))
    X = differential_project(Y)
    assert X.at == Vec2(3, 3) and X.v == Vec2(1, 0)


def test_boundary_distance():
    assert boundary_distance(Config(Vec2(3, 0), Vec2(0, 0))) == 1.0
    assert boundary_distance(Config(Vec2(2, 0), Vec2(0, 0))) == 0.0
    assert boundary_distance(Config(Vec2(4, 3), Vec2(1, -1))) == 3.0


def test_admissible_velocity_at_boundary():
    e = Config(Vec2(2, 0), Vec2(0, 0))
    assert is_admissible_velocity(TotalTangent(e, vM=Vec2(1, 0), vN=ZERO2))
    assert not is_admissible_velocity(TotalTangent(e, vM=Vec2(-1, 0), vN=ZERO2))


def test_admissible_velocity_interior_is_free(rng):
    e = Config(Vec2(3, 0), Vec2(0, 0))
    for _ in range(50):
        Y = TotalTangent(e, vM=Vec2(*rng.uniform(-9, 9, 2)), vN=Vec2(*rng.uniform(-9, 9, 2)))
        assert is_admissible_velocity(Y)


def test_admissible_velocity_rejects_overlapping_config():
    e = Config(Vec2(1, 0), Vec2(0, 0))
    with pytest.raises(InadmissibleConfig):
        is_admissible_velocity(TotalTangent(e, vM=ZERO2, vN=ZERO2))


def test_inward_normal_field_cases():
    assert inward_normal_field(Config(Vec2(2, 0), Vec2(0, 0))).vM == Vec2(1, 0)
    n = inward_normal_field(Config(Vec2(0, 3), Vec2(0, 0)))
    assert n.vM == Vec2(0, 1) and n.vN == ZERO2
    assert inward_normal_field(Config(Vec2(0, -2), Vec2(0, 0))).vM == Vec2(0, -1)


def test_vertical_vectors_project_to_zero(rng):
    for _ in range(100):
        e = random_admissible_config(rng)
        Y = TotalTangent(e, vM=Vec2(*rng.uniform(-5, 5, 2)), vN=ZERO2)
        assert differential_project(Y).v == ZERO2


def test_inward_normal_admissible_at_boundary(rng):
    for _ in range(200):
        e = random_boundary_config(rng)
        assert is_admissible_velocity(inward_normal_field(e))


def test_project_ignores_ego(rng):
    for _ in range(100):
        e = random_admissible_config(rng)
        perturbed = Config(e.cM + Vec2(*rng.uniform(-3, 3, 2)), e.cN)
        assert project(perturbed) == project(e)


def test_two_disk_bundle_interface():
    e = Config(Vec2(3, 0), Vec2(0, 0))
    assert TWO_DISK.total_dim == 4 and TWO_DISK.base_dim == 2
    assert TWO_DISK.constraint(e) == boundary_distance(e)
    assert TWO_DISK.project(e) == e.cN
    assert is_admissible(e)
    assert not is_admissible(Config(Vec2(1.5, 0), Vec2(0, 0)))


def test_boundary_band_velocity_test(rng):
    # slightly off the exact boundary but inside the tolerance band: the
    # inner-product test still applies
    e = Config(Vec2(2.0 + 0.4 * ADMISSIBILITY_TOL, 0), Vec2(0, 0))
    assert not is_admissible_velocity(TotalTangent(e, vM=Vec2(-1, 0), vN=ZERO2))
