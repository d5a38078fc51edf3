"""Shared helpers: seeded random configurations and obstacle paths."""

import math

import numpy as np
import pytest

from fibersim.geometry import Vec2
from fibersim.bundle import Config, SAFE_DISTANCE
from fibersim.scenario import spline_base_path


def assert_vec_close(got, want, abs_tol=1e-12):
    assert abs(got.x - want.x) <= abs_tol and abs(got.y - want.y) <= abs_tol, (
        f"{got} != {want} within {abs_tol}"
    )


def random_admissible_config(rng, min_gap=0.5, max_gap=6.0, center_scale=5.0) -> Config:
    cN = Vec2(*rng.uniform(-center_scale, center_scale, 2))
    ang = rng.uniform(0.0, 2.0 * math.pi)
    d = SAFE_DISTANCE + rng.uniform(min_gap, max_gap)
    return Config(cN + Vec2(d * math.cos(ang), d * math.sin(ang)), cN)


def random_boundary_config(rng, center_scale=5.0) -> Config:
    cN = Vec2(*rng.uniform(-center_scale, center_scale, 2))
    ang = rng.uniform(0.0, 2.0 * math.pi)
    return Config(cN + Vec2(SAFE_DISTANCE * math.cos(ang), SAFE_DISTANCE * math.sin(ang)), cN)


def random_base_vector(rng, scale=3.0) -> Vec2:
    return Vec2(*rng.uniform(-scale, scale, 2))


def random_gamma(rng, start: Vec2, spread=2.0, waypoints=5, n=1001):
    w = np.empty((waypoints, 2))
    w[0] = (start.x, start.y)
    w[1:, 0] = start.x + rng.uniform(-spread, spread, waypoints - 1)
    w[1:, 1] = start.y + rng.uniform(-spread, spread, waypoints - 1)
    return spline_base_path(w, 0.0, 1.0, n=n)


@pytest.fixture
def rng():
    return np.random.default_rng(20260811)
