import math
from fractions import Fraction

import numpy as np
import pytest

from metricdepth.errors import NumericalError
from metricdepth.estimators import (
    breakdown_lower_bound,
    frechet_mean,
    frechet_median,
    geodesic_distance_depth,
    mhd_median,
)
from metricdepth.spaces import SPD, Euclidean, Sphere

from conftest import random_points

E1, E2, E3 = np.eye(3)


def euclid(values, dim=1):
    space = Euclidean(dim)
    return space, [space.validate_point(np.atleast_1d(v)) for v in values]


# ------------------------------------------------------------ intrinsic mean

def test_mean_matches_arithmetic_mean(rng):
    space = Euclidean(3)
    pts = random_points(space, 25, rng)
    result = frechet_mean(space, pts)
    assert np.allclose(result.point, np.mean(pts, axis=0), atol=1e-10)
    assert result.converged


def test_mean_sphere_midpoint():
    space = Sphere(2)
    a, b = space.validate_point(E1), space.validate_point(E2)
    result = frechet_mean(space, [a, b])
    assert np.allclose(result.point, np.array([1, 1, 0]) / np.sqrt(2), atol=1e-8)


def test_mean_spd_commuting_geometric_mean():
    space = SPD(2)
    a = space.validate_point(np.eye(2))
    b = space.validate_point(np.diag([math.e**2, math.e**2]))
    result = frechet_mean(space, [a, b])
    assert np.allclose(result.point, np.diag([math.e, math.e]), atol=1e-8)


def test_mean_first_order_condition(rng):
    tol = 1e-8
    for space in (Sphere(2), SPD(2)):
        pts = random_points(space, 15, rng)
        result = frechet_mean(space, pts, tol=tol)
        assert result.converged
        assert result.extras["grad_norm"] <= 10 * tol


def test_mean_antipodal_failure_advises():
    space = Sphere(2)
    pts = [space.validate_point(E1), space.validate_point(-E1)]
    with pytest.raises(NumericalError, match="initial point"):
        frechet_mean(space, pts)


# ---------------------------------------------------------- intrinsic median

def test_median_majority_point():
    space, pts = euclid([0.0, 0.0, 0.0, 10.0])
    result = frechet_median(space, pts)
    assert np.allclose(result.point, [0.0], atol=1e-8)


def test_median_collinear():
    space = Euclidean(2)
    pts = [space.validate_point(p) for p in [(0, 0), (1, 0), (5, 0)]]
    result = frechet_median(space, pts)
    assert np.allclose(result.point, [1, 0], atol=1e-8)


def test_median_sphere_arc_middle():
    space = Sphere(2)
    angles = [0.0, 0.2, 0.5]  # within a quarter arc of a great circle
    pts = [space.validate_point([np.cos(a), np.sin(a), 0.0]) for a in angles]
    result = frechet_median(space, pts)
    assert np.allclose(result.point, pts[1], atol=1e-8)


def test_objectives_never_increase(rng):
    space = SPD(2)
    pts = random_points(space, 20, rng)
    init_sq = np.mean(space.distance_matrix(pts, pts) ** 2, axis=1).min()
    init_abs = np.mean(space.distance_matrix(pts, pts), axis=1).min()
    assert frechet_mean(space, pts).objective <= init_sq + 1e-12
    assert frechet_median(space, pts).objective <= init_abs + 1e-12


# ------------------------------------------------------------------ GDD

def test_gdd_values():
    space, pts = euclid([0.0, 2.0])
    y = space.validate_point([1.0])
    assert geodesic_distance_depth(space, pts, y) == pytest.approx(math.exp(-1))
    assert geodesic_distance_depth(space, [pts[0], pts[0]], pts[0]) == 1.0


def test_gdd_argmax_is_distance_sum_argmin(rng):
    space = Euclidean(2)
    pts = random_points(space, 20, rng)
    gdd = [geodesic_distance_depth(space, pts, p) for p in pts]
    sums = space.distance_matrix(pts, pts).sum(axis=1)
    assert int(np.argmax(gdd)) == int(np.argmin(sums))


# ----------------------------------------------------------------- depth median

def test_mhd_median_three_points():
    space, pts = euclid([1.0, 2.0, 3.0])
    result = mhd_median(space, pts, jiggle_k=0, budget=0, seed=0)
    assert np.allclose(result.point, [2.0])
    assert result.extras["depth_num"] == 2 and result.extras["depth_den"] == 3
    assert result.extras["breakdown_lower_bound"] == pytest.approx(0.4)


def test_mhd_median_single_point():
    space, pts = euclid([7.0])
    result = mhd_median(space, pts, jiggle_k=4, budget=5, seed=0)
    assert np.allclose(result.point, [7.0]) and result.objective == 1.0


def test_mhd_median_congruence_equivariance(rng):
    # With sample anchors and no refinement, mapping the data through a
    # congruence maps the median exactly (same argmax index).
    space = SPD(2)
    pts = random_points(space, 15, rng)
    a = rng.standard_normal((2, 2)) + 2 * np.eye(2)
    moved = [space.validate_point(a @ np.asarray(p) @ a.T) for p in pts]
    res = mhd_median(space, pts, jiggle_k=0, budget=0, seed=5)
    res_moved = mhd_median(space, moved, jiggle_k=0, budget=0, seed=5)
    expected = a @ np.asarray(res.point) @ a.T
    assert np.allclose(res_moved.point, expected, atol=1e-8)
    assert res.extras["depth_num"] == res_moved.extras["depth_num"]


def test_mhd_median_deterministic(rng):
    space = Euclidean(2)
    pts = random_points(space, 20, rng)
    r1 = mhd_median(space, pts, jiggle_k=3, budget=20, seed=42)
    r2 = mhd_median(space, pts, jiggle_k=3, budget=20, seed=42)
    assert np.array_equal(r1.point, r2.point)
    assert r1.objective == r2.objective


# ------------------------------------------------------------ breakdown bound

def test_breakdown_bound_values():
    assert breakdown_lower_bound(Fraction(1, 2)) == Fraction(1, 3)
    assert breakdown_lower_bound(0.0) == 0.0
    assert breakdown_lower_bound(1.0) == 0.5
    with pytest.raises(Exception):
        breakdown_lower_bound(1.5)
