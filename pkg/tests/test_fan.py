import random

import pytest

from toricplm import linalg as la
from toricplm.fan import (
    Fan,
    FanError,
    IncompleteFanError,
    UnsupportedFanError,
    hirzebruch,
    product_p1,
    projective_space,
)


@pytest.mark.parametrize("fan,walls", [
    (projective_space(1), 1),
    (projective_space(2), 3),
    (projective_space(3), 6),
    (product_p1(2), 4),
    (hirzebruch(2), 4),
])
def test_standard_fans_valid_complete(fan, walls):
    d = fan.diagnostics
    assert d.valid and d.complete
    assert len(fan.walls) == walls


def test_p2_rays_match_tangent_example():
    fan = projective_space(2)
    assert fan.rays == ((1, 0), (0, 1), (-1, -1))


def test_non_primitive_ray_rejected():
    fan = Fan(2, [(2, 0), (0, 1)], [(0, 1)])
    assert not fan.diagnostics.primitive
    assert not fan.diagnostics.valid
    with pytest.raises(FanError):
        fan.require_valid()


def test_non_simplicial_is_unsupported():
    fan = Fan(2, [(1, 0), (0, 1), (1, 1)], [(0, 1, 2)])
    assert not fan.diagnostics.simplicial
    with pytest.raises(UnsupportedFanError):
        fan.require_valid()


def test_overlapping_cones_detected():
    fan = Fan(2, [(1, 0), (0, 1), (1, 2)], [(0, 1), (0, 2)])
    assert not fan.diagnostics.proper_intersections


def test_incomplete_fan():
    fan = Fan(2, [(1, 0), (0, 1)], [(0, 1)])
    assert fan.diagnostics.valid and not fan.diagnostics.complete
    with pytest.raises(IncompleteFanError):
        fan.require_complete()


def test_bad_indices():
    with pytest.raises(FanError):
        Fan(2, [(1, 0)], [(0, 3)])


def test_p1_wall():
    fan = projective_space(1)
    (w,) = fan.walls
    assert w.tau_rays == ()
    # w is positive on the ray of sigma
    (rho,) = fan.max_cones[w.sigma]
    assert la.dot(la.vec(fan.rays[rho]), la.vec(w.w)) == 1


def test_p2_wall_normal_by_hand():
    fan = projective_space(2)
    wall = next(w for w in fan.walls if w.tau_rays == (0,))
    assert la.vec(wall.w) in {(0, 1), (0, -1)}
    assert {wall.sigma, wall.sigma_prime} == {fan.max_cones.index((0, 1)), fan.max_cones.index((0, 2))}


@pytest.mark.parametrize("fan", [projective_space(2), projective_space(3), product_p1(2), hirzebruch(3)])
def test_wall_orientation_invariants(fan):
    for wall in fan.walls:
        w = la.vec(wall.w)
        assert la.primitive_integer(w) == tuple(int(x) for x in w)
        for rho in wall.tau_rays:
            assert la.dot(la.vec(fan.rays[rho]), w) == 0
        for rho in set(fan.max_cones[wall.sigma]) - set(wall.tau_rays):
            assert la.dot(la.vec(fan.rays[rho]), w) > 0
        for rho in set(fan.max_cones[wall.sigma_prime]) - set(wall.tau_rays):
            assert la.dot(la.vec(fan.rays[rho]), w) < 0


def test_membership_and_relint():
    fan = projective_space(2)
    k = fan.max_cones.index((0, 1))
    assert fan.contains_point(k, (1, 1))
    assert fan.cone_coordinates(k, (1, 1)) == (1, 1)
    assert not fan.contains_point(k, (-1, 0))
    assert fan.relint_sample(fan.max_cones.index((0, 2))) == (0, -1)


@pytest.mark.parametrize("fan", [projective_space(2), projective_space(3), product_p1(2), hirzebruch(1)])
def test_complete_fans_cover_random_points(fan):
    rng = random.Random(7)
    for _ in range(100):
        x = [rng.randint(-9, 9) for _ in range(fan.n)]
        assert fan.find_cone(x) is not None
