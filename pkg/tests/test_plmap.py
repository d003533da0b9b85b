import itertools
import random
from fractions import Fraction

import pytest

from toricplm import linalg as la
from toricplm.building import Frame, adapted_prevaluation, constant, is_adapted, tensor as tensor_preval
from toricplm.fan import Fan, product_p1, projective_space
from toricplm.fixtures import example_tangent_pn, three_lines_instance
from toricplm.plmap import (
    ConePiece,
    IncompatibleError,
    MalformedPLMapError,
    PLMap,
    RayFiltrationData,
    check_well_defined,
    compatibility_solve,
    is_integral,
    line_bundle,
    random_ray_data,
    ray_filtrations,
    tensor,
    tensor_filtrations,
    trivial,
)


def lattice_points(n, rng, count, bound=6):
    return [tuple(rng.randint(-bound, bound) for _ in range(n)) for _ in range(count)]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_tangent_fixture_solves_to_expected(n):
    fan, data, expected = example_tangent_pn(n)
    phi = compatibility_solve(fan, data)
    rng = random.Random(n)
    for x in lattice_points(n, rng, 50):
        assert phi(x) == expected(x)
    assert ray_filtrations(expected) == data


def test_tangent_p2_weights_match_example():
    fan, data, _ = example_tangent_pn(2)
    phi = compatibility_solve(fan, data)
    w1, w2 = (1, 0), (0, 1)
    c12 = fan.max_cones.index((0, 1))
    c23 = fan.max_cones.index((1, 2))
    assert sorted(phi.pieces[c12].weights) == sorted([w1, w2])
    assert set(phi.pieces[c12].frame.vectors) == {(1, 0), (0, 1)}
    assert sorted(phi.pieces[c23].weights) == sorted([(-1, 0), (-1, 1)])


def test_tangent_p2_filtration_table():
    fan, data, _ = example_tangent_pn(2)
    for i, v in enumerate(fan.rays):
        f = data[i]
        assert f.threshold(0) == la.full_space(2)
        assert f.threshold(1) == la.span([v], 2)
        assert f.threshold(2).dim == 0


def test_evaluate_examples():
    fan = projective_space(2)
    phi = line_bundle(fan, [2, -1, 3])
    for rho, a in enumerate([2, -1, 3]):
        assert phi(fan.rays[rho]) == constant(1, a)
    _, _, tp2 = example_tangent_pn(2)
    v = tp2((1, 0))
    assert v.labels == (1, 0) and v.flag[0] == la.span([(1, 0)], 2)
    assert tp2((0, 0)) == constant(2, 0)


def test_evaluate_outside_support():
    fan = Fan(2, [(1, 0), (0, 1)], [(0, 1)])
    phi = trivial(fan, 1)
    with pytest.raises(ValueError):
        phi((-1, 0))


def test_divisor_filtration_jump():
    fan = projective_space(1)
    data = ray_filtrations(line_bundle(fan, [3, -2]))
    assert data[0].threshold(3).dim == 1 and data[0].threshold(4).dim == 0
    assert data[1].threshold(-2).dim == 1 and data[1].threshold(-1).dim == 0


def test_three_lines_dimension_witness():
    fan, data = three_lines_instance()
    with pytest.raises(IncompatibleError) as info:
        compatibility_solve(fan, data)
    assert info.value.kind == "dimension"
    assert info.value.cone == 0
    assert info.value.witness["multiplicity"] == -1


def test_three_lines_brute_force_oracle():
    # no pair of lines drawn from the three can be adapted to all three filtrations
    fan, data = three_lines_instance()
    lines = [(1, 0), (0, 1), (1, 1)]
    for a, b in itertools.combinations(lines, 2):
        frame = Frame([a, b])
        assert not all(is_adapted(frame, data[i]) for i in range(3))


def test_rank_one_always_compatible():
    rng = random.Random(3)
    for fan in (projective_space(2), product_p1(2), projective_space(3)):
        a = [rng.randint(-4, 4) for _ in fan.rays]
        data = RayFiltrationData(1, {rho: constant(1, x) for rho, x in enumerate(a)})
        phi = compatibility_solve(fan, data)
        for rho, x in enumerate(a):
            assert phi(fan.rays[rho]) == constant(1, x)


def test_missing_ray_filtration():
    fan = projective_space(1)
    with pytest.raises(ValueError):
        compatibility_solve(fan, RayFiltrationData(1, {0: constant(1, 0)}))


def test_integrality():
    _, _, tp2 = example_tangent_pn(2)
    assert is_integral(tp2).integral
    half = line_bundle(projective_space(1), [Fraction(1, 2), 0])
    assert not is_integral(half).integral
    with pytest.raises(MalformedPLMapError):
        ray_filtrations(half)


def test_integrality_non_smooth_cones():
    # full-dimensional non-smooth cone: decided exactly
    fan = Fan(2, [(1, 1), (1, -1)], [(0, 1)])
    piece = ConePiece(0, Frame([(1,)]), ((Fraction(1, 2), Fraction(1, 2)),))
    rep = is_integral(PLMap(fan, 1, (piece,)))
    assert not rep.integral and rep.verified
    # lower-dimensional non-smooth cone: only ray pairings are checked
    fan3 = Fan(3, [(1, 1, 0), (1, -1, 0)], [(0, 1)])
    piece3 = ConePiece(0, Frame([(1,)]), ((Fraction(1, 2), Fraction(1, 2), 0),))
    rep3 = is_integral(PLMap(fan3, 1, (piece3,)))
    assert rep3.integral and not rep3.verified and rep3.unverified_cones == (0,)


def test_tensor_examples():
    fan = projective_space(2)
    a, b = [1, 0, -2], [3, 1, 1]
    t = tensor(line_bundle(fan, a), line_bundle(fan, b))
    expected = line_bundle(fan, [x + y for x, y in zip(a, b)])
    _, _, tp2 = example_tangent_pn(2)
    twisted = tensor(tp2, line_bundle(fan, [0, 0, 0]))
    rng = random.Random(0)
    for x in lattice_points(2, rng, 30):
        assert t(x) == expected(x)
        assert twisted(x) == tp2(x)
        assert tensor(tp2, tp2)(x) == tensor_preval(tp2(x), tp2(x))


def test_tensor_ray_filtrations_formula():
    _, data, tp2 = example_tangent_pn(2)
    assert ray_filtrations(tensor(tp2, tp2)) == tensor_filtrations(data, data)


def test_well_defined_detects_bad_map():
    _, _, tp2 = example_tangent_pn(2)
    assert check_well_defined(tp2) == []
    p = tp2.pieces[0]
    bad = ConePiece(0, p.frame, (la.scale(2, p.weights[0]), p.weights[1]))
    broken = PLMap(tp2.fan, 2, (bad,) + tp2.pieces[1:])
    assert check_well_defined(broken)
    with pytest.raises(MalformedPLMapError):
        ray_filtrations(broken)


def test_malformed_plmap_construction():
    fan = projective_space(1)
    piece = ConePiece(0, Frame([(1,)]), ((0,),))
    with pytest.raises(MalformedPLMapError):
        PLMap(fan, 1, (piece,))


@pytest.mark.parametrize("fan", [projective_space(2), product_p1(2), projective_space(3)])
def test_random_roundtrip_and_soundness(fan):
    rng = random.Random(11)
    for trial in range(6):
        r = rng.randint(1, 3)
        data = random_ray_data(fan, r, rng, low=-3, high=3)
        try:
            phi = compatibility_solve(fan, data, seed=trial)
        except IncompatibleError as exc:
            # only possible beyond two rays per cone
            assert fan.n >= 3
            continue
        assert ray_filtrations(phi) == data
        for k, piece in enumerate(phi.pieces):
            for rho in fan.max_cones[k]:
                vals = piece.values_at(fan.rays[rho])
                assert adapted_prevaluation(piece.frame, vals) == data[rho]
        again = compatibility_solve(fan, ray_filtrations(phi), seed=trial + 100)
        for x in lattice_points(fan.n, rng, 20):
            assert again(x) == phi(x)
        assert check_well_defined(phi, samples=5) == []
