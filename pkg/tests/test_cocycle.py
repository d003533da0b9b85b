import itertools
import random

import pytest

from toricplm import linalg as la
from toricplm.chern import chern_class
from toricplm.cocycle import (
    check_all,
    cocycle_check,
    inverse_check,
    is_regular,
    regularity_failure,
    transition,
)
from toricplm.fan import product_p1, projective_space
from toricplm.fixtures import example_tangent_pn
from toricplm.plmap import (
    ConePiece,
    MalformedPLMapError,
    PLMap,
    compatibility_solve,
    line_bundle,
    random_ray_data,
    ray_filtrations,
)


def corrupted_tp2():
    _, _, phi = example_tangent_pn(2)
    k = phi.fan.max_cones.index((0, 1))
    p = phi.pieces[k]
    i = p.frame.vectors.index((1, 0))
    weights = list(p.weights)
    weights[i] = la.scale(2, weights[i])
    pieces = list(phi.pieces)
    pieces[k] = ConePiece(k, p.frame, tuple(weights))
    return PLMap(phi.fan, 2, tuple(pieces))


def test_p1_line_bundle_transition():
    fan = projective_space(1)
    plus = next(k for k, c in enumerate(fan.max_cones) if fan.rays[c[0]] == (1,))
    minus = 1 - plus
    for a_plus, a_minus in [(1, 1), (2, -3), (0, 0)]:
        a = [0, 0]
        a[fan.rays.index((1,))] = a_plus
        a[fan.rays.index((-1,))] = a_minus
        psi = transition(line_bundle(fan, a), plus, minus)
        assert psi.coeffs == ((1,),)
        assert psi.exps[0][0] == (-(a_plus + a_minus),)
        assert is_regular(psi, (), fan)


def test_same_cone_is_identity():
    _, _, phi = example_tangent_pn(2)
    for k in range(3):
        m = transition(phi, k, k).as_laurent()
        assert m.is_identity()
        assert cocycle_check(phi, k, k, k)


def test_tp2_explicit_transition():
    fan, _, phi = example_tangent_pn(2)
    s3 = fan.max_cones.index((0, 1))
    s1 = fan.max_cones.index((1, 2))
    psi = transition(phi, s3, s1)
    allowed = {(1, 0), (0, 1), (-1, 0), (-1, 1)}
    diffs = {la.sub(a, b) for a in allowed for b in allowed}
    assert all(e in diffs for _, _, _, e in psi.nonzero())
    assert la.matmul(la.transpose(phi.pieces[s1].frame.vectors), psi.as_laurent().at_identity()) == \
        la.transpose(phi.pieces[s3].frame.vectors)
    assert is_regular(psi, (1,), fan)
    assert is_regular(transition(phi, s1, s3), (1,), fan)


def test_tau_must_be_common_face():
    fan, _, phi = example_tangent_pn(2)
    psi = transition(phi, 0, 1)
    missing = next(rho for rho in fan.max_cones[0] if rho not in fan.max_cones[1])
    with pytest.raises(ValueError):
        regularity_failure(psi, (missing,), fan)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_tangent_cocycle(n):
    _, _, phi = example_tangent_pn(n)
    rep = check_all(phi)
    assert rep.regular and rep.cocycle and not rep.failures
    m = len(phi.fan.max_cones)
    for a, b, c in itertools.permutations(range(m), 3):
        assert cocycle_check(phi, a, b, c)
    for a, b in itertools.permutations(range(m), 2):
        assert inverse_check(phi, a, b)


def test_det_exponent_is_c1_difference():
    fan, _, phi = example_tangent_pn(2)
    c1 = chern_class(phi, 1)
    for wall in fan.walls:
        psi = transition(phi, wall.sigma, wall.sigma_prime)
        diff = la.sub(c1.polys[wall.sigma_prime].linear_part(), c1.polys[wall.sigma].linear_part())
        assert psi.det_exp == diff
        for rho in wall.tau_rays:
            assert la.dot(la.vec(fan.rays[rho]), diff) == 0


def test_corrupted_weight_breaks_regularity():
    bad = corrupted_tp2()
    rep = check_all(bad)
    assert not rep.regular
    assert any(f["kind"] == "regularity" and f["ray"] == 0 for f in rep.failures)
    # the corrupted map has no consistent Klyachko data
    with pytest.raises(MalformedPLMapError):
        ray_filtrations(bad)


@pytest.mark.parametrize("fan", [product_p1(2), projective_space(2)])
def test_random_solver_outputs(fan):
    rng = random.Random(47)
    for trial in range(5):
        phi = compatibility_solve(fan, random_ray_data(fan, rng.randint(1, 3), rng), seed=trial)
        rep = check_all(phi)
        assert rep.regular and rep.cocycle
        a, b, c = (rng.randrange(len(fan.max_cones)) for _ in range(3))
        assert cocycle_check(phi, a, b, c)
        assert inverse_check(phi, a, b)


def test_transition_json():
    _, _, phi = example_tangent_pn(2)
    doc = transition(phi, 2, 0).to_json()
    entry = next(e for row in doc["entries"] for e in row if e is not None)
    assert set(entry) == {"coeff", "exp"} and isinstance(entry["coeff"], str)
