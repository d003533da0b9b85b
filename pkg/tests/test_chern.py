import itertools
import random
from fractions import Fraction

import pytest
import sympy

from toricplm import linalg as la
from toricplm.building import Frame, adapted_prevaluation, constant, from_filtration
from toricplm.chern import (
    PiecewisePolynomial,
    Polynomial,
    chern_class,
    elementary_symmetric_value,
    equivalent_mod_linear,
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
    tensor,
)


def to_sympy(p: Polynomial, xs):
    return sum(sympy.Rational(c.numerator, c.denominator) * sympy.prod([x ** k for x, k in zip(xs, e)])
               for e, c in p.terms.items())


def test_elementary_symmetric_examples():
    c = Fraction(3, 2)
    v = constant(2, c)
    assert elementary_symmetric_value(v, 1) == 2 * c
    assert elementary_symmetric_value(v, 2) == c * c
    w = from_filtration([(1, la.span([(1, 0)], 2)), (0, la.full_space(2))])
    assert elementary_symmetric_value(w, 1) == 1
    assert elementary_symmetric_value(w, 2) == 0
    with pytest.raises(ValueError):
        elementary_symmetric_value(w, 3)
    with pytest.raises(ValueError):
        elementary_symmetric_value(w, 0)


def test_frame_independence():
    a = adapted_prevaluation(Frame([(1, 0), (0, 1)]), [2, -1])
    b = adapted_prevaluation(Frame([(1, 0), (1, 1)]), [2, -1])
    assert a == b
    for i in (1, 2):
        assert elementary_symmetric_value(a, i) == elementary_symmetric_value(b, i)


def test_tangent_p2_chern_classes():
    fan, _, phi = example_tangent_pn(2)
    k = fan.max_cones.index((0, 1))
    c1 = chern_class(phi, 1)
    assert c1.polys[k] == Polynomial.linear((1, 1))
    assert all(c1(v) == 1 for v in fan.rays)
    assert c1.is_compatible()
    c2 = chern_class(phi, 2)
    assert c2.polys[k] == Polynomial(2, {(1, 1): 1})
    with pytest.raises(ValueError):
        chern_class(phi, 3)


def test_rank_one_c1_is_the_pl_function():
    fan = product_p1(2)
    phi = line_bundle(fan, [2, -1, 0, 3])
    c1 = chern_class(phi, 1)
    for p, piece in zip(c1.polys, phi.pieces):
        assert p == Polynomial.linear(piece.weights[0])


def test_expansion_matches_sympy():
    fan, _, phi = example_tangent_pn(3)
    xs = sympy.symbols("x1:4")
    for i in (1, 2, 3):
        c = chern_class(phi, i)
        for p, piece in zip(c.polys, phi.pieces):
            lins = [sum(sympy.Rational(int(u[j])) * xs[j] for j in range(3)) for u in piece.weights]
            want = sum(sympy.prod(s) for s in itertools.combinations(lins, i))
            assert sympy.expand(to_sympy(p, xs) - want) == 0


@pytest.mark.parametrize("fan", [projective_space(2), product_p1(2)])
def test_chern_matches_pointwise_symmetric_functions(fan):
    rng = random.Random(31)
    for trial in range(5):
        r = rng.randint(1, 3)
        phi = compatibility_solve(fan, random_ray_data(fan, r, rng), seed=trial)
        for i in range(1, r + 1):
            c = chern_class(phi, i)
            assert c.is_compatible()
            for _ in range(10):
                x = (rng.randint(-5, 5), rng.randint(-5, 5))
                assert c(x) == elementary_symmetric_value(phi(x), i)


def test_c1_of_tensor():
    fan = projective_space(2)
    rng = random.Random(37)
    a = compatibility_solve(fan, random_ray_data(fan, 2, rng))
    b = compatibility_solve(fan, random_ray_data(fan, 3, rng))
    lhs = chern_class(tensor(a, b), 1)
    rhs = chern_class(a, 1) * 3 + chern_class(b, 1) * 2
    assert lhs == rhs


def test_equivalent_mod_linear():
    fan = projective_space(2)
    f = chern_class(line_bundle(fan, [1, 0, 2]), 1)
    m = (2, -1)
    g = PiecewisePolynomial(fan, tuple(p + Polynomial.linear(m) for p in f.polys))
    assert equivalent_mod_linear(f, g)
    p1 = projective_space(1)
    assert not equivalent_mod_linear(chern_class(line_bundle(p1, [1, 0]), 1),
                                     chern_class(line_bundle(p1, [2, 0]), 1))
    # divisors differing by div(chi^m)
    a = [1, -2, 3]
    b = [x + la.dot(la.vec(v), la.vec(m)) for x, v in zip(a, fan.rays)]
    assert equivalent_mod_linear(chern_class(line_bundle(fan, a), 1), chern_class(line_bundle(fan, b), 1))
    _, _, tp2 = example_tangent_pn(2)
    with pytest.raises(ValueError):
        equivalent_mod_linear(chern_class(tp2, 2), chern_class(tp2, 2))


def test_face_violation_detected():
    _, _, tp2 = example_tangent_pn(2)
    p = tp2.pieces[0]
    bad = ConePiece(0, p.frame, (la.scale(2, p.weights[0]), p.weights[1]))
    broken = PLMap(tp2.fan, 2, (bad,) + tp2.pieces[1:])
    with pytest.raises(MalformedPLMapError):
        chern_class(broken, 1)


def test_polynomial_substitution():
    p = Polynomial(2, {(2, 0): 1, (0, 1): -3})
    q = p.substitute([(1, 1)])
    assert q == Polynomial(1, {(2,): 1, (1,): -3})
    assert p((2, 5)) == 4 - 15
    assert [e for e, _ in p.sorted_terms()] == [(2, 0), (0, 1)]
