from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from toricplm import linalg as la

small = st.integers(-3, 3)


def vectors(n, max_count=4):
    return st.lists(st.lists(small, min_size=n, max_size=n), max_size=max_count)


def subspaces(n):
    return vectors(n).map(lambda vs: la.span(vs, n))


def test_to_fraction_accepts_exact_and_rejects_floats():
    assert la.to_fraction("3/6") == Fraction(1, 2)
    assert la.to_fraction(4) == Fraction(4)
    with pytest.raises(TypeError):
        la.to_fraction(0.5)
    with pytest.raises(TypeError):
        la.to_fraction(True)


def test_canonicalize_examples():
    assert la.span([(1, 1), (2, 2)], 2).basis == ((1, 1),)
    assert la.span([], 3).dim == 0
    assert la.span([(1, 0), (1, 1)], 2) == la.full_space(2)
    with pytest.raises(ValueError):
        la.span([(1, 0, 0)], 2)


def test_intersect_examples():
    x, y = la.span([(1, 0)], 2), la.span([(0, 1)], 2)
    assert la.intersect(x, y).dim == 0
    assert la.intersect(x, x) == x
    a = la.span([(1, 0, 0), (0, 1, 0)], 3)
    b = la.span([(0, 1, 0), (0, 0, 1)], 3)
    assert la.intersect(a, b) == la.span([(0, 1, 0)], 3)


def test_sum_contains_complement():
    x, y = la.span([(1, 0)], 2), la.span([(0, 1)], 2)
    assert la.subspace_sum(x, y) == la.full_space(2)
    assert la.contains(la.full_space(2), x)
    assert not la.contains(x, y)
    comp = la.complement_basis(la.zero_space(2), la.full_space(2))
    assert la.span(comp, 2) == la.full_space(2)


def test_tensor_subspace_examples():
    t = la.tensor_subspace(la.span([(1, 0)], 2), la.span([(0, 1)], 2))
    assert t == la.span([(0, 1, 0, 0)], 4)
    assert la.tensor_subspace(la.full_space(2), la.full_space(3)) == la.full_space(6)


@settings(max_examples=60, deadline=None)
@given(vectors(4, 5))
def test_rank_and_kernel_match_sympy(rows):
    if not rows:
        return
    m = sympy.Matrix(rows)
    assert la.rank(rows) == m.rank()
    ker = la.kernel(rows, 4)
    assert len(ker) == len(m.nullspace())
    for k in ker:
        assert la.is_zero(la.matvec(la.mat(rows), k))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3))
def test_det_inverse_match_sympy(rows):
    m = sympy.Matrix(rows)
    assert la.det(rows) == Fraction(int(m.det()))
    if m.det() != 0:
        inv = la.inverse(rows)
        assert la.matmul(inv, la.mat(rows)) == la.identity(3)


@settings(max_examples=80, deadline=None)
@given(subspaces(4), subspaces(4))
def test_grassmann_identity(a, b):
    assert a.dim + b.dim == la.subspace_sum(a, b).dim + la.intersect(a, b).dim
    i = la.intersect(a, b)
    assert la.contains(a, i) and la.contains(b, i)


@settings(max_examples=60, deadline=None)
@given(vectors(3), st.integers(1, 5))
def test_canonical_form_is_representation_independent(vs, c):
    a = la.span(vs, 3)
    scaled = [la.scale(c, v) for v in reversed(vs)]
    assert la.span(scaled, 3) == a
    assert la.canonicalize(a.basis, 3) == a


@settings(max_examples=40, deadline=None)
@given(subspaces(2), subspaces(3))
def test_tensor_dimension_multiplies(a, b):
    assert la.tensor_subspace(a, b).dim == a.dim * b.dim


@settings(max_examples=40, deadline=None)
@given(subspaces(4))
def test_orthogonal_complement_dimension(a):
    c = la.orthogonal_complement(a)
    assert a.dim + c.dim == 4
    assert all(la.dot(x, y) == 0 for x in a.basis for y in c.basis)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3), st.lists(small, min_size=3, max_size=3))
def test_solve_is_exact(a, b):
    x = la.solve(a, b)
    m = sympy.Matrix(a)
    if x is None:
        assert m.rank() < sympy.Matrix.hstack(m, sympy.Matrix(b)).rank()
    else:
        assert la.matvec(la.mat(a), x) == la.vec(b)
