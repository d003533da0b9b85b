"""Worked examples: tangent bundle of P^n, line bundles, trivial bundles.

Tangent bundle of P^n.  E = Q^n with standard basis v_1..v_n and
v_{n+1} = -(v_1 + ... + v_n).  The filtration on ray i is

    E^{rho_i}_j = E          for j <= 0
                = span(v_i)  for j == 1
                = 0          for j >= 2.

The middle line pins level 1, so the zero space starts at j = 2.

Cone sigma_i omits ray i and has frame {v_j : j != i}.  Weights, with w_k the
standard basis of the dual lattice: sigma_{n+1} gets w_1..w_n on v_1..v_n;
for i <= n, line v_j (j <= n, j != i) gets w_j - w_i and line v_{n+1} gets -w_i.
"""

from __future__ import annotations

from fractions import Fraction

from . import linalg as la
from .building import Frame, constant, from_filtration
from .fan import Fan, projective_space
from .plmap import ConePiece, PLMap, RayFiltrationData, line_bundle, trivial


def _tangent_vectors(n: int) -> list:
    vs = [la.unit_vector(n, i) for i in range(n)]
    vs.append(tuple(Fraction(-1) for _ in range(n)))
    return vs


def tangent_pn_filtrations(n: int) -> RayFiltrationData:
    vs = _tangent_vectors(n)
    data = {}
    for i in range(n + 1):
        if n == 1:
            # E is a line, so span(v_i) is already E
            data[i] = from_filtration([(1, la.full_space(1))])
        else:
            data[i] = from_filtration([(1, la.span([vs[i]], n)), (0, la.full_space(n))])
    return RayFiltrationData(n, data)


def tangent_pn_plmap(n: int, fan: Fan | None = None) -> PLMap:
    """The map with the frames and weights listed in the module docstring."""
    fan = fan or projective_space(n)
    vs = _tangent_vectors(n)
    w = [la.unit_vector(n, k) for k in range(n)]
    pieces = []
    for i in range(n + 1):
        frame_idx = [j for j in range(n + 1) if j != i]
        if i == n:
            weights = [w[j] for j in frame_idx]
        else:
            weights = [la.sub(w[j], w[i]) if j < n else la.scale(-1, w[i]) for j in frame_idx]
        pieces.append(ConePiece(i, Frame([vs[j] for j in frame_idx]), tuple(weights)))
    return PLMap(fan, n, tuple(pieces))


def example_tangent_pn(n: int):
    """``(fan, ray filtrations, expected map)`` for the tangent bundle of P^n."""
    if n < 1:
        raise ValueError("n must be at least 1")
    fan = projective_space(n)
    return fan, tangent_pn_filtrations(n), tangent_pn_plmap(n, fan)


def line_bundle_filtrations(fan: Fan, a) -> RayFiltrationData:
    a = [int(x) for x in a]
    return RayFiltrationData(1, {rho: constant(1, a[rho]) for rho in range(len(fan.rays))})


def trivial_filtrations(fan: Fan, r: int) -> RayFiltrationData:
    return RayFiltrationData(r, {rho: constant(r, 0) for rho in range(len(fan.rays))})


def example_line_bundle(fan: Fan, a):
    return fan, line_bundle_filtrations(fan, a), line_bundle(fan, a)


def example_trivial(fan: Fan, r: int):
    return fan, trivial_filtrations(fan, r), trivial(fan, r)


def three_lines_instance():
    """Rank 2 on the positive orthant of Q^3 with three distinct lines at level 1.

    A frame of Q^2 has two lines, so it cannot realize three distinct level-1
    subspaces; the inclusion-exclusion multiplicity of the tuple (0, 0, 0) is
    2 - 3 = -1.
    """
    fan = Fan(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)], [(0, 1, 2)])
    lines = [(1, 0), (0, 1), (1, 1)]
    data = {
        i: from_filtration([(1, la.span([lines[i]], 2)), (0, la.full_space(2))])
        for i in range(3)
    }
    return fan, RayFiltrationData(2, data)
