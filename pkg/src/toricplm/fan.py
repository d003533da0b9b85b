"""Simplicial rational fans: validation, walls, and cone membership."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Sequence

from . import linalg as la


class FanError(ValueError):
    """Structural problem with a fan (the message names the offending cones)."""


class UnsupportedFanError(FanError):
    """The fan is outside the supported class (non-simplicial cones)."""


class IncompleteFanError(FanError):
    pass


@dataclass(frozen=True)
class Wall:
    """Codimension-one cone ``tau`` shared by ``sigma`` and ``sigma_prime``.

    ``w`` is the primitive covector spanning the annihilator of ``tau``,
    oriented to be positive on ``sigma``.
    """

    tau_rays: tuple
    sigma: int
    sigma_prime: int
    w: tuple


@dataclass
class FanDiagnostics:
    primitive: bool = True
    simplicial: bool = True
    proper_intersections: bool = True
    complete: bool = False
    problems: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return self.primitive and self.simplicial and self.proper_intersections

    def as_dict(self) -> dict:
        return {
            "valid": self.valid,
            "primitive": self.primitive,
            "simplicial": self.simplicial,
            "proper_intersections": self.proper_intersections,
            "complete": self.complete,
            "problems": list(self.problems),
        }


@dataclass(frozen=True)
class Fan:
    """A fan in Q^n given by primitive ray generators and maximal cones.

    Cones are stored as sorted tuples of 0-based ray indices.
    """

    n: int
    rays: tuple
    max_cones: tuple

    def __init__(self, n: int, rays: Sequence[Sequence[int]], max_cones: Sequence[Sequence[int]]):
        rays = tuple(tuple(int(x) for x in r) for r in rays)
        cones = tuple(tuple(sorted(int(i) for i in c)) for c in max_cones)
        for r in rays:
            if len(r) != n:
                raise FanError(f"ray {r} does not have length {n}")
        for c in cones:
            if not c:
                raise FanError("empty maximal cone")
            if len(set(c)) != len(c):
                raise FanError(f"cone {c} repeats a ray index")
            for i in c:
                if not 0 <= i < len(rays):
                    raise FanError(f"cone {c} refers to missing ray {i}")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "max_cones", cones)

    def ray_vectors(self, cone: int | Sequence[int]) -> la.Matrix:
        idx = self.max_cones[cone] if isinstance(cone, int) else cone
        return tuple(la.vec(self.rays[i]) for i in idx)

    def cones_containing_ray(self, ray: int) -> list:
        return [k for k, c in enumerate(self.max_cones) if ray in c]

    def is_smooth_cone(self, cone: int) -> bool:
        """Ray generators of the cone extend to a basis of Z^n."""
        vs = self.rays_of(cone)
        m = len(vs)
        g = 0
        for cols in itertools.combinations(range(self.n), m):
            minor = la.det([[v[c] for c in cols] for v in vs])
            g = gcd(g, int(minor))
        return g == 1

    def rays_of(self, cone: int) -> tuple:
        return tuple(self.rays[i] for i in self.max_cones[cone])

    def cone_dim(self, cone: int) -> int:
        return la.rank(self.ray_vectors(cone))

    # diagnostics ---------------------------------------------------------

    @cached_property
    def diagnostics(self) -> FanDiagnostics:
        return validate(self)

    def require_valid(self):
        d = self.diagnostics
        if not d.simplicial:
            raise UnsupportedFanError("; ".join(d.problems))
        if not d.valid:
            raise FanError("; ".join(d.problems))

    def require_complete(self):
        self.require_valid()
        if not self.diagnostics.complete:
            raise IncompleteFanError(
                "operation requires a complete fan: " + "; ".join(self.diagnostics.problems)
            )

    @cached_property
    def walls(self) -> tuple:
        return compute_walls(self)

    # membership ----------------------------------------------------------

    def cone_coordinates(self, cone: int, x: Sequence) -> la.Vector | None:
        """Coefficients of ``x`` in the cone's ray generators, or None if outside its span."""
        vs = self.ray_vectors(cone)
        lam = la.solve(la.transpose(vs), la.vec(x))
        return lam

    def contains_point(self, cone: int, x: Sequence) -> bool:
        lam = self.cone_coordinates(cone, x)
        return lam is not None and all(c >= 0 for c in lam)

    def relint_sample(self, cone: int) -> la.Vector:
        vs = self.ray_vectors(cone)
        out = la.zero_vector(self.n)
        for v in vs:
            out = la.add(out, v)
        return out

    def find_cone(self, x: Sequence) -> int | None:
        for k in range(len(self.max_cones)):
            if self.contains_point(k, x):
                return k
        return None

    def shared_faces(self) -> list:
        """``(k, l, common_rays)`` for each pair of maximal cones meeting in a nonzero face."""
        out = []
        for k, l in itertools.combinations(range(len(self.max_cones)), 2):
            common = tuple(sorted(set(self.max_cones[k]) & set(self.max_cones[l])))
            if common:
                out.append((k, l, common))
        return out


def _cone_constraints(vs: la.Matrix, n: int):
    """Equalities and facet inequalities cutting out the simplicial cone on ``vs``."""
    eqs = la.kernel(vs, n) if vs else la.identity(n)
    gram = la.matmul(vs, la.transpose(vs))
    ineqs = la.matmul(la.inverse(gram), vs)
    return eqs, ineqs


def _extreme_rays(g: Sequence[Sequence], d: int) -> list:
    """Extreme rays of the pointed cone ``{y in Q^d : g y >= 0}``."""
    if d == 0:
        return []
    rays = []
    candidates = []
    if d == 1:
        candidates = [(Fraction(1),)]
    else:
        for rows in itertools.combinations(g, d - 1):
            if la.rank(rows) != d - 1:
                continue
            k = la.kernel(rows, d)
            candidates.append(k[0])
    for k in candidates:
        for s in (1, -1):
            y = la.scale(s, k)
            if all(la.dot(row, y) >= 0 for row in g):
                lead = next(abs(c) for c in y if c != 0)
                y = la.scale(1 / lead, y)
                if y not in rays:
                    rays.append(y)
    return rays


def _proper_intersection(fan: Fan, k: int, l: int) -> bool:
    n = fan.n
    v1, v2 = fan.ray_vectors(k), fan.ray_vectors(l)
    eq1, in1 = _cone_constraints(v1, n)
    eq2, in2 = _cone_constraints(v2, n)
    w = la.kernel(eq1 + eq2, n) if (eq1 or eq2) else la.identity(n)
    d = len(w)
    if d == 0:
        return True
    g = la.matmul(in1 + in2, la.transpose(w))
    common = sorted(set(fan.max_cones[k]) & set(fan.max_cones[l]))
    cv = tuple(la.vec(fan.rays[i]) for i in common)
    for y in _extreme_rays(g, d):
        x = la.matvec(la.transpose(w), y)
        if not cv:
            return False
        lam = la.solve(la.transpose(cv), x)
        if lam is None or any(c < 0 for c in lam):
            return False
    return True


def validate(fan: Fan) -> FanDiagnostics:
    d = FanDiagnostics()
    for i, r in enumerate(fan.rays):
        g = 0
        for x in r:
            g = gcd(g, x)
        if g != 1:
            d.primitive = False
            d.problems.append(f"ray {i} {list(r)} is not primitive (gcd {g})")
    if len(set(fan.rays)) != len(fan.rays):
        d.primitive = False
        d.problems.append("duplicate rays")
    for k, c in enumerate(fan.max_cones):
        if la.rank(fan.ray_vectors(k)) != len(c):
            d.simplicial = False
            d.problems.append(f"unsupported: cone {k} {list(c)} is not simplicial")
    if not d.simplicial:
        return d
    for k, l in itertools.combinations(range(len(fan.max_cones)), 2):
        if not _proper_intersection(fan, k, l):
            d.proper_intersections = False
            d.problems.append(
                f"cones {k} {list(fan.max_cones[k])} and {l} {list(fan.max_cones[l])} "
                "do not meet in a common face"
            )
    if not d.valid:
        return d
    d.complete = _completeness(fan, d.problems)
    return d


def _completeness(fan: Fan, problems: list) -> bool:
    n = fan.n
    if not fan.max_cones:
        problems.append("incomplete: no cones")
        return False
    for k, c in enumerate(fan.max_cones):
        if len(c) != n:
            problems.append(f"incomplete: cone {k} is not full-dimensional")
            return False
    facets: dict = {}
    for k, c in enumerate(fan.max_cones):
        for f in itertools.combinations(c, n - 1):
            facets.setdefault(f, []).append(k)
    ok = True
    for f, owners in facets.items():
        if len(owners) != 2:
            problems.append(f"incomplete: facet {list(f)} lies in {len(owners)} maximal cone(s)")
            ok = False
    if not ok:
        return False
    adj = {k: set() for k in range(len(fan.max_cones))}
    for owners in facets.values():
        a, b = owners
        adj[a].add(b)
        adj[b].add(a)
    seen = {0}
    stack = [0]
    while stack:
        k = stack.pop()
        for j in adj[k] - seen:
            seen.add(j)
            stack.append(j)
    if len(seen) != len(fan.max_cones):
        problems.append("incomplete: wall-adjacency graph is disconnected")
        return False
    return True


def compute_walls(fan: Fan) -> tuple:
    fan.require_complete()
    n = fan.n
    owners: dict = {}
    for k, c in enumerate(fan.max_cones):
        for f in itertools.combinations(c, n - 1):
            owners.setdefault(f, []).append(k)
    walls = []
    for tau in sorted(owners):
        ks = owners[tau]
        if len(ks) != 2:
            raise IncompleteFanError(f"facet {list(tau)} lies in {len(ks)} maximal cones")
        s, sp = sorted(ks)
        tv = tuple(la.vec(fan.rays[i]) for i in tau)
        if n == 1:
            k = ((Fraction(1),),)
        else:
            k = la.kernel(tv, n)
        w = la.primitive_integer(k[0])
        off = next(i for i in fan.max_cones[s] if i not in tau)
        if la.dot(la.vec(fan.rays[off]), la.vec(w)) < 0:
            w = tuple(-x for x in w)
        walls.append(Wall(tuple(tau), s, sp, w))
    return tuple(walls)


# standard fans ---------------------------------------------------------------


def projective_space(n: int) -> Fan:
    """Fan of P^n: rays e_1..e_n and -(e_1+...+e_n); cone i omits ray i."""
    if n < 1:
        raise ValueError("n must be positive")
    rays = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    rays.append(tuple(-1 for _ in range(n)))
    cones = [tuple(j for j in range(n + 1) if j != i) for i in range(n + 1)]
    return Fan(n, rays, cones)


def product_p1(n: int = 2) -> Fan:
    """Fan of (P^1)^n with rays +e_i (index 2i) and -e_i (index 2i+1)."""
    rays = []
    for i in range(n):
        rays.append(tuple(1 if j == i else 0 for j in range(n)))
        rays.append(tuple(-1 if j == i else 0 for j in range(n)))
    cones = [tuple(2 * i + s[i] for i in range(n)) for s in itertools.product((0, 1), repeat=n)]
    return Fan(n, rays, cones)


def hirzebruch(a: int) -> Fan:
    """Fan of the Hirzebruch surface F_a."""
    rays = [(1, 0), (0, 1), (-1, a), (0, -1)]
    cones = [(0, 1), (1, 2), (2, 3), (3, 0)]
    return Fan(2, rays, cones)
