"""Piecewise linear maps from a fan to the building of GL(E).

A :class:`PLMap` stores, for every maximal cone, a frame of E and one weight
covector per frame line.  At a point ``x`` of the cone the map takes the
prevaluation adapted to the frame with value ``<x, u_i>`` on line ``i``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg as la
from .building import Frame, Prevaluation, adapted_prevaluation
from . import building
from .fan import Fan


class MalformedPLMapError(ValueError):
    """Per-cone data that does not glue to a well-defined map."""


class IncompatibleError(Exception):
    """Ray filtrations admit no compatible frame on some cone.

    ``kind`` is ``"dimension"`` when a multiplicity computed by
    inclusion-exclusion is negative or inconsistent (a certificate of
    incompatibility) and ``"search"`` when the multiplicities were consistent
    but no adapted frame was found after all retries.
    """

    def __init__(self, cone: int, kind: str, witness: dict):
        self.cone = cone
        self.kind = kind
        self.witness = witness
        super().__init__(f"incompatible ({kind}) on cone {cone}: {witness}")


@dataclass(frozen=True)
class ConePiece:
    cone: int
    frame: Frame
    weights: tuple

    def __post_init__(self):
        ws = tuple(la.vec(u) for u in self.weights)
        object.__setattr__(self, "weights", ws)
        if len(ws) != self.frame.rank:
            raise MalformedPLMapError(
                f"cone {self.cone}: {len(ws)} weights for a frame of rank {self.frame.rank}"
            )

    def values_at(self, x: Sequence) -> tuple:
        return tuple(la.dot(u, x) for u in self.weights)

    def prevaluation_at(self, x: Sequence) -> Prevaluation:
        return adapted_prevaluation(self.frame, self.values_at(la.vec(x)))


@dataclass(frozen=True)
class RayFiltrationData:
    """Klyachko data: for each ray index an integer-labeled decreasing filtration.

    Each filtration is held as a :class:`Prevaluation` whose labels are the jump
    levels; ``E^rho_i`` is ``filtrations[rho].threshold(i)``.
    """

    rank: int
    filtrations: Mapping

    def __post_init__(self):
        filts = {int(k): v for k, v in dict(self.filtrations).items()}
        for k, p in filts.items():
            if p.ambient_dim != self.rank:
                raise ValueError(f"ray {k}: filtration lives in dimension {p.ambient_dim}, not {self.rank}")
        object.__setattr__(self, "filtrations", filts)

    def __getitem__(self, ray: int) -> Prevaluation:
        return self.filtrations[ray]

    def subspace(self, ray: int, i) -> la.Subspace:
        return self.filtrations[ray].threshold(i)

    def __eq__(self, other):
        if not isinstance(other, RayFiltrationData):
            return NotImplemented
        return self.rank == other.rank and self.filtrations == other.filtrations

    def __hash__(self):
        return hash((self.rank, tuple(sorted(self.filtrations.items(), key=lambda kv: kv[0]))))


@dataclass(frozen=True)
class IntegralityReport:
    integral: bool
    verified: bool
    unverified_cones: tuple = ()
    failing_cone: int | None = None

    def __bool__(self):
        return self.integral


@dataclass(frozen=True)
class PLMap:
    fan: Fan
    rank: int
    pieces: tuple

    def __post_init__(self):
        pieces = tuple(self.pieces)
        object.__setattr__(self, "pieces", pieces)
        if len(pieces) != len(self.fan.max_cones):
            raise MalformedPLMapError("need exactly one piece per maximal cone")
        for k, p in enumerate(pieces):
            if p.cone != k:
                raise MalformedPLMapError(f"piece {k} is labeled as cone {p.cone}")
            if p.frame.rank != self.rank:
                raise MalformedPLMapError(f"cone {k}: frame rank {p.frame.rank} != {self.rank}")
            for u in p.weights:
                if len(u) != self.fan.n:
                    raise MalformedPLMapError(f"cone {k}: weight {u} is not in Q^{self.fan.n}")

    def evaluate(self, x: Sequence) -> Prevaluation:
        x = la.vec(x)
        k = self.fan.find_cone(x)
        if k is None:
            raise ValueError(f"point {tuple(str(c) for c in x)} is outside the support of the fan")
        return self.pieces[k].prevaluation_at(x)

    __call__ = evaluate

    def evaluate_via(self, cone: int, x: Sequence) -> Prevaluation:
        return self.pieces[cone].prevaluation_at(x)

    @property
    def integral(self) -> bool:
        return bool(is_integral(self))


def evaluate(phi: PLMap, x: Sequence) -> Prevaluation:
    return phi.evaluate(x)


def ray_filtrations(phi: PLMap) -> RayFiltrationData:
    """Klyachko filtrations ``E^rho_i = span{L_j : <v_rho, u_j> >= i}``."""
    fan = phi.fan
    out = {}
    for rho in range(len(fan.rays)):
        incident = fan.cones_containing_ray(rho)
        if not incident:
            continue
        v = la.vec(fan.rays[rho])
        preval = None
        for k in incident:
            p = phi.evaluate_via(k, v)
            if preval is None:
                preval = p
            elif p != preval:
                raise MalformedPLMapError(
                    f"ray {rho}: cones {incident[0]} and {k} induce different filtrations"
                )
        if not preval.is_integral():
            raise MalformedPLMapError(f"ray {rho}: non-integral jump levels {preval.labels}")
        out[rho] = preval
    return RayFiltrationData(phi.rank, out)


# compatibility solver ---------------------------------------------------------


def _strictly_above(p: Prevaluation, a) -> la.Subspace:
    above = [c for c in p.labels if c > a]
    return p.threshold(min(above)) if above else la.zero_space(p.ambient_dim)


class _ConeSolver:
    def __init__(self, fan: Fan, cone: int, data: RayFiltrationData):
        self.fan = fan
        self.cone = cone
        self.rays = fan.max_cones[cone]
        self.r = data.rank
        missing = [rho for rho in self.rays if rho not in data.filtrations]
        if missing:
            raise ValueError(f"no filtration given for rays {missing}")
        self.filts = [data[rho] for rho in self.rays]
        self._cache: dict = {}

    def level_space(self, j: int, a, raised: bool) -> la.Subspace:
        p = self.filts[j]
        return _strictly_above(p, a) if raised else p.threshold(a)

    def meet(self, a: tuple, eps: tuple) -> la.Subspace:
        key = (a, eps)
        if key not in self._cache:
            spaces = [self.level_space(j, a[j], bool(eps[j])) for j in range(len(a))]
            self._cache[key] = la.intersect_all(spaces, self.r)
        return self._cache[key]

    def multiplicity(self, a: tuple) -> int:
        m = len(a)
        total = 0
        for eps in itertools.product((0, 1), repeat=m):
            sign = -1 if sum(eps) % 2 else 1
            total += sign * self.meet(a, eps).dim
        return total

    def tuples(self) -> list:
        return list(itertools.product(*(f.labels for f in self.filts)))

    def multiplicities(self) -> dict:
        tuples = self.tuples()
        mult = {a: self.multiplicity(a) for a in tuples}
        zero = (0,) * len(self.rays)
        for a, m in mult.items():
            if m < 0:
                raise IncompatibleError(
                    self.cone,
                    "dimension",
                    {"tuple": [str(x) for x in a], "multiplicity": m,
                     "intersection_dim": self.meet(a, zero).dim},
                )
        if sum(mult.values()) != self.r:
            raise IncompatibleError(
                self.cone, "dimension", {"multiplicity_sum": sum(mult.values()), "rank": self.r}
            )
        for a in tuples:
            expected = sum(m for b, m in mult.items() if all(x >= y for x, y in zip(b, a)))
            got = self.meet(a, zero).dim
            if got != expected:
                raise IncompatibleError(
                    self.cone,
                    "dimension",
                    {"tuple": [str(x) for x in a], "intersection_dim": got, "expected": expected},
                )
        return mult

    def deeper(self, a: tuple) -> la.Subspace:
        m = len(a)
        parts = []
        for j in range(m):
            eps = tuple(1 if i == j else 0 for i in range(m))
            parts.append(self.meet(a, eps))
        return la.sum_all(parts, self.r)

    def build_frame(self, mult: dict, rng: random.Random | None):
        zero = (0,) * len(self.rays)
        order = sorted((a for a, m in mult.items() if m > 0), key=lambda a: (sum(a), a), reverse=True)
        lines, tags = [], []
        for a in order:
            target = self.meet(a, zero)
            blocked = la.intersect(
                target,
                la.subspace_sum(self.deeper(a), la.span(lines, self.r)),
            )
            comp = list(la.complement_basis(blocked, target))
            if len(comp) < mult[a]:
                return None
            if rng is not None:
                comp = _randomize(comp, blocked.basis, rng)
            for v in comp[: mult[a]]:
                lines.append(v)
                tags.append(a)
        if len(lines) != self.r or la.rank(lines) != self.r:
            return None
        return lines, tags

    def weights_for(self, a: tuple) -> la.Vector:
        vs = self.fan.ray_vectors(self.cone)
        gram = la.matmul(vs, la.transpose(vs))
        coeffs = la.matvec(la.inverse(gram), a)
        return la.matvec(la.transpose(vs), coeffs)

    def verify(self, frame: Frame, tags: list) -> bool:
        for j, p in enumerate(self.filts):
            if adapted_prevaluation(frame, [a[j] for a in tags]) != p:
                return False
        return True

    def solve(self, retries: int, rng: random.Random) -> ConePiece:
        mult = self.multiplicities()
        for attempt in range(retries + 1):
            built = self.build_frame(mult, None if attempt == 0 else rng)
            if built is None:
                continue
            lines, tags = built
            frame = Frame(lines)
            if self.verify(frame, tags):
                weights = tuple(self.weights_for(a) for a in tags)
                return ConePiece(self.cone, frame, weights)
        raise IncompatibleError(
            self.cone,
            "search",
            {"attempts": retries + 1,
             "multiplicities": {",".join(str(x) for x in a): m for a, m in mult.items() if m}},
        )


def _randomize(comp: list, blocked: Sequence, rng: random.Random) -> list:
    k = len(comp)
    while True:
        mix = [[Fraction(rng.randint(-3, 3)) for _ in range(k)] for _ in range(k)]
        if la.det(mix) != 0:
            break
    out = []
    for row in mix:
        v = la.zero_vector(len(comp[0]))
        for c, w in zip(row, comp):
            v = la.add(v, la.scale(c, w))
        for b in blocked:
            v = la.add(v, la.scale(rng.randint(-2, 2), b))
        out.append(v)
    return out


def compatibility_solve(fan: Fan, data: RayFiltrationData, *, retries: int = 8, seed: int = 0) -> PLMap:
    """Find a frame and weights on every maximal cone reproducing the ray filtrations.

    Raises :class:`IncompatibleError` naming the first cone that fails.
    """
    fan.require_valid()
    rng = random.Random(seed)
    pieces = []
    for k in range(len(fan.max_cones)):
        pieces.append(_ConeSolver(fan, k, data).solve(retries, rng))
    return PLMap(fan, data.rank, tuple(pieces))


# checks -----------------------------------------------------------------------


def random_face_point(fan: Fan, rays: Sequence[int], rng: random.Random) -> la.Vector:
    x = la.zero_vector(fan.n)
    for i in rays:
        c = Fraction(rng.randint(1, 9), rng.randint(1, 5))
        x = la.add(x, la.scale(c, la.vec(fan.rays[i])))
    return x


def check_well_defined(phi: PLMap, *, samples: int = 20, seed: int = 0) -> list:
    """Compare evaluations through both cones at random points of shared faces.

    Returns a list of ``(cone, cone', point)`` disagreements (empty when none).
    """
    rng = random.Random(seed)
    bad = []
    for k, l, common in phi.fan.shared_faces():
        for _ in range(samples):
            x = random_face_point(phi.fan, common, rng)
            if phi.evaluate_via(k, x) != phi.evaluate_via(l, x):
                bad.append((k, l, x))
                break
    return bad


def is_integral(phi: PLMap) -> IntegralityReport:
    """Integrality of the map on lattice points of each maximal cone.

    Full-dimensional cones and smooth cones are decided exactly; for a
    lower-dimensional non-smooth cone only the ray generators are checked and
    the cone is reported as unverified.
    """
    fan = phi.fan
    unverified = []
    for k, piece in enumerate(phi.pieces):
        vs = fan.ray_vectors(k)
        if len(vs) == fan.n:
            ok = all(c.denominator == 1 for u in piece.weights for c in u)
        else:
            ok = all(la.dot(v, u).denominator == 1 for v in vs for u in piece.weights)
            if ok and not fan.is_smooth_cone(k):
                unverified.append(k)
        if not ok:
            return IntegralityReport(False, True, tuple(unverified), k)
    return IntegralityReport(True, not unverified, tuple(unverified))


def tensor(phi: PLMap, psi: PLMap) -> PLMap:
    """Tensor product: Kronecker frames, weights ``u_i + u'_j`` at index ``i*r' + j``."""
    if phi.fan != psi.fan:
        raise ValueError("tensor product needs both maps on the same fan")
    pieces = []
    for p, q in zip(phi.pieces, psi.pieces):
        frame = Frame(tuple(la.kron(a, b) for a in p.frame.vectors for b in q.frame.vectors))
        weights = tuple(la.add(u, w) for u in p.weights for w in q.weights)
        pieces.append(ConePiece(p.cone, frame, weights))
    return PLMap(phi.fan, phi.rank * psi.rank, tuple(pieces))


def tensor_filtrations(d1: RayFiltrationData, d2: RayFiltrationData) -> RayFiltrationData:
    """Ray-wise ``(E (x) E')^rho_a = sum_{i+j=a} E^rho_i (x) E'^rho_j``."""
    rays = sorted(set(d1.filtrations) & set(d2.filtrations))
    return RayFiltrationData(
        d1.rank * d2.rank, {rho: building.tensor(d1[rho], d2[rho]) for rho in rays}
    )


# constructors -------------------------------------------------------------------


def _solve_weight(fan: Fan, cone: int, values: Sequence) -> la.Vector:
    vs = fan.ray_vectors(cone)
    gram = la.matmul(vs, la.transpose(vs))
    return la.matvec(la.transpose(vs), la.matvec(la.inverse(gram), la.vec(values)))


def line_bundle(fan: Fan, a: Sequence) -> PLMap:
    """Rank-one map with value ``a[rho]`` at each ray generator."""
    a = la.vec(a)
    if len(a) != len(fan.rays):
        raise ValueError("one coefficient per ray is required")
    pieces = []
    for k, c in enumerate(fan.max_cones):
        u = _solve_weight(fan, k, [a[i] for i in c])
        pieces.append(ConePiece(k, Frame(((Fraction(1),),)), (u,)))
    return PLMap(fan, 1, tuple(pieces))


def trivial(fan: Fan, r: int) -> PLMap:
    frame = Frame.standard(r)
    zero = la.zero_vector(fan.n)
    return PLMap(fan, r, tuple(ConePiece(k, frame, (zero,) * r) for k in range(len(fan.max_cones))))


def direct_sum(phi: PLMap, psi: PLMap) -> PLMap:
    if phi.fan != psi.fan:
        raise ValueError("direct sum needs both maps on the same fan")
    r, s = phi.rank, psi.rank
    pieces = []
    for p, q in zip(phi.pieces, psi.pieces):
        vs = [tuple(v) + la.zero_vector(s) for v in p.frame.vectors]
        vs += [la.zero_vector(r) + tuple(v) for v in q.frame.vectors]
        pieces.append(ConePiece(p.cone, Frame(vs), p.weights + q.weights))
    return PLMap(phi.fan, r + s, tuple(pieces))


def filtration_from_frame(frame_vectors: Sequence, levels: Sequence) -> Prevaluation:
    """Integer filtration ``E_i = span{f_j : levels[j] >= i}``."""
    return adapted_prevaluation(Frame(frame_vectors), levels)


def random_ray_data(fan: Fan, r: int, rng: random.Random, *, low: int = -5, high: int = 5,
                    entry_bound: int = 3) -> RayFiltrationData:
    """Random Klyachko data: per ray a random frame of Q^r with integer levels."""
    out = {}
    for rho in range(len(fan.rays)):
        while True:
            vs = [tuple(Fraction(rng.randint(-entry_bound, entry_bound)) for _ in range(r)) for _ in range(r)]
            if la.rank(vs) == r:
                break
        levels = [rng.randint(low, high) for _ in range(r)]
        out[rho] = filtration_from_frame(vs, levels)
    return RayFiltrationData(r, out)
