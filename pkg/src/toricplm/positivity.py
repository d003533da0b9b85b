"""Splitting types on invariant curves and nef / ample / globally generated tests."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg as la
from .fan import Fan, Wall
from .plmap import MalformedPLMapError, PLMap


@dataclass(frozen=True)
class WallSplitting:
    wall: int
    tau: tuple
    degrees: tuple

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(sorted(self.degrees, reverse=True)))


@dataclass(frozen=True)
class _Block:
    """Lines of one cone whose weights agree on span(tau), keyed by tau-pairings."""

    key: tuple
    sigma_lines: tuple
    sigma_prime_lines: tuple


def _tau_key(fan: Fan, tau: tuple, u) -> tuple:
    return tuple(la.dot(la.vec(fan.rays[i]), u) for i in tau)


def _transverse(u, base, w) -> Fraction:
    """Coefficient ``s`` with ``u - base = s * w`` (caller guarantees it exists)."""
    d = la.sub(u, base)
    k = next(i for i, x in enumerate(w) if x != 0)
    s = d[k] / w[k]
    if la.sub(d, la.scale(s, w)) != la.zero_vector(len(w)):
        raise MalformedPLMapError("weights in one block differ off the wall normal")
    return s


def _blocks(phi: PLMap, wall: Wall) -> list:
    fan = phi.fan
    p, q = phi.pieces[wall.sigma], phi.pieces[wall.sigma_prime]
    left: dict = {}
    right: dict = {}
    for i, u in enumerate(p.weights):
        left.setdefault(_tau_key(fan, wall.tau_rays, u), []).append(i)
    for j, u in enumerate(q.weights):
        right.setdefault(_tau_key(fan, wall.tau_rays, u), []).append(j)
    if set(left) != set(right) or any(len(left[k]) != len(right[k]) for k in left):
        raise MalformedPLMapError(
            f"wall {wall.tau_rays}: tau-weights of cones {wall.sigma} and {wall.sigma_prime} differ"
        )
    return [_Block(k, tuple(left[k]), tuple(right[k])) for k in sorted(left)]


def _block_levels(phi: PLMap, wall: Wall, block: _Block, base=None):
    """Transverse levels ``s_i`` (sigma side) and ``-s'_j`` (sigma' side)."""
    p, q = phi.pieces[wall.sigma], phi.pieces[wall.sigma_prime]
    w = la.vec(wall.w)
    if base is None:
        base = p.weights[block.sigma_lines[0]]
    f = [_transverse(p.weights[i], base, w) for i in block.sigma_lines]
    g = [-_transverse(q.weights[j], base, w) for j in block.sigma_prime_lines]
    return f, g


def _deeper_space(phi: PLMap, wall: Wall, key: tuple, side: int) -> la.Subspace:
    """Span of lines whose tau-key dominates ``key`` and differs from it."""
    fan = phi.fan
    piece = phi.pieces[wall.sigma if side == 0 else wall.sigma_prime]
    vs = []
    for v, u in zip(piece.frame.vectors, piece.weights):
        k = _tau_key(fan, wall.tau_rays, u)
        if k != key and all(a >= b for a, b in zip(k, key)):
            vs.append(v)
    return la.span(vs, phi.rank)


def _block_filtrations(phi: PLMap, wall: Wall, block: _Block, base=None):
    """Filtrations F (sigma side) and G (sigma' side) lifted to E.

    Subspaces are taken modulo the deeper part D of the tau-graded piece, so
    both sides are returned as subspaces of E containing D.
    """
    p, q = phi.pieces[wall.sigma], phi.pieces[wall.sigma_prime]
    deep = _deeper_space(phi, wall, block.key, 0)
    if deep != _deeper_space(phi, wall, block.key, 1):
        raise MalformedPLMapError(f"wall {wall.tau_rays}: frames disagree on the tau-filtration")
    f, g = _block_levels(phi, wall, block, base)
    lines_f = [p.frame.vectors[i] for i in block.sigma_lines]
    lines_g = [q.frame.vectors[j] for j in block.sigma_prime_lines]
    top_f = la.subspace_sum(deep, la.span(lines_f, phi.rank))
    top_g = la.subspace_sum(deep, la.span(lines_g, phi.rank))
    if top_f != top_g:
        raise MalformedPLMapError(f"wall {wall.tau_rays}: graded pieces of the two cones differ")

    def filt(levels, lines):
        out = {}
        for c in sorted(set(levels), reverse=True):
            out[c] = la.subspace_sum(deep, la.span([v for v, s in zip(lines, levels) if s >= c], phi.rank))
        return out

    return deep, filt(f, lines_f), filt(g, lines_g)


def _level_space(filt: dict, a, floor: la.Subspace) -> la.Subspace:
    above = [c for c in filt if c >= a]
    return filt[min(above)] if above else floor


def _pair_multiplicities(deep, ff: dict, gg: dict) -> dict:
    """``m(f, g)`` by inclusion-exclusion on ``dim(F_f cap G_g)`` in the quotient."""

    def d(a, b, raise_a, raise_b):
        fa = _next_above(ff, a, deep) if raise_a else ff[a]
        gb = _next_above(gg, b, deep) if raise_b else gg[b]
        return la.intersect(fa, gb).dim - deep.dim

    out = {}
    for a in ff:
        for b in gg:
            m = d(a, b, 0, 0) - d(a, b, 1, 0) - d(a, b, 0, 1) + d(a, b, 1, 1)
            if m < 0:
                raise MalformedPLMapError("negative splitting multiplicity")
            if m:
                out[(a, b)] = m
    return out


def _next_above(filt: dict, a, floor):
    above = [c for c in filt if c > a]
    return filt[min(above)] if above else floor


def wall_splitting(phi: PLMap, wall: int | Wall, base_choice: int = 0) -> WallSplitting:
    """Degrees ``a_i`` with the restriction to the wall's curve equal to sum O(a_i).

    ``base_choice`` picks which sigma-side line of each block anchors the
    transverse coordinate; the result does not depend on it.
    """
    fan = phi.fan
    walls = fan.walls
    idx = wall if isinstance(wall, int) else walls.index(wall)
    wl = walls[idx]
    degrees = []
    total_s = Fraction(0)
    for block in _blocks(phi, wl):
        base_line = block.sigma_lines[base_choice % len(block.sigma_lines)]
        base = phi.pieces[wl.sigma].weights[base_line]
        deep, ff, gg = _block_filtrations(phi, wl, block, base)
        for (a, b), m in _pair_multiplicities(deep, ff, gg).items():
            degrees.extend([a + b] * m)
        f, g = _block_levels(phi, wl, block, base)
        total_s += sum(f) + sum(g)
    if len(degrees) != phi.rank:
        raise MalformedPLMapError(f"wall {wl.tau_rays}: splitting has {len(degrees)} summands")
    assert sum(degrees) == total_s
    return WallSplitting(idx, wl.tau_rays, tuple(degrees))


def wall_splittings(phi: PLMap) -> list:
    phi.fan.require_complete()
    return [wall_splitting(phi, i) for i in range(len(phi.fan.walls))]


@dataclass
class Verdict:
    holds: bool
    witness: dict | None = None

    def __bool__(self):
        return self.holds


def _sign_verdict(phi: PLMap, strict: bool) -> Verdict:
    for s in wall_splittings(phi):
        for a in s.degrees:
            if a < 0 or (strict and a == 0):
                return Verdict(False, {"wall": s.wall, "tau": list(s.tau), "degree": a})
    return Verdict(True)


def is_nef(phi: PLMap) -> Verdict:
    return _sign_verdict(phi, strict=False)


def is_ample(phi: PLMap) -> Verdict:
    return _sign_verdict(phi, strict=True)


def is_globally_generated(phi: PLMap) -> Verdict:
    """Each weight ``u_{sigma,i}`` lies in the polytope of its frame vector.

    That is ``<v_rho, u_{sigma,i}> <= Phi(v_rho)(e_i)`` for every ray rho.
    """
    fan = phi.fan
    fan.require_complete()
    ray_vals = [phi.evaluate(fan.rays[rho]) for rho in range(len(fan.rays))]
    for k, piece in enumerate(phi.pieces):
        for i, (e, u) in enumerate(zip(piece.frame.vectors, piece.weights)):
            for rho, v in enumerate(fan.rays):
                lhs = la.dot(la.vec(v), u)
                rhs = ray_vals[rho].evaluate(e)
                if lhs > rhs:
                    return Verdict(False, {"cone": k, "line": i, "ray": rho,
                                           "pairing": lhs, "value": rhs})
    return Verdict(True)


@dataclass
class PositivityReport:
    nef: Verdict
    ample: Verdict
    globally_generated: Verdict
    splittings: list = field(default_factory=list)


def positivity(phi: PLMap) -> PositivityReport:
    splits = wall_splittings(phi)
    return PositivityReport(is_nef(phi), is_ample(phi), is_globally_generated(phi), splits)


# oracle -------------------------------------------------------------------------


def brute_force_splitting(phi: PLMap, wall: int, *, tries: int = 6, seed: int = 0) -> tuple:
    """Splitting type found by enumerating line matchings (small rank only).

    For each block, every bijection between sigma-lines and sigma'-lines gives
    candidate level pairs; a matching is kept when randomly chosen vectors in
    the corresponding intersections ``F_f cap G_g`` form a basis adapted to
    both block filtrations.  Returns the sorted degree multiset, or raises if
    no matching works.
    """
    rng = random.Random(seed)
    wl = phi.fan.walls[wall]
    degrees = []
    for block in _blocks(phi, wl):
        base = phi.pieces[wl.sigma].weights[block.sigma_lines[0]]
        deep, ff, gg = _block_filtrations(phi, wl, block, base)
        f, g = _block_levels(phi, wl, block, base)
        found = None
        for perm in itertools.permutations(range(len(g))):
            pairs = [(f[i], g[perm[i]]) for i in range(len(f))]
            if _realizable(pairs, deep, ff, gg, rng, tries):
                found = pairs
                break
        if found is None:
            raise AssertionError("no matching admits a common adapted basis")
        degrees.extend(a + b for a, b in found)
    return tuple(sorted(degrees, reverse=True))


def _realizable(pairs, deep, ff, gg, rng, tries) -> bool:
    r = deep.ambient_dim
    for _ in range(tries):
        vecs = []
        for a, b in pairs:
            space = la.intersect(ff[a], gg[b])
            v = la.zero_vector(r)
            for row in space.basis:
                v = la.add(v, la.scale(rng.randint(-4, 4), row))
            vecs.append(v)
        ok = True
        for lvl, space in ff.items():
            s = la.subspace_sum(deep, la.span([v for v, (a, _) in zip(vecs, pairs) if a >= lvl], r))
            ok &= s == space
        for lvl, space in gg.items():
            s = la.subspace_sum(deep, la.span([v for v, (_, b) in zip(vecs, pairs) if b >= lvl], r))
            ok &= s == space
        full = la.subspace_sum(deep, la.span(vecs, r))
        ok &= full.dim - deep.dim == len(pairs)
        if ok:
            return True
    return False


def search_nef_not_gg(fan: Fan, *, rank: int = 2, trials: int = 200, seed: int = 0,
                      low: int = -2, high: int = 2) -> list:
    """Random search for bundles whose nef and globally-generated verdicts differ."""
    from .plmap import compatibility_solve, random_ray_data, IncompatibleError

    rng = random.Random(seed)
    hits = []
    for t in range(trials):
        data = random_ray_data(fan, rank, rng, low=low, high=high)
        try:
            phi = compatibility_solve(fan, data, seed=seed)
        except IncompatibleError:
            continue
        nef, gg = bool(is_nef(phi)), bool(is_globally_generated(phi))
        if nef != gg:
            hits.append({"trial": t, "nef": nef, "globally_generated": gg, "data": data, "plmap": phi})
    return hits
