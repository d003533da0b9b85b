"""Points of the building of GL(E), E = Q^r, as prevaluations (labeled flags)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg as la
from .linalg import Subspace

INFINITY = math.inf


@dataclass(frozen=True)
class Prevaluation:
    """Labeled flag ``F_1 < ... < F_k = E`` with labels ``c_1 > ... > c_k``.

    The prevaluation takes the value ``c_j`` on ``F_j \\ F_{j-1}``.
    """

    labels: tuple
    flag: tuple

    def __post_init__(self):
        labels = tuple(la.to_fraction(c) for c in self.labels)
        object.__setattr__(self, "labels", labels)
        flag = tuple(self.flag)
        object.__setattr__(self, "flag", flag)
        if not flag or len(flag) != len(labels):
            raise ValueError("need one label per flag subspace and at least one subspace")
        r = flag[0].ambient_dim
        if any(s.ambient_dim != r for s in flag):
            raise ValueError("flag subspaces live in different ambient spaces")
        if any(a <= b for a, b in zip(labels, labels[1:])):
            raise ValueError(f"labels must strictly decrease: {labels}")
        if flag[0].dim == 0:
            raise ValueError("first flag subspace must be nonzero")
        for a, b in zip(flag, flag[1:]):
            if not (b.dim > a.dim and la.contains(b, a)):
                raise ValueError("flag subspaces must be strictly nested")
        if flag[-1].dim != r:
            raise ValueError("top flag subspace must be all of E")

    @property
    def ambient_dim(self) -> int:
        return self.flag[0].ambient_dim

    @property
    def value_set(self) -> tuple:
        return self.labels

    def evaluate(self, e: Sequence):
        e = la.vec(e)
        if len(e) != self.ambient_dim:
            raise ValueError("dimension mismatch")
        if la.is_zero(e):
            return INFINITY
        for c, f in zip(self.labels, self.flag):
            if f.contains_vector(e):
                return c
        raise AssertionError("top subspace is E")

    __call__ = evaluate

    def threshold(self, a) -> Subspace:
        """The subspace ``{e : v(e) >= a}``."""
        a = la.to_fraction(a) if not isinstance(a, float) else a
        best = None
        for c, f in zip(self.labels, self.flag):
            if c >= a:
                best = f
        return best if best is not None else la.zero_space(self.ambient_dim)

    def multiplicities(self) -> tuple:
        """``(label, dim F_j - dim F_{j-1})`` pairs."""
        out = []
        prev = 0
        for c, f in zip(self.labels, self.flag):
            out.append((c, f.dim - prev))
            prev = f.dim
        return tuple(out)

    def value_multiset(self) -> tuple:
        return tuple(c for c, m in self.multiplicities() for _ in range(m))

    def to_filtration(self) -> tuple:
        return tuple(zip(self.labels, self.flag))

    def shift(self, c) -> "Prevaluation":
        c = la.to_fraction(c)
        return Prevaluation(tuple(x + c for x in self.labels), self.flag)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.labels)

    def __repr__(self):
        parts = ", ".join(f"{c}: dim {f.dim}" for c, f in zip(self.labels, self.flag))
        return f"Prevaluation({parts})"


def constant(r: int, c=0) -> Prevaluation:
    return Prevaluation((la.to_fraction(c),), (la.full_space(r),))


def from_filtration(jumps: Iterable[tuple]) -> Prevaluation:
    """Prevaluation from ``(level, subspace)`` jumps with decreasing levels."""
    jumps = list(jumps)
    if not jumps:
        raise ValueError("empty filtration")
    levels = [la.to_fraction(a) for a, _ in jumps]
    spaces = [s for _, s in jumps]
    return Prevaluation(tuple(levels), tuple(spaces))


def from_thresholds(values: Iterable, spaces: Iterable[Subspace]) -> Prevaluation:
    """Build a prevaluation from (possibly redundant) ``(a, F_{>=a})`` data.

    Entries whose subspace equals the next lower level's are dropped.
    """
    pairs = sorted(zip(values, spaces), key=lambda p: p[0], reverse=True)
    labels, flag = [], []
    for a, s in pairs:
        if s.dim == 0:
            continue
        if flag and flag[-1] == s:
            # same subspace at a lower threshold: the higher label wins
            continue
        labels.append(a)
        flag.append(s)
    return Prevaluation(tuple(labels), tuple(flag))


@dataclass(frozen=True)
class Frame:
    """r independent lines in Q^r, each stored with first nonzero coordinate 1."""

    vectors: tuple

    def __post_init__(self):
        vs = tuple(la.normalize_line(la.vec(v)) for v in self.vectors)
        object.__setattr__(self, "vectors", vs)
        if not vs:
            raise ValueError("empty frame")
        r = len(vs[0])
        if len(vs) != r or any(len(v) != r for v in vs):
            raise ValueError("a frame of Q^r needs exactly r vectors of length r")
        if la.rank(vs) != r:
            raise ValueError("frame vectors are linearly dependent")

    @property
    def rank(self) -> int:
        return len(self.vectors)

    def coordinates(self, e: Sequence) -> la.Vector:
        return la.coordinates(self.vectors, la.vec(e))

    def span_of(self, indices: Iterable[int]) -> Subspace:
        return la.span([self.vectors[i] for i in indices], self.rank)

    @staticmethod
    def standard(r: int) -> "Frame":
        return Frame(la.identity(r))


def adapted_prevaluation(frame: Frame, values: Sequence) -> Prevaluation:
    """The prevaluation in the apartment of ``frame`` taking ``values[i]`` on line i."""
    values = [la.to_fraction(x) for x in values]
    if len(values) != frame.rank:
        raise ValueError("one value per frame line is required")
    labels = sorted(set(values), reverse=True)
    flag = tuple(frame.span_of(i for i, x in enumerate(values) if x >= c) for c in labels)
    return Prevaluation(tuple(labels), flag)


def leq(v: Prevaluation, w: Prevaluation) -> bool:
    """Pointwise ``v(e) <= w(e)``, tested on thresholds of both value sets."""
    if v.ambient_dim != w.ambient_dim:
        raise ValueError("ambient mismatch")
    for a in set(v.labels) | set(w.labels):
        if not la.contains(w.threshold(a), v.threshold(a)):
            return False
    return True


def lt(v: Prevaluation, w: Prevaluation) -> bool:
    """Strict pointwise inequality ``v(e) < w(e)`` for all nonzero e."""
    if v.ambient_dim != w.ambient_dim:
        raise ValueError("ambient mismatch")
    # v < w iff F_{v >= a} is inside F_{w > a} for each label a of v
    for a in v.labels:
        above = [c for c in w.labels if c > a]
        target = w.threshold(min(above)) if above else la.zero_space(v.ambient_dim)
        if not la.contains(target, v.threshold(a)):
            return False
    return True


def is_adapted(frame: Frame, v: Prevaluation) -> bool:
    if frame.rank != v.ambient_dim:
        raise ValueError("ambient mismatch")
    for f in v.flag:
        inside = [i for i, e in enumerate(frame.vectors) if f.contains_vector(e)]
        if len(inside) != f.dim:
            return False
    return True


def tensor(v: Prevaluation, w: Prevaluation) -> Prevaluation:
    """Tensor product via ``(F (x) G)_a = sum_{i+j=a} F_i (x) G_j``.

    Coordinates of E (x) E' use the index ``i * dim E' + j``.
    """
    n = v.ambient_dim * w.ambient_dim
    sums = sorted({a + b for a in v.labels for b in w.labels}, reverse=True)
    spaces = []
    for s in sums:
        parts = [la.tensor_subspace(f, w.threshold(s - a)) for a, f in zip(v.labels, v.flag)]
        spaces.append(la.sum_all(parts, n))
    return from_thresholds(sums, spaces)


def maximin_lower_bound(v: Prevaluation, w: Prevaluation, terms: Sequence[tuple]):
    """``min_i v(x_i) + w(y_i)`` for one representation ``sum_i x_i (x) y_i``.

    Every representation gives a lower bound for the tensor prevaluation at the
    represented vector; the maximum over all representations is its value.
    """
    vals = []
    for x, y in terms:
        if la.is_zero(x) or la.is_zero(y):
            continue
        vals.append(v.evaluate(x) + w.evaluate(y))
    return min(vals) if vals else INFINITY
