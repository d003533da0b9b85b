"""Elementary symmetric functions on the building and equivariant Chern classes."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg as la
from .building import Prevaluation
from .fan import Fan
from .plmap import MalformedPLMapError, PLMap


class Polynomial:
    """Polynomial over Q in ``nvars`` variables, stored as ``{exponents: coeff}``."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping | None = None):
        self.nvars = nvars
        clean = {}
        for e, c in (terms or {}).items():
            c = la.to_fraction(c)
            e = tuple(int(x) for x in e)
            if len(e) != nvars:
                raise ValueError("exponent length does not match number of variables")
            if c != 0:
                clean[e] = clean.get(e, Fraction(0)) + c
        self.terms = {e: c for e, c in clean.items() if c != 0}

    @classmethod
    def constant(cls, nvars: int, c) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def linear(cls, covector: Sequence) -> "Polynomial":
        n = len(covector)
        return cls(n, {tuple(1 if j == i else 0 for j in range(n)): c for i, c in enumerate(la.vec(covector))})

    def __add__(self, other: "Polynomial") -> "Polynomial":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return Polynomial(self.nvars, out)

    def __neg__(self):
        return Polynomial(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = la.to_fraction(other)
            return Polynomial(self.nvars, {e: c * v for e, v in self.terms.items()})
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return Polynomial(self.nvars, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self) -> list:
        """Terms in graded-lex order (highest total degree first)."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def __call__(self, x: Sequence) -> Fraction:
        x = la.vec(x)
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for xi, k in zip(x, e):
                if k:
                    term *= xi ** k
            total += term
        return total

    def substitute(self, columns: Sequence[Sequence]) -> "Polynomial":
        """Compose with the linear map ``t -> sum_k t_k * columns[k]``."""
        m = len(columns)
        images = []
        for i in range(self.nvars):
            images.append(Polynomial(m, {
                tuple(1 if j == k else 0 for j in range(m)): la.to_fraction(columns[k][i])
                for k in range(m)
            }))
        out = Polynomial(m)
        for e, c in self.terms.items():
            term = Polynomial.constant(m, c)
            for img, k in zip(images, e):
                for _ in range(k):
                    term = term * img
            out = out + term
        return out

    def linear_part(self) -> la.Vector:
        if self.degree > 1 or (0,) * self.nvars in self.terms:
            raise ValueError("not a homogeneous linear polynomial")
        return tuple(self.terms.get(tuple(1 if j == i else 0 for j in range(self.nvars)), Fraction(0))
                     for i in range(self.nvars))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(f"x{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def elementary_symmetric(values: Sequence, i: int):
    """``e_i`` of the values; works for numbers and :class:`Polynomial` alike."""
    values = list(values)
    if not 0 <= i <= len(values):
        raise ValueError(f"index {i} out of range for {len(values)} values")
    if values and isinstance(values[0], Polynomial):
        n = values[0].nvars
        one, zero = Polynomial.constant(n, 1), Polynomial(n)
    else:
        one, zero = Fraction(1), Fraction(0)
    e = [one] + [zero] * i
    for x in values:
        for k in range(i, 0, -1):
            e[k] = e[k] + e[k - 1] * x
    return e[i]


def elementary_symmetric_value(v: Prevaluation, i: int) -> Fraction:
    r = v.ambient_dim
    if not 1 <= i <= r:
        raise ValueError(f"index {i} out of range 1..{r}")
    return elementary_symmetric(v.value_multiset(), i)


@dataclass(frozen=True)
class PiecewisePolynomial:
    fan: Fan
    polys: tuple

    def __post_init__(self):
        polys = tuple(self.polys)
        object.__setattr__(self, "polys", polys)
        if len(polys) != len(self.fan.max_cones):
            raise ValueError("need one polynomial per maximal cone")

    def evaluate(self, x: Sequence) -> Fraction:
        k = self.fan.find_cone(x)
        if k is None:
            raise ValueError("point outside the support of the fan")
        return self.polys[k](x)

    __call__ = evaluate

    def __add__(self, other):
        return PiecewisePolynomial(self.fan, tuple(a + b for a, b in zip(self.polys, other.polys)))

    def __sub__(self, other):
        return PiecewisePolynomial(self.fan, tuple(a - b for a, b in zip(self.polys, other.polys)))

    def __mul__(self, c):
        return PiecewisePolynomial(self.fan, tuple(p * c for p in self.polys))

    __rmul__ = __mul__

    def face_mismatches(self) -> list:
        """Pairs of cones whose polynomials disagree on the span of their common face."""
        bad = []
        for k, l, common in self.fan.shared_faces():
            cols = [la.vec(self.fan.rays[i]) for i in common]
            if self.polys[k].substitute(cols) != self.polys[l].substitute(cols):
                bad.append((k, l, common))
        return bad

    def is_compatible(self) -> bool:
        return not self.face_mismatches()


def chern_class(phi: PLMap, i: int) -> PiecewisePolynomial:
    """Per cone, ``e_i(<x, u_1>, ..., <x, u_r>)`` expanded exactly."""
    if not 1 <= i <= phi.rank:
        raise ValueError(f"index {i} out of range 1..{phi.rank}")
    polys = []
    for piece in phi.pieces:
        lin = [Polynomial.linear(u) for u in piece.weights]
        polys.append(elementary_symmetric(lin, i))
    out = PiecewisePolynomial(phi.fan, tuple(polys))
    bad = out.face_mismatches()
    if bad:
        raise MalformedPLMapError(f"chern class c_{i} is not continuous across faces {bad}")
    return out


def equivalent_mod_linear(f: PiecewisePolynomial, g: PiecewisePolynomial) -> bool:
    """True iff ``f - g`` is one global linear function."""
    if f.fan != g.fan:
        raise ValueError("different fans")
    for p in f.polys + g.polys:
        if p.degree > 1:
            raise ValueError("equivalence modulo linear functions needs degree <= 1")
    diffs = [a - b for a, b in zip(f.polys, g.polys)]
    return all(d == diffs[0] for d in diffs)
