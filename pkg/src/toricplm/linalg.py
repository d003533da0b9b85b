"""Exact linear algebra over the rationals.

Vectors are tuples of :class:`fractions.Fraction`; matrices are tuples of row
vectors.  :class:`Subspace` stores its basis in reduced row-echelon form, so two
subspaces are equal exactly when their stored bases are identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Vector = tuple  # tuple[Fraction, ...]
Matrix = tuple  # tuple[Vector, ...]


def to_fraction(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected: they would smuggle rounding into exact code.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rational scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def vec(values: Iterable) -> Vector:
    return tuple(to_fraction(v) for v in values)


def mat(rows: Iterable[Iterable]) -> Matrix:
    return tuple(vec(r) for r in rows)


def zero_vector(n: int) -> Vector:
    return (Fraction(0),) * n


def unit_vector(n: int, i: int) -> Vector:
    return tuple(Fraction(1 if j == i else 0) for j in range(n))


def dot(a: Sequence, b: Sequence) -> Fraction:
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} vs {len(b)}")
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def add(a: Sequence, b: Sequence) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Sequence, b: Sequence) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def scale(c, a: Sequence) -> Vector:
    c = to_fraction(c)
    return tuple(c * x for x in a)


def is_zero(a: Sequence) -> bool:
    return all(x == 0 for x in a)


def transpose(m: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(col) for col in zip(*m))


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def matvec(a: Sequence[Sequence], x: Sequence) -> Vector:
    return tuple(dot(row, x) for row in a)


def identity(n: int) -> Matrix:
    return tuple(unit_vector(n, i) for i in range(n))


def kron(a: Sequence, b: Sequence) -> Vector:
    """Kronecker product of two vectors, index ``(i, j) -> i * len(b) + j``."""
    return tuple(x * y for x in a for y in b)


def normalize_line(v: Sequence) -> Vector:
    """Scale ``v`` so its first nonzero coordinate is 1."""
    for x in v:
        if x != 0:
            return tuple(y / x for y in v)
    raise ValueError("the zero vector does not span a line")


def primitive_integer(v: Sequence) -> tuple:
    """Smallest integer vector on the ray through the nonzero rational ``v``."""
    fr = vec(v)
    if is_zero(fr):
        raise ValueError("zero vector has no primitive generator")
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints)


def rref(rows: Iterable[Sequence]) -> tuple[Matrix, tuple]:
    """Reduced row-echelon form of ``rows`` with zero rows dropped.

    Returns ``(basis, pivots)`` where ``pivots[k]`` is the pivot column of
    ``basis[k]``.
    """
    m = [list(vec(r)) for r in rows]
    if not m:
        return (), ()
    ncols = len(m[0])
    if any(len(r) != ncols for r in m):
        raise ValueError("rows have inconsistent lengths")
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        if piv != 1:
            m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return tuple(tuple(row) for row in m[:r]), tuple(pivots)


def rank(rows: Iterable[Sequence]) -> int:
    return len(rref(rows)[0])


def kernel(m: Sequence[Sequence], ncols: int | None = None) -> Matrix:
    """Basis of ``{x : m x = 0}``."""
    m = tuple(m)
    if ncols is None:
        if not m:
            raise ValueError("ncols is required for an empty matrix")
        ncols = len(m[0])
    basis, pivots = rref(m)
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(basis, pivots):
            x[p] = -row[f]
        out.append(tuple(x))
    return tuple(out)


def solve(a: Sequence[Sequence], b: Sequence) -> Vector | None:
    """One solution of ``a x = b`` (free variables set to 0), or None."""
    a = tuple(a)
    if not a:
        raise ValueError("empty system")
    ncols = len(a[0])
    aug = [tuple(row) + (to_fraction(bi),) for row, bi in zip(a, b)]
    basis, pivots = rref(aug)
    if pivots and pivots[-1] == ncols:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(basis, pivots):
        x[p] = row[ncols]
    return tuple(x)


def inverse(a: Sequence[Sequence]) -> Matrix:
    n = len(a)
    aug = [tuple(row) + unit_vector(n, i) for i, row in enumerate(vec_rows(a))]
    basis, pivots = rref(aug)
    if len(basis) < n or pivots[n - 1] != n - 1:
        raise ValueError("matrix is singular")
    return tuple(row[n:] for row in basis)


def vec_rows(a: Sequence[Sequence]) -> Matrix:
    return tuple(vec(r) for r in a)


def det(a: Sequence[Sequence]) -> Fraction:
    m = [list(vec(r)) for r in a]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return d


def coordinates(basis: Sequence[Sequence], v: Sequence) -> Vector:
    """Coefficients of ``v`` in the (independent) ``basis``; raises if outside."""
    x = solve(transpose(basis), v)
    if x is None:
        raise ValueError("vector is not in the span of the basis")
    return x


@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^ambient_dim held as a canonical RREF basis."""

    ambient_dim: int
    basis: Matrix

    def __post_init__(self):
        for row in self.basis:
            if len(row) != self.ambient_dim:
                raise ValueError("basis row has wrong length")

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple:
        return tuple(next(i for i, x in enumerate(r) if x != 0) for r in self.basis)

    def contains_vector(self, v: Sequence) -> bool:
        v = vec(v)
        if len(v) != self.ambient_dim:
            raise ValueError("dimension mismatch")
        w = list(v)
        for row, p in zip(self.basis, self.pivots):
            if w[p] != 0:
                f = w[p]
                w = [x - f * y for x, y in zip(w, row)]
        return all(x == 0 for x in w)

    def __contains__(self, v) -> bool:
        return self.contains_vector(v)

    def __repr__(self):
        rows = ", ".join("(" + ", ".join(str(x) for x in r) + ")" for r in self.basis)
        return f"Subspace({self.ambient_dim}, [{rows}])"


def canonicalize(vectors: Iterable[Sequence], ambient_dim: int) -> Subspace:
    vectors = [vec(v) for v in vectors]
    for v in vectors:
        if len(v) != ambient_dim:
            raise ValueError(
                f"vector of length {len(v)} in ambient dimension {ambient_dim}"
            )
    basis, _ = rref(vectors) if vectors else ((), ())
    return Subspace(ambient_dim, basis)


def span(vectors: Iterable[Sequence], ambient_dim: int) -> Subspace:
    return canonicalize(vectors, ambient_dim)


def zero_space(n: int) -> Subspace:
    return Subspace(n, ())


def full_space(n: int) -> Subspace:
    return Subspace(n, identity(n))


def _check_same(a: Subspace, b: Subspace):
    if a.ambient_dim != b.ambient_dim:
        raise ValueError(
            f"ambient mismatch: {a.ambient_dim} vs {b.ambient_dim}"
        )


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_same(a, b)
    return canonicalize(a.basis + b.basis, a.ambient_dim)


def sum_all(spaces: Iterable[Subspace], ambient_dim: int) -> Subspace:
    rows = []
    for s in spaces:
        if s.ambient_dim != ambient_dim:
            raise ValueError("ambient mismatch")
        rows.extend(s.basis)
    return canonicalize(rows, ambient_dim)


def orthogonal_complement(a: Subspace) -> Subspace:
    """Annihilator of ``a`` under the standard dot product."""
    if a.dim == 0:
        return full_space(a.ambient_dim)
    return canonicalize(kernel(a.basis, a.ambient_dim), a.ambient_dim)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    _check_same(a, b)
    n = a.ambient_dim
    if a.dim == 0 or b.dim == 0:
        return zero_space(n)
    if a.dim == n:
        return b
    if b.dim == n:
        return a
    # x = sum s_i a_i = sum t_j b_j  <=>  [A^T | -B^T] (s, t) = 0
    cols = [tuple(r) for r in a.basis] + [tuple(-x for x in r) for r in b.basis]
    sol = kernel(transpose(cols), len(cols))
    vectors = []
    for s in sol:
        coeffs = s[: a.dim]
        v = [Fraction(0)] * n
        for c, row in zip(coeffs, a.basis):
            if c != 0:
                v = [x + c * y for x, y in zip(v, row)]
        vectors.append(v)
    return canonicalize(vectors, n)


def intersect_all(spaces: Iterable[Subspace], ambient_dim: int) -> Subspace:
    out = full_space(ambient_dim)
    for s in spaces:
        out = intersect(out, s)
        if out.dim == 0:
            break
    return out


def contains(a: Subspace, b: Subspace) -> bool:
    """True iff ``b`` is a subspace of ``a``."""
    _check_same(a, b)
    if b.dim > a.dim:
        return False
    return all(a.contains_vector(v) for v in b.basis)


def complement_basis(a: Subspace, b: Subspace) -> Matrix:
    """Vectors extending a basis of ``a`` to a basis of ``b`` (requires a <= b)."""
    _check_same(a, b)
    if not contains(b, a):
        raise ValueError("complement_basis requires a to be contained in b")
    chosen = list(a.basis)
    out = []
    for v in b.basis:
        if rank(chosen + [v]) > len(chosen):
            chosen.append(v)
            out.append(v)
    return tuple(out)


def tensor_subspace(a: Subspace, b: Subspace) -> Subspace:
    """Span of ``x (x) y`` over basis pairs, in Q^(r*s) with index i*s + j."""
    n = a.ambient_dim * b.ambient_dim
    return canonicalize([kron(x, y) for x in a.basis for y in b.basis], n)
