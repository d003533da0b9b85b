"""Transition matrices between the charts of a toric vector bundle.

In the frame of cone sigma the bundle is trivialized by ``e_j -> chi^{u_j} e_j``.
The transition to cone sigma' is the matrix with entries
``C_ij chi^{u'_i - u_j}``, where ``C`` changes frame-sigma coordinates into
frame-sigma' coordinates.  It extends over the orbit of the shared face tau
exactly when every nonzero exponent is nonnegative on tau and the determinant
is a unit there, i.e. its exponent vanishes on tau.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .fan import Fan
from .plmap import PLMap


@dataclass(frozen=True)
class LaurentMatrix:
    """Square matrix of Laurent polynomials; entry ``{exponent: coeff}``."""

    entries: tuple

    def __post_init__(self):
        rows = tuple(
            tuple(_clean(e) for e in row) for row in self.entries
        )
        object.__setattr__(self, "entries", rows)

    @property
    def size(self) -> int:
        return len(self.entries)

    def __matmul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        n = self.size
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc: dict = {}
                for k in range(n):
                    for e1, c1 in self.entries[i][k].items():
                        for e2, c2 in other.entries[k][j].items():
                            e = tuple(a + b for a, b in zip(e1, e2))
                            acc[e] = acc.get(e, Fraction(0)) + c1 * c2
                row.append(acc)
            out.append(row)
        return LaurentMatrix(out)

    def at_identity(self) -> tuple:
        """Value at the base point ``t = 1``."""
        return tuple(tuple(sum(e.values(), Fraction(0)) for e in row) for row in self.entries)

    def is_identity(self) -> bool:
        n = self.size
        for i in range(n):
            for j in range(n):
                want = {tuple(_zero_exp(self)): Fraction(1)} if i == j else {}
                if self.entries[i][j] != want:
                    return False
        return True


def _clean(entry) -> dict:
    out = {}
    for e, c in dict(entry).items():
        c = la.to_fraction(c)
        if c != 0:
            out[tuple(la.to_fraction(x) for x in e)] = c
    return out


def _zero_exp(m: LaurentMatrix) -> tuple:
    for row in m.entries:
        for e in row:
            for exp in e:
                return (Fraction(0),) * len(exp)
    raise ValueError("cannot infer the number of variables of a zero matrix")


@dataclass(frozen=True)
class MonomialMatrix:
    """Entries ``coeff * chi^exp`` (or zero) for the map from chart ``source`` to ``target``."""

    source: int
    target: int
    coeffs: tuple
    exps: tuple  # exps[i][j] is meaningful only where coeffs[i][j] != 0
    det_exp: tuple

    def as_laurent(self) -> LaurentMatrix:
        return LaurentMatrix(tuple(
            tuple({self.exps[i][j]: c} if c else {} for j, c in enumerate(row))
            for i, row in enumerate(self.coeffs)
        ))

    def nonzero(self):
        for i, row in enumerate(self.coeffs):
            for j, c in enumerate(row):
                if c:
                    yield i, j, c, self.exps[i][j]

    def to_json(self) -> dict:
        return {
            "source": self.source,
            "target": self.target,
            "entries": [
                [None if not c else {"coeff": str(c), "exp": [_num(x) for x in self.exps[i][j]]}
                 for j, c in enumerate(row)]
                for i, row in enumerate(self.coeffs)
            ],
            "det_exp": [_num(x) for x in self.det_exp],
        }


def _num(x: Fraction):
    return int(x) if x.denominator == 1 else str(x)


def transition(phi: PLMap, sigma: int, sigma_prime: int) -> MonomialMatrix:
    p, q = phi.pieces[sigma], phi.pieces[sigma_prime]
    if p.frame.rank != q.frame.rank:
        raise ValueError("mismatched ranks")
    r = phi.rank
    l_sigma = la.transpose(p.frame.vectors)
    l_prime = la.transpose(q.frame.vectors)
    c = la.matmul(la.inverse(l_prime), l_sigma)
    exps = tuple(
        tuple(la.sub(q.weights[i], p.weights[j]) for j in range(r)) for i in range(r)
    )
    det_exp = la.sub(_sum(q.weights, phi.fan.n), _sum(p.weights, phi.fan.n))
    return MonomialMatrix(sigma, sigma_prime, c, exps, det_exp)


def _sum(vs: Sequence, n: int):
    out = la.zero_vector(n)
    for v in vs:
        out = la.add(out, v)
    return out


def regularity_failure(psi: MonomialMatrix, tau: Sequence[int], fan: Fan) -> dict | None:
    """``None`` when ``psi`` is regular on the chart of ``tau``, else a witness."""
    tau = tuple(sorted(tau))
    for k in (psi.source, psi.target):
        if not set(tau) <= set(fan.max_cones[k]):
            raise ValueError(f"{list(tau)} is not a face of cone {k}")
    gens = [la.vec(fan.rays[rho]) for rho in tau]
    for i, j, c, e in psi.nonzero():
        for rho, v in zip(tau, gens):
            if la.dot(v, e) < 0:
                return {"entry": [i, j], "ray": rho, "pairing": la.dot(v, e)}
    for rho, v in zip(tau, gens):
        if la.dot(v, psi.det_exp) != 0:
            return {"entry": "det", "ray": rho, "pairing": la.dot(v, psi.det_exp)}
    return None


def is_regular(psi: MonomialMatrix, tau: Sequence[int], fan: Fan) -> bool:
    return regularity_failure(psi, tau, fan) is None


def cocycle_check(phi: PLMap, a: int, b: int, c: int) -> bool:
    """``psi_{b,c} psi_{a,b} = psi_{a,c}`` as Laurent-polynomial matrices."""
    lhs = transition(phi, b, c).as_laurent() @ transition(phi, a, b).as_laurent()
    return lhs == transition(phi, a, c).as_laurent()


def inverse_check(phi: PLMap, a: int, b: int) -> bool:
    return (transition(phi, b, a).as_laurent() @ transition(phi, a, b).as_laurent()).is_identity()


@dataclass
class CocycleReport:
    regular: bool
    cocycle: bool
    failures: list

    def to_json(self) -> dict:
        return {"regular": self.regular, "cocycle": self.cocycle,
                "failures": [_jsonable(f) for f in self.failures]}


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return _num(x)
    return x


def check_all(phi: PLMap) -> CocycleReport:
    """Regularity on every wall and the cocycle condition on every cone triple."""
    fan = phi.fan
    failures = []
    for idx, wall in enumerate(fan.walls):
        for a, b in ((wall.sigma, wall.sigma_prime), (wall.sigma_prime, wall.sigma)):
            w = regularity_failure(transition(phi, a, b), wall.tau_rays, fan)
            if w is not None:
                failures.append({"kind": "regularity", "wall": idx, "source": a, "target": b, **w})
    m = len(fan.max_cones)
    for a, b, c in itertools.combinations(range(m), 3):
        if not cocycle_check(phi, a, b, c):
            failures.append({"kind": "cocycle", "cones": [a, b, c]})
    kinds = {f["kind"] for f in failures}
    return CocycleReport("regularity" not in kinds, "cocycle" not in kinds, failures)
