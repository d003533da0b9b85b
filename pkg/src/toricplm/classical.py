"""Isotropic flags, normal frames and certificates for toric Sp(2r) / O(2r) bundles.

A point of the building of Sp(2r) or O(2r) is a labeled flag that is also
isotropic: ``F_i^perp = F_{k-i}``.  A one-parameter subgroup acting by
``t^{v_i}`` on ``e_i`` and ``t^{-v_i}`` on ``f_i`` in a normal frame gives such
a flag.  A toric principal bundle is certified by a normal frame per maximal
cone together with an integer matrix ``phi_sigma`` whose value on each ray
generator reproduces that ray's flag.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg as la
from .building import Frame, Prevaluation, adapted_prevaluation
from .fan import Fan

SYMMETRIC = "symmetric"
SKEW = "skew"


class DegenerateFormError(ValueError):
    pass


@dataclass(frozen=True)
class BilinearForm:
    gram: tuple
    kind: str

    def __post_init__(self):
        g = la.mat(self.gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        if n == 0 or n % 2 or any(len(row) != n for row in g):
            raise ValueError("Gram matrix must be square of even size")
        if self.kind not in (SYMMETRIC, SKEW):
            raise ValueError(f"kind must be '{SYMMETRIC}' or '{SKEW}'")
        sign = 1 if self.kind == SYMMETRIC else -1
        if la.transpose(g) != tuple(tuple(sign * x for x in row) for row in g):
            raise ValueError(f"Gram matrix is not {self.kind}")
        if la.det(g) == 0:
            raise DegenerateFormError("bilinear form is degenerate")

    @property
    def dim(self) -> int:
        return len(self.gram)

    @property
    def r(self) -> int:
        return self.dim // 2

    def __call__(self, x: Sequence, y: Sequence) -> Fraction:
        return la.dot(la.vec(x), la.matvec(self.gram, la.vec(y)))

    @staticmethod
    def standard(r: int, kind: str) -> "BilinearForm":
        """Gram matrix of ``e_1..e_r, f_1..f_r`` with ``<e_i, f_i> = 1``."""
        n = 2 * r
        g = [[0] * n for _ in range(n)]
        for i in range(r):
            g[i][r + i] = 1
            g[r + i][i] = 1 if kind == SYMMETRIC else -1
        return BilinearForm(g, kind)


def perp(w: la.Subspace, form: BilinearForm) -> la.Subspace:
    if w.ambient_dim != form.dim:
        raise ValueError("dimension mismatch")
    rows = [la.matvec(la.transpose(form.gram), b) for b in w.basis]
    return la.span(la.kernel(rows, form.dim) if rows else la.identity(form.dim), form.dim)


@dataclass(frozen=True)
class NormalFrame:
    e: tuple
    f: tuple

    def __post_init__(self):
        object.__setattr__(self, "e", tuple(la.vec(v) for v in self.e))
        object.__setattr__(self, "f", tuple(la.vec(v) for v in self.f))
        if len(self.e) != len(self.f):
            raise ValueError("need as many f vectors as e vectors")

    @property
    def r(self) -> int:
        return len(self.e)

    @property
    def vectors(self) -> tuple:
        return self.e + self.f

    @staticmethod
    def standard(r: int) -> "NormalFrame":
        i = la.identity(2 * r)
        return NormalFrame(i[:r], i[r:])


def is_normal_basis(frame: NormalFrame, form: BilinearForm) -> bool:
    r = frame.r
    if 2 * r != form.dim or any(len(v) != form.dim for v in frame.vectors):
        return False
    for i in range(r):
        for j in range(r):
            if form(frame.e[i], frame.e[j]) != 0 or form(frame.f[i], frame.f[j]) != 0:
                return False
            if form(frame.e[i], frame.f[j]) != (1 if i == j else 0):
                return False
    return True


@dataclass(frozen=True)
class LabeledIsotropicFlag:
    labels: tuple
    flag: tuple

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(la.to_fraction(c) for c in self.labels))
        object.__setattr__(self, "flag", tuple(self.flag))

    def prevaluation(self) -> Prevaluation:
        return Prevaluation(self.labels, self.flag)

    @staticmethod
    def from_prevaluation(v: Prevaluation) -> "LabeledIsotropicFlag":
        return LabeledIsotropicFlag(v.labels, v.flag)


def is_isotropic_flag(flag: Sequence[la.Subspace], form: BilinearForm) -> bool:
    """``F_i^perp = F_{k-i}`` for ``0 <= i <= k`` with ``F_0 = 0``."""
    chain = [la.zero_space(form.dim)] + list(flag)
    k = len(flag)
    if chain[-1].dim != form.dim:
        return False
    return all(perp(chain[i], form) == chain[k - i] for i in range(k + 1))


def flag_of_one_ps(frame: NormalFrame, exponents: Sequence[int]) -> LabeledIsotropicFlag:
    """Flag of the subgroup ``t^{v_i}`` on ``e_i``, ``t^{-v_i}`` on ``f_i``.

    Exponents must satisfy ``v_1 >= ... >= v_r >= 0``.  The flag is
    ``V_i = span(e_1..e_i)``, ``V_{r+i} = V_r + span(f_r, .., f_{r-i+1})``
    with repeated labels collapsed.
    """
    v = [int(x) for x in exponents]
    if len(v) != frame.r:
        raise ValueError("one exponent per e vector is required")
    if any(a < b for a, b in zip(v, v[1:])) or (v and v[-1] < 0):
        raise ValueError(f"exponents must be sorted, nonincreasing and nonnegative: {v}")
    pv = adapted_prevaluation(Frame(frame.vectors), v + [-x for x in v])
    return LabeledIsotropicFlag.from_prevaluation(pv)


def weyl_normalize(frame: NormalFrame, exponents: Sequence[int], form: BilinearForm):
    """Swap ``e_i``, ``f_i`` where ``v_i < 0`` and sort pairs so ``v`` is nonincreasing.

    For a skew form the swap is ``(e, f) -> (f, -e)`` to keep ``<e, f> = 1``.
    """
    pairs = []
    for e, f, x in zip(frame.e, frame.f, exponents):
        x = int(x)
        if x < 0:
            e, f = (f, la.scale(-1, e)) if form.kind == SKEW else (f, e)
            x = -x
        pairs.append((x, e, f))
    pairs.sort(key=lambda p: -p[0])
    return NormalFrame([p[1] for p in pairs], [p[2] for p in pairs]), [p[0] for p in pairs]


@dataclass(frozen=True)
class ConeCertificate:
    frame: NormalFrame
    phi: tuple  # r x n integer matrix

    def __post_init__(self):
        phi = tuple(tuple(int(x) for x in row) for row in self.phi)
        object.__setattr__(self, "phi", phi)
        if len(phi) != self.frame.r:
            raise ValueError("phi must have one row per e vector")

    def exponents(self, v: Sequence) -> list:
        return [sum(a * int(b) for a, b in zip(row, v)) for row in self.phi]


@dataclass
class CertificateVerdict:
    accepted: bool
    witness: dict | None = None

    def __bool__(self):
        return self.accepted


def _describe(flag: LabeledIsotropicFlag) -> dict:
    return {"labels": [str(c) for c in flag.labels], "dims": [s.dim for s in flag.flag]}


def verify_certificate(fan: Fan, form: BilinearForm, ray_flags: Mapping[int, LabeledIsotropicFlag],
                       certificates: Mapping[int, ConeCertificate]) -> CertificateVerdict:
    for rho, fl in sorted(ray_flags.items()):
        if not is_isotropic_flag(fl.flag, form):
            return CertificateVerdict(False, {"ray": rho, "mismatch": "ray flag is not isotropic"})
    for k in range(len(fan.max_cones)):
        if k not in certificates:
            return CertificateVerdict(False, {"cone": k, "mismatch": "missing certificate"})
        cert = certificates[k]
        if not is_normal_basis(cert.frame, form):
            return CertificateVerdict(False, {"cone": k, "mismatch": "frame is not a normal basis"})
        if any(len(row) != fan.n for row in cert.phi):
            return CertificateVerdict(False, {"cone": k, "mismatch": "phi has the wrong number of columns"})
        for rho in fan.max_cones[k]:
            if rho not in ray_flags:
                return CertificateVerdict(False, {"cone": k, "ray": rho, "mismatch": "missing ray flag"})
            exps = cert.exponents(fan.rays[rho])
            frame, sorted_exps = weyl_normalize(cert.frame, exps, form)
            got = flag_of_one_ps(frame, sorted_exps)
            want = ray_flags[rho]
            if got != want:
                what = "labels differ" if got.labels != want.labels else "subspaces differ"
                return CertificateVerdict(False, {
                    "cone": k, "ray": rho, "mismatch": what, "exponents": exps,
                    "expected": _describe(want), "computed": _describe(got),
                })
    return CertificateVerdict(True)


def symplectic_demo():
    """``(fan, form, ray_flags, certificates)`` on P^1 with r = 1.

    Both rays carry the flag of exponent 1 in the standard frame; the cone on
    ray ``v`` uses ``phi = [[v]]`` so that ``phi(v) = 1``.
    """
    from .fan import projective_space

    fan = projective_space(1)
    form = BilinearForm.standard(1, SKEW)
    frame = NormalFrame.standard(1)
    flags = {rho: flag_of_one_ps(frame, [1]) for rho in range(len(fan.rays))}
    certs = {}
    for k, cone in enumerate(fan.max_cones):
        (rho,) = cone
        certs[k] = ConeCertificate(frame, [[int(fan.rays[rho][0])]])
    return fan, form, flags, certs


def random_normal_frame(r: int, form_kind: str, rng, steps: int = 4) -> tuple:
    """A random normal frame of the standard form, via random elementary isometries."""
    form = BilinearForm.standard(r, form_kind)
    n = 2 * r
    e = [la.unit_vector(n, i) for i in range(r)]
    f = [la.unit_vector(n, r + i) for i in range(r)]
    sign = 1 if form_kind == SYMMETRIC else -1
    for _ in range(steps):
        move = rng.randrange(5 if r > 1 else 3)
        i = rng.randrange(r)
        c = Fraction(rng.randint(-3, 3))
        if move == 0 and c:
            # e_i -> c e_i, f_i -> f_i / c
            e[i], f[i] = la.scale(c, e[i]), la.scale(1 / c, f[i])
        elif move == 1 and form_kind == SKEW:
            # f_i -> f_i + c e_i stays isotropic for skew forms
            f[i] = la.add(f[i], la.scale(c, e[i]))
        elif move == 2:
            e[i], f[i] = (f[i], la.scale(-1, e[i])) if form_kind == SKEW else (f[i], e[i])
        elif move == 3:
            j = rng.choice([x for x in range(r) if x != i])
            # e_j -> e_j + c e_i, f_i -> f_i - c f_j (for either kind)
            e[j] = la.add(e[j], la.scale(c, e[i]))
            f[i] = la.sub(f[i], la.scale(c, f[j]))
        elif move == 4:
            j = rng.choice([x for x in range(r) if x != i])
            # f_i -> f_i + c e_j, f_j -> f_j -/+ c e_i keeps the f's isotropic
            f[i], f[j] = la.add(f[i], la.scale(c, e[j])), la.add(f[j], la.scale(-sign * c, e[i]))
    return NormalFrame(e, f), form


def search_certificate(fan: Fan, form: BilinearForm, ray_flags: Mapping[int, LabeledIsotropicFlag],
                       max_candidates: int = 12):
    """Best-effort brute-force search for certificates (r <= 2).

    Candidate frame vectors are basis vectors of the ray flags' subspaces and
    the standard basis.  Returns a certificate dict or ``None``.
    """
    if form.r > 2:
        raise ValueError("certificate search is limited to r <= 2")
    r, n2 = form.r, form.dim
    certs = {}
    for k, cone in enumerate(fan.max_cones):
        cands = []
        for rho in cone:
            for s in ray_flags[rho].flag:
                cands.extend(s.basis)
        cands.extend(la.identity(n2))
        uniq = []
        for c in cands:
            c = la.normalize_line(c)
            if c not in uniq:
                uniq.append(c)
        uniq = uniq[:max_candidates]
        found = None
        for es in itertools.permutations(uniq, r):
            if any(form(a, b) != 0 for a in es for b in es):
                continue
            for fs in itertools.permutations(uniq, r):
                scaled = []
                for e, f in zip(es, fs):
                    p = form(e, f)
                    if p == 0:
                        break
                    scaled.append(la.scale(1 / p, f))
                else:
                    frame = NormalFrame(es, scaled)
                    if is_normal_basis(frame, form):
                        found = _fit_phi(fan, cone, frame, ray_flags)
                        if found is not None:
                            break
            if found is not None:
                break
        if found is None:
            return None
        certs[k] = found
    return certs


def _fit_phi(fan: Fan, cone, frame: NormalFrame, ray_flags):
    rows_v = [la.vec(fan.rays[rho]) for rho in cone]
    targets = []
    for rho in cone:
        pv = ray_flags[rho].prevaluation()
        ex = [pv.evaluate(e) for e in frame.e]
        if [pv.evaluate(f) for f in frame.f] != [-x for x in ex]:
            return None
        if any(Fraction(x).denominator != 1 for x in ex):
            return None
        targets.append(ex)
    phi = []
    for i in range(frame.r):
        b = [t[i] for t in targets]
        sol = la.solve(rows_v, b)
        if sol is None or any(x.denominator != 1 for x in sol):
            return None
        phi.append([int(x) for x in sol])
    return ConeCertificate(frame, phi)
