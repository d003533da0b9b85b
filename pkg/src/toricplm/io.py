"""JSON schemas.  Rationals are written as ``"p/q"`` strings (integers may be plain ints).

Fan::

    {"rank": n, "rays": [[int, ...], ...], "max_cones": [[ray index, ...], ...]}

Bundle (ray filtrations)::

    {"rank": r, "filtrations": {"<ray>": [[level, [[row], ...]], ...]}}

Levels decrease; each entry gives the subspace ``E^rho_level`` by spanning rows.
A PL map document has ``"rank"`` and ``"pieces"`` instead of ``"filtrations"``::

    {"rank": r, "pieces": [{"cone": k, "frame": [[row], ...], "weights": [[covector], ...]}, ...]}

Prevaluation::

    {"labels": ["p/q", ...], "flag": [[[row], ...], ...]}

Certificate::

    {"form": {"kind": "skew" | "symmetric", "gram": [[...]]},
     "ray_flags": {"<ray>": <prevaluation>},
     "cones": {"<cone>": {"e": [[row], ...], "f": [[row], ...], "phi": [[int, ...], ...]}}}
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import linalg as la
from .building import Frame, Prevaluation
from .chern import PiecewisePolynomial
from .classical import BilinearForm, ConeCertificate, LabeledIsotropicFlag, NormalFrame
from .fan import Fan, FanError
from .plmap import ConePiece, PLMap, RayFiltrationData


class InputError(ValueError):
    """Malformed input; ``location`` is a JSON-pointer-like path."""

    def __init__(self, message: str, location: str = ""):
        super().__init__(f"{location or '/'}: {message}")
        self.location = location or "/"
        self.message = message


def rational_str(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _rat(x: Any, loc: str) -> Fraction:
    try:
        return la.to_fraction(x)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not an exact rational: {x!r} ({exc})", loc) from None


def _int(x: Any, loc: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise InputError(f"expected an integer, got {x!r}", loc)
    return x


def _list(x: Any, loc: str) -> list:
    if not isinstance(x, list):
        raise InputError(f"expected a list, got {type(x).__name__}", loc)
    return x


def _dict(x: Any, loc: str) -> dict:
    if not isinstance(x, dict):
        raise InputError(f"expected an object, got {type(x).__name__}", loc)
    return x


def _key(d: dict, k: str, loc: str):
    if k not in d:
        raise InputError(f"missing key '{k}'", loc)
    return d[k]


def _rows(x: Any, width: int, loc: str) -> list:
    rows = []
    for i, row in enumerate(_list(x, loc)):
        row = _list(row, f"{loc}/{i}")
        if len(row) != width:
            raise InputError(f"row has length {len(row)}, expected {width}", f"{loc}/{i}")
        rows.append(tuple(_rat(v, f"{loc}/{i}/{j}") for j, v in enumerate(row)))
    return rows


def _rows_out(rows) -> list:
    return [[rational_str(x) for x in row] for row in rows]


def load_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read file: {exc.strerror}", str(path)) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc.msg}", f"{path}:{exc.lineno}:{exc.colno}") from None


def dump_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


# fan -----------------------------------------------------------------------------


def fan_to_json(fan: Fan) -> dict:
    return {"rank": fan.n, "rays": [[int(x) for x in r] for r in fan.rays],
            "max_cones": [list(c) for c in fan.max_cones]}


def fan_from_json(doc: Any) -> Fan:
    d = _dict(doc, "")
    n = _int(_key(d, "rank", ""), "/rank")
    rays = []
    for i, r in enumerate(_list(_key(d, "rays", ""), "/rays")):
        r = _list(r, f"/rays/{i}")
        if len(r) != n:
            raise InputError(f"ray has length {len(r)}, expected {n}", f"/rays/{i}")
        rays.append(tuple(_int(x, f"/rays/{i}/{j}") for j, x in enumerate(r)))
    cones = []
    for i, c in enumerate(_list(_key(d, "max_cones", ""), "/max_cones")):
        cones.append(tuple(_int(x, f"/max_cones/{i}/{j}") for j, x in enumerate(_list(c, f"/max_cones/{i}"))))
    try:
        return Fan(n, rays, cones)
    except (FanError, ValueError, IndexError) as exc:
        raise InputError(str(exc), "/max_cones") from None


# prevaluations and bundles -----------------------------------------------------------


def prevaluation_to_json(v: Prevaluation) -> dict:
    return {"labels": [rational_str(c) for c in v.labels], "flag": [_rows_out(s.basis) for s in v.flag]}


def prevaluation_from_json(doc: Any, r: int, loc: str = "") -> Prevaluation:
    d = _dict(doc, loc)
    labels = [_rat(c, f"{loc}/labels/{i}") for i, c in enumerate(_list(_key(d, "labels", loc), f"{loc}/labels"))]
    flag = [la.span(_rows(s, r, f"{loc}/flag/{i}"), r)
            for i, s in enumerate(_list(_key(d, "flag", loc), f"{loc}/flag"))]
    try:
        return Prevaluation(tuple(labels), tuple(flag))
    except ValueError as exc:
        raise InputError(str(exc), loc) from None


def filtrations_to_json(data: RayFiltrationData) -> dict:
    return {"rank": data.rank, "filtrations": {
        str(rho): [[rational_str(c), _rows_out(s.basis)] for c, s in data[rho].to_filtration()]
        for rho in sorted(data.filtrations)
    }}


def filtrations_from_json(doc: Any, fan: Fan | None = None) -> RayFiltrationData:
    d = _dict(doc, "")
    r = _int(_key(d, "rank", ""), "/rank")
    if r < 1:
        raise InputError("rank must be positive", "/rank")
    filts = _dict(_key(d, "filtrations", ""), "/filtrations")
    out = {}
    for key, jumps in filts.items():
        loc = f"/filtrations/{key}"
        try:
            rho = int(key)
        except ValueError:
            raise InputError("ray keys must be integers", loc) from None
        if fan is not None and not 0 <= rho < len(fan.rays):
            raise InputError(f"ray {rho} is not a ray of the fan", loc)
        levels, spaces = [], []
        for i, jump in enumerate(_list(jumps, loc)):
            jump = _list(jump, f"{loc}/{i}")
            if len(jump) != 2:
                raise InputError("each jump is [level, rows]", f"{loc}/{i}")
            levels.append(_rat(jump[0], f"{loc}/{i}/0"))
            if levels[-1].denominator != 1:
                raise InputError("filtration levels must be integers", f"{loc}/{i}/0")
            spaces.append(la.span(_rows(jump[1], r, f"{loc}/{i}/1"), r))
        try:
            out[rho] = Prevaluation(tuple(levels), tuple(spaces))
        except ValueError as exc:
            raise InputError(str(exc), loc) from None
    if fan is not None:
        missing = [rho for rho in range(len(fan.rays)) if rho not in out]
        if missing:
            raise InputError(f"no filtration for rays {missing}", "/filtrations")
    return RayFiltrationData(r, out)


def plmap_to_json(phi: PLMap) -> dict:
    return {"rank": phi.rank, "pieces": [
        {"cone": p.cone, "rays": list(phi.fan.max_cones[p.cone]),
         "frame": _rows_out(p.frame.vectors), "weights": _rows_out(p.weights)}
        for p in phi.pieces
    ]}


def plmap_from_json(doc: Any, fan: Fan) -> PLMap:
    d = _dict(doc, "")
    r = _int(_key(d, "rank", ""), "/rank")
    pieces = []
    for i, p in enumerate(_list(_key(d, "pieces", ""), "/pieces")):
        loc = f"/pieces/{i}"
        p = _dict(p, loc)
        cone = _int(_key(p, "cone", loc), f"{loc}/cone")
        try:
            frame = Frame(_rows(_key(p, "frame", loc), r, f"{loc}/frame"))
        except ValueError as exc:
            raise InputError(str(exc), f"{loc}/frame") from None
        weights = _rows(_key(p, "weights", loc), fan.n, f"{loc}/weights")
        pieces.append(ConePiece(cone, frame, tuple(weights)))
    try:
        return PLMap(fan, r, tuple(pieces))
    except ValueError as exc:
        raise InputError(str(exc), "/pieces") from None


def is_plmap_doc(doc: Any) -> bool:
    return isinstance(doc, dict) and "pieces" in doc


# chern ------------------------------------------------------------------------------


def piecewise_polynomial_to_json(f: PiecewisePolynomial) -> list:
    return [{"cone": k, "poly": [[list(e), rational_str(c)] for e, c in p.sorted_terms()]}
            for k, p in enumerate(f.polys)]


# certificates ---------------------------------------------------------------------------


def certificate_to_json(form: BilinearForm, ray_flags: dict, certs: dict) -> dict:
    return {
        "form": {"kind": form.kind, "gram": _rows_out(form.gram)},
        "ray_flags": {str(rho): prevaluation_to_json(fl.prevaluation()) for rho, fl in sorted(ray_flags.items())},
        "cones": {str(k): {"e": _rows_out(c.frame.e), "f": _rows_out(c.frame.f), "phi": [list(row) for row in c.phi]}
                  for k, c in sorted(certs.items())},
    }


def certificate_from_json(doc: Any):
    d = _dict(doc, "")
    fd = _dict(_key(d, "form", ""), "/form")
    kind = _key(fd, "kind", "/form")
    gram_raw = _list(_key(fd, "gram", "/form"), "/form/gram")
    try:
        form = BilinearForm(_rows(gram_raw, len(gram_raw), "/form/gram"), kind)
    except ValueError as exc:
        raise InputError(str(exc), "/form") from None
    n2 = form.dim
    flags = {}
    for key, v in _dict(_key(d, "ray_flags", ""), "/ray_flags").items():
        loc = f"/ray_flags/{key}"
        try:
            rho = int(key)
        except ValueError:
            raise InputError("ray keys must be integers", loc) from None
        flags[rho] = LabeledIsotropicFlag.from_prevaluation(prevaluation_from_json(v, n2, loc))
    certs = {}
    for key, c in _dict(_key(d, "cones", ""), "/cones").items():
        loc = f"/cones/{key}"
        try:
            k = int(key)
        except ValueError:
            raise InputError("cone keys must be integers", loc) from None
        c = _dict(c, loc)
        frame = NormalFrame(_rows(_key(c, "e", loc), n2, f"{loc}/e"), _rows(_key(c, "f", loc), n2, f"{loc}/f"))
        phi = [[_int(x, f"{loc}/phi/{i}/{j}") for j, x in enumerate(_list(row, f"{loc}/phi/{i}"))]
               for i, row in enumerate(_list(_key(c, "phi", loc), f"{loc}/phi"))]
        try:
            certs[k] = ConeCertificate(frame, phi)
        except ValueError as exc:
            raise InputError(str(exc), loc) from None
    return form, flags, certs
