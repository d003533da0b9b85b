"""Command line front end.

Exit codes: 0 success, 1 input error, 2 mathematical rejection (incompatible
filtrations, not nef, failed regularity or cocycle check, rejected certificate,
or a fan that fails validate-fan).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import io
from .chern import chern_class
from .classical import search_certificate, symplectic_demo, verify_certificate
from .cocycle import _jsonable, check_all, cocycle_check, regularity_failure, transition
from .fan import FanError, product_p1, projective_space
from .fixtures import example_line_bundle, example_tangent_pn, example_trivial
from .plmap import (
    IncompatibleError,
    MalformedPLMapError,
    PLMap,
    check_well_defined,
    compatibility_solve,
    is_integral,
    ray_filtrations,
    tensor,
)
from .positivity import is_ample, is_globally_generated, is_nef, search_nef_not_gg, wall_splittings

OK, INPUT_ERROR, REJECTED = 0, 1, 2


class Rejection(Exception):
    def __init__(self, report: dict):
        super().__init__("rejected")
        self.report = report


def _load_fan(path):
    if path is None:
        raise io.InputError("--fan is required", "--fan")
    return io.fan_from_json(io.load_json(path))


def _load_bundle(path, fan, seed: int, flag: str = "--bundle") -> PLMap:
    if path is None:
        raise io.InputError(f"{flag} is required", flag)
    doc = io.load_json(path)
    if io.is_plmap_doc(doc):
        phi = io.plmap_from_json(doc, fan)
        try:
            ray_filtrations(phi)
        except MalformedPLMapError as exc:
            raise Rejection({"accepted": False, "reason": "malformed", "detail": str(exc)}) from None
        bad = check_well_defined(phi, seed=seed)
        if bad:
            k, l, _ = bad[0]
            raise Rejection({"accepted": False, "reason": "malformed",
                             "detail": f"cones {k} and {l} disagree on their common face"})
        return phi
    data = io.filtrations_from_json(doc, fan)
    fan.require_valid()
    try:
        return compatibility_solve(fan, data, seed=seed)
    except IncompatibleError as exc:
        raise Rejection({"accepted": False, "reason": "incompatible", "kind": exc.kind,
                         "cone": exc.cone, "rays": list(fan.max_cones[exc.cone]),
                         "witness": _jsonable(exc.witness)}) from None


def cmd_validate_fan(args) -> tuple:
    fan = _load_fan(args.fan)
    d = fan.diagnostics
    report = {**_jsonable(d.as_dict()), "valid": d.valid, "walls": len(fan.walls) if d.valid else None}
    return (OK if d.valid else REJECTED), report


def cmd_classify(args) -> tuple:
    fan = _load_fan(args.fan)
    phi = _load_bundle(args.bundle, fan, args.seed)
    integ = is_integral(phi)
    return OK, {"accepted": True, "integral": integ.integral, "integrality_verified": integ.verified,
                "plmap": io.plmap_to_json(phi)}


def _positivity_report(phi: PLMap) -> dict:
    nef, ample, gg = is_nef(phi), is_ample(phi), is_globally_generated(phi)
    witnesses = []
    for name, v in (("nef", nef), ("ample", ample), ("globally_generated", gg)):
        if not v:
            witnesses.append({"property": name, **_jsonable(v.witness)})
    return {
        "nef": nef.holds, "ample": ample.holds, "globally_generated": gg.holds,
        "walls": [{"tau": list(s.tau), "degrees": _jsonable(list(s.degrees))} for s in wall_splittings(phi)],
        "witnesses": witnesses,
    }


def cmd_positivity(args) -> tuple:
    fan = _load_fan(args.fan)
    fan.require_complete()
    report = _positivity_report(_load_bundle(args.bundle, fan, args.seed))
    return (OK if report["nef"] else REJECTED), report


def cmd_chern(args) -> tuple:
    fan = _load_fan(args.fan)
    phi = _load_bundle(args.bundle, fan, args.seed)
    if not 1 <= args.i <= phi.rank:
        raise io.InputError(f"chern index must lie in 1..{phi.rank}", "--i")
    try:
        c = chern_class(phi, args.i)
    except MalformedPLMapError as exc:
        raise Rejection({"accepted": False, "reason": "malformed", "detail": str(exc)}) from None
    return OK, {"i": args.i, "cones": io.piecewise_polynomial_to_json(c)}


def cmd_tensor(args) -> tuple:
    fan = _load_fan(args.fan)
    phi = _load_bundle(args.bundle, fan, args.seed)
    psi = _load_bundle(args.other, fan, args.seed, "--other")
    t = tensor(phi, psi)
    return OK, {"plmap": io.plmap_to_json(t), "filtrations": io.filtrations_to_json(ray_filtrations(t))}


def cmd_cocycle(args) -> tuple:
    fan = _load_fan(args.fan)
    phi = _load_bundle(args.bundle, fan, args.seed)
    m = len(fan.max_cones)
    if args.cones is None:
        rep = check_all(phi)
        return (OK if rep.regular and rep.cocycle else REJECTED), rep.to_json()
    try:
        cones = [int(c) for c in args.cones.split(",")]
    except ValueError:
        raise io.InputError("expected comma separated cone indices", "--cones") from None
    if len(cones) not in (2, 3) or any(not 0 <= c < m for c in cones):
        raise io.InputError(f"give two or three cone indices in 0..{m - 1}", "--cones")
    if len(cones) == 3:
        ok = cocycle_check(phi, *cones)
        return (OK if ok else REJECTED), {"cones": cones, "cocycle": ok}
    a, b = cones
    psi = transition(phi, a, b)
    tau = sorted(set(fan.max_cones[a]) & set(fan.max_cones[b]))
    fail = regularity_failure(psi, tau, fan)
    report = {"cones": cones, "tau": tau, "transition": psi.to_json(), "regular": fail is None,
              "witness": _jsonable(fail)}
    return (OK if fail is None else REJECTED), report


def cmd_sp_check(args) -> tuple:
    fan = _load_fan(args.fan)
    if args.cert is None:
        raise io.InputError("--cert is required", "--cert")
    form, flags, certs = io.certificate_from_json(io.load_json(args.cert))
    v = verify_certificate(fan, form, flags, certs)
    return (OK if v else REJECTED), {"accepted": v.accepted, "witness": _jsonable(v.witness)}


def cmd_sp_search(args) -> tuple:
    fan = _load_fan(args.fan)
    if args.cert is None:
        raise io.InputError("--cert is required", "--cert")
    form, flags, _ = io.certificate_from_json(io.load_json(args.cert))
    certs = search_certificate(fan, form, flags)
    if certs is None:
        return REJECTED, {"found": False}
    return OK, {"found": True, "certificate": io.certificate_to_json(form, flags, certs)}


def _fan_by_name(name: str, n: int):
    if name == "pn":
        return projective_space(n)
    if name == "p1xp1":
        return product_p1(2)
    raise io.InputError(f"unknown fan '{name}' (pn, p1xp1)", "--on")


def cmd_example(args) -> tuple:
    out = Path(args.out or ".")
    files = {}
    if args.name == "tangent-pn":
        fan, data, _ = example_tangent_pn(args.n)
        files = {"fan.json": io.fan_to_json(fan), "bundle.json": io.filtrations_to_json(data)}
    elif args.name == "line-bundle":
        fan = projective_space(args.n)
        try:
            a = [int(x) for x in (args.a or ",".join(["1"] * len(fan.rays))).split(",")]
        except ValueError:
            raise io.InputError("expected comma separated integers", "--a") from None
        if len(a) != len(fan.rays):
            raise io.InputError(f"need {len(fan.rays)} coefficients", "--a")
        fan, data, _ = example_line_bundle(fan, a)
        files = {"fan.json": io.fan_to_json(fan), "bundle.json": io.filtrations_to_json(data)}
    elif args.name == "trivial":
        fan, data, _ = example_trivial(projective_space(args.n), args.r)
        files = {"fan.json": io.fan_to_json(fan), "bundle.json": io.filtrations_to_json(data)}
    elif args.name == "symplectic-demo":
        fan, form, flags, certs = symplectic_demo()
        files = {"fan.json": io.fan_to_json(fan), "cert.json": io.certificate_to_json(form, flags, certs)}
    else:
        raise io.InputError(f"unknown example '{args.name}'", "name")
    out.mkdir(parents=True, exist_ok=True)
    for fname, doc in files.items():
        (out / fname).write_text(io.dump_json(doc))
    return OK, {"example": args.name, "files": sorted(str(out / f) for f in files)}


def cmd_search(args) -> tuple:
    fan = _fan_by_name(args.on, args.n)
    hits = search_nef_not_gg(fan, rank=args.r, trials=args.trials, seed=args.seed)
    return OK, {
        "fan": io.fan_to_json(fan), "trials": args.trials, "found": len(hits),
        "instances": [{"trial": h["trial"], "nef": h["nef"], "globally_generated": h["globally_generated"],
                       "filtrations": io.filtrations_to_json(h["data"])} for h in hits[: args.keep]],
    }


COMMANDS = {
    "validate-fan": cmd_validate_fan,
    "classify": cmd_classify,
    "positivity": cmd_positivity,
    "chern": cmd_chern,
    "tensor": cmd_tensor,
    "cocycle": cmd_cocycle,
    "sp-check": cmd_sp_check,
    "sp-search": cmd_sp_search,
    "example": cmd_example,
    "search": cmd_search,
}


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with 1; argparse's default 2 means rejection here."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(INPUT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="toricplm", description="Toric vector bundles as piecewise linear maps.")
    common = _Parser(add_help=False)
    common.add_argument("--fan", help="fan JSON file")
    common.add_argument("--bundle", help="bundle JSON file (ray filtrations or PL map)")
    common.add_argument("--cert", help="certificate JSON file")
    common.add_argument("--out", help="write the report (or example files) here")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized steps")
    common.add_argument("--format", choices=("json", "text"), default="json")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("validate-fan", "classify", "positivity", "sp-check", "sp-search"):
        sub.add_parser(name, parents=[common])
    c = sub.add_parser("chern", parents=[common])
    c.add_argument("--i", type=int, required=True)
    t = sub.add_parser("tensor", parents=[common])
    t.add_argument("--other", help="second bundle JSON file")
    cc = sub.add_parser("cocycle", parents=[common])
    cc.add_argument("--cones", help="A,B for a transition or A,B,C for a cocycle check")
    e = sub.add_parser("example", parents=[common])
    e.add_argument("name", choices=("tangent-pn", "line-bundle", "trivial", "symplectic-demo"))
    e.add_argument("--n", type=int, default=2)
    e.add_argument("--r", type=int, default=2)
    e.add_argument("--a", help="comma separated ray coefficients for line-bundle")
    s = sub.add_parser("search", parents=[common])
    s.add_argument("--on", default="pn", choices=("pn", "p1xp1"))
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--r", type=int, default=2)
    s.add_argument("--trials", type=int, default=200)
    s.add_argument("--keep", type=int, default=3)
    return p


def _text(report: dict, indent: int = 0) -> str:
    lines = []
    pad = "  " * indent
    for k, v in report.items():
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.append(_text(v, indent + 1))
        else:
            lines.append(f"{pad}{k}: {v}")
    return "\n".join(lines)


def run(argv=None) -> tuple:
    """Parse ``argv``, run the command and return ``(exit code, report)``."""
    args = build_parser().parse_args(argv)
    try:
        code, body = COMMANDS[args.command](args)
    except Rejection as rej:
        code, body = REJECTED, rej.report
    except io.InputError as exc:
        code, body = INPUT_ERROR, {"error": exc.message, "location": exc.location}
    except FanError as exc:
        code, body = INPUT_ERROR, {"error": str(exc), "location": "--fan"}
    report = {"command": args.command, "seed": args.seed, "exit": code, **body}
    return code, report


def main(argv=None) -> int:
    code, report = run(argv)
    args = build_parser().parse_args(argv)
    text = _text(report) + "\n" if args.format == "text" else io.dump_json(report)
    if args.out and args.command != "example":
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
