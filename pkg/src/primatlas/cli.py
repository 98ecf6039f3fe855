"""Command-line front end: every oracle and witness with JSON in and out.

Exit status 0 with ``{"ok": true, "result": ...}``; 2 with ``{"ok": false, "error": ...}``
on domain errors; 1 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

import jsonschema

from . import codec, schemas
from .codec import enc_angle, enc_cmatrix, enc_float, enc_intmatrix, enc_qmatrix
from .errors import InvalidValue, PrimAtlasError
from .exactnum import DEFAULT_ENCLOSURE, ThetaEnclosure, parse_enclosure
from .heisenberg import HeisPrim, NamedSubgroup, check_irrep_relations, heis_irrep, res_hull
from .heisenberg import heis_prim_converges
from .primspec import induce, nrbar_limit, prim_converges
from .sl2_action import modd_witness, sl2_classify, sl2_limit, sl2_torsion_transitivity
from .sl3_action import sl3_quasiorbit_limit, sl3_reduce, sl3_stabilizer, sl3_witness
from .weak_containment import (
    CosetAction, FinRep, FolnerSet, HSOperator, amenability_witness, approx_heis_intertwiner, exact_intertwiner,
    folner_ratio, greenleaf_vector, hs_defect, group_generators,
)


@dataclass(frozen=True)
class CliConfig:
    theta: ThetaEnclosure = DEFAULT_ENCLOSURE
    tolerance: float = 1e-9
    transitivity_bound: int = 30
    word_length_bound: int = 12

    def __post_init__(self):
        if not self.tolerance > 0:
            raise InvalidValue("tolerance must be positive")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------- argument decoding

# (argument name, schema input group) for JSON-valued arguments
_JSON_ARGS = {
    "classify-sl2": [("point", "SL2Point")],
    "classify-sl3": [("point", "sl3_point")],
    "stabilizer": [("point", "sl3_point")],
    "induce": [("point", "sl3_point"), ("ideal", "ideal")],
}
_LIMIT_GROUPS = {
    "sl2": ("sl2_profile", "sl2_target"),
    "sl3": ("sl3_profile", "sl3_orbit"),
    "prim": ("prim_profile", "prim_point"),
    "heis": ("heis_profile", "HeisPrim"),
    "nrbar": ("nr_profile", "nr_point"),
}


def _load_json(text: str, name: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"--{name} is not valid JSON: {exc}") from None


def _json_args(args) -> dict[str, tuple[object, str]]:
    """JSON-valued arguments with the schema group each must satisfy."""
    pairs = list(_JSON_ARGS.get(args.command, []))
    if args.command == "limit":
        prof, targ = _LIMIT_GROUPS[args.space]
        pairs = [("profile", prof), ("target", targ)]
    out = {}
    for name, group in pairs:
        doc = _load_json(getattr(args, name), name)
        if group == "SL2Point" and isinstance(doc, dict):
            doc.setdefault("kind", "SL2Point")
        if group == "HeisPrim" and isinstance(doc, dict):
            doc.setdefault("kind", "HeisPrim")
        out[name] = (doc, group)
    return out


def _validate(docs: dict) -> None:
    for name, (doc, group) in docs.items():
        try:
            jsonschema.validate(doc, schemas.input_schema(group))
        except jsonschema.ValidationError as exc:
            raise UsageError(f"--{name} does not match schema '{group}': {exc.message}") from None


def _heis_prim(args) -> HeisPrim:
    return HeisPrim(codec.dec_angle(args.z), codec.dec_angle(args.a), codec.dec_angle(args.b))


# ---------------------------------------------------------------- commands


def _cmd_classify_sl2(args, cfg, docs):
    return codec.encode(sl2_classify(codec.decode(docs["point"][0], ("SL2Point",)), cfg.theta))


def _cmd_classify_sl3(args, cfg, docs):
    red = sl3_reduce(codec.decode_sl3_point(docs["point"][0]), cfg.theta)
    return {"orbit": codec.encode(red.orbit), "stratum": red.stratum,
            "gamma": enc_intmatrix(red.gamma), "h": enc_qmatrix(red.h)}


def _cmd_stabilizer(args, cfg, docs):
    info = sl3_stabilizer(codec.decode_sl3_point(docs["point"][0]), cfg.theta)
    return {"tag": info.tag, "conjugator": enc_intmatrix(info.conjugator),
            "generators": [enc_intmatrix(g) for g in info.generators]}


def _cmd_limit(args, cfg, docs):
    profile = codec.decode(docs["profile"][0])
    target = docs["target"][0]
    if args.space == "sl2":
        return sl2_limit(profile, codec.decode(target), cfg.theta)
    if args.space == "sl3":
        return sl3_quasiorbit_limit(profile, codec.decode(target), cfg.theta)
    if args.space == "prim":
        return prim_converges(profile, codec.decode(target), cfg.theta)
    if args.space == "heis":
        return heis_prim_converges(profile, codec.decode(target))
    return nrbar_limit(profile, codec.decode(target))


def _cmd_induce(args, cfg, docs):
    p = codec.decode_sl3_point(docs["point"][0])
    return codec.encode(induce(p, codec.decode(docs["ideal"][0]), cfg.theta))


def _cmd_witness(args, cfg, docs):
    if args.case == "modd":
        if args.m is None:
            raise UsageError("witness --case modd needs --m")
        w = modd_witness(codec.dec_q(args.s), codec.dec_q(args.t), args.m)
        return {"case": "modd", "gamma": enc_intmatrix(w.gamma), "u": enc_qmatrix(w.u),
                "product": enc_qmatrix(w.product), "m": args.m}
    if args.s_n is None or args.t_n is None:
        raise UsageError(f"witness --case {args.case} needs --s-n and --t-n")
    w = sl3_witness(args.case, codec.dec_q(args.s_n), codec.dec_q(args.t_n), codec.dec_q(args.s), codec.dec_q(args.t))
    return {"case": args.case, "gamma": enc_intmatrix(w.gamma), "u": enc_qmatrix(w.u),
            "product": enc_qmatrix(w.product), "m": w.m, "k": w.k, "residual": enc_float(w.residual)}


def _cmd_heis_rep(args, cfg, docs):
    r = heis_irrep(_heis_prim(args), args.root_a, args.root_b)
    return {"n": r.n, "X": enc_cmatrix(r.matX), "Y": enc_cmatrix(r.matY), "Z": enc_cmatrix(r.matZ),
            "rootA": enc_angle(r.rootA), "rootB": enc_angle(r.rootB), "prim": codec.encode(r.prim),
            "residuals": {k: enc_float(v) for k, v in check_irrep_relations(r).items()}}


def _cmd_res_hull(args, cfg, docs):
    sub = NamedSubgroup[args.subgroup.upper()]
    hull = res_hull(_heis_prim(args), sub)
    pairs = None if hull.pairs is None else [[enc_angle(c), enc_angle(z)] for c, z in hull.pairs]
    return {"subgroup": args.subgroup, "z": enc_angle(hull.z), "pairs": pairs}


def _folner_set(group: str, N: int, d: int) -> FolnerSet:
    return FolnerSet.h3_box(N) if group == "H3" else FolnerSet.zd_box(N, d)


def _cmd_folner(args, cfg, docs):
    doc = _load_json(args.g, "g")
    try:
        jsonschema.validate(doc, schemas.input_schema("heis_elem") if args.group == "H3"
                            else {"type": "array", "items": {"type": "integer"}, "minItems": args.d, "maxItems": args.d})
    except jsonschema.ValidationError as exc:
        raise UsageError(f"--g: {exc.message}") from None
    if args.group == "H3":
        h = codec.decode_heis_elem(doc)
        g, coords = h, [h.x, h.y, h.z]
    else:
        g = coords = doc
    F = _folner_set(args.group, args.N, args.d)
    return {"group": args.group, "N": args.N, "size": len(F), "g": coords, "ratio": str(folner_ratio(F, g))}


def _rows(rows):
    return [{"generator": r.generator, "defect_sq": enc_float(r.defect_sq),
             "folner_ratio": str(r.folner_ratio), "bound_ok": r.bound_ok} for r in rows]


def _cmd_amenability(args, cfg, docs):
    pi = FinRep.from_heis_irrep(heis_irrep(_heis_prim(args), args.root_a, args.root_b))
    w = amenability_witness(pi, FolnerSet.h3_box(args.N))
    return {"N": args.N, "hs_norm": enc_float(w.T.norm), "rows": _rows(w.rows)}


_SPACES = {"H3/Gamma1": ("H3", "Gamma1"), "H3/Gamma2": ("H3", "Gamma2"), "Zd": ("Zd", "Trivial")}


def _cmd_greenleaf(args, cfg, docs):
    group, sub = _SPACES[args.space]
    action = CosetAction(group, sub, args.d)
    vec = greenleaf_vector(action, _folner_set(group, args.N, args.d))
    return {"space": args.space, "N": args.N, "support": len(vec.values), "rows": _rows(vec.rows)}


def _cmd_intertwine(args, cfg, docs):
    p = _heis_prim(args)
    pi, rho = heis_irrep(p, args.root_a1, args.root_b1), heis_irrep(p, args.root_a2, args.root_b2)
    w = exact_intertwiner(pi, rho, cfg.tolerance)
    gens = list(group_generators("H3").values())
    exact_defect = None
    if w is not None:
        exact_defect = hs_defect(HSOperator(w).normalized(), FinRep.from_heis_irrep(pi),
                                 FinRep.from_heis_irrep(rho), gens)
    if args.mode == "exact":
        out = {"mode": "exact", "found": w is not None, "W": None if w is None else enc_cmatrix(w)}
        if exact_defect is not None:
            out["defect"] = enc_float(exact_defect)
        return out
    approx = approx_heis_intertwiner(pi, rho, gens)
    out = {"mode": "approx", "found": True, "T": enc_cmatrix(approx.T.matrix), "defect": enc_float(approx.defect)}
    if exact_defect is not None:
        out["exact_defect"] = enc_float(exact_defect)
    return out


def _cmd_transitivity(args, cfg, docs):
    bound = args.bound if args.bound is not None else cfg.transitivity_bound
    return {"n": args.n, "bound": bound, "single_orbit": sl2_torsion_transitivity(args.n, bound)}


_COMMANDS = {
    "classify-sl2": _cmd_classify_sl2, "classify-sl3": _cmd_classify_sl3, "stabilizer": _cmd_stabilizer,
    "limit": _cmd_limit, "induce": _cmd_induce, "witness": _cmd_witness, "heis-rep": _cmd_heis_rep,
    "res-hull": _cmd_res_hull, "folner": _cmd_folner, "amenability": _cmd_amenability,
    "greenleaf": _cmd_greenleaf, "intertwine": _cmd_intertwine, "transitivity": _cmd_transitivity,
}


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    def global_flags(p, suppress):
        dflt = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        p.add_argument("--theta", default=dflt(None),
                       help="enclosure of theta as 'lo:hi' (default brackets pi); env PRIMATLAS_THETA")
        p.add_argument("--tolerance", type=float, default=dflt(1e-9))
        p.add_argument("--validate", action="store_true", default=dflt(False),
                       help="check JSON arguments against the schemas only")

    # flags may appear before or after the subcommand; the copy on subparsers must not
    # overwrite values given before it, hence SUPPRESS defaults there
    common = _Parser(add_help=False)
    global_flags(common, suppress=True)
    parser = _Parser(prog="primatlas", description=__doc__.splitlines()[0])
    global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_):
        return sub.add_parser(name, help=help_, parents=[common])

    p = add("classify-sl2", "quasi-orbit of (v, w) under SL2(Z)")
    p.add_argument("--point", required=True, help='{"v": [..], "w": [..]}')
    for name, h in (("classify-sl3", "quasi-orbit of gU under SL3(Z)"), ("stabilizer", "stabilizer of gU")):
        add(name, h).add_argument("--point", required=True, help='{"g": 3x3 matrix}')

    p = add("limit", "convergence of a sequence profile to a target")
    p.add_argument("--space", required=True, choices=sorted(_LIMIT_GROUPS))
    p.add_argument("--profile", required=True)
    p.add_argument("--target", required=True)

    p = add("induce", "primitive ideal induced from (gU, ideal of the stabilizer)")
    p.add_argument("--point", required=True)
    p.add_argument("--ideal", required=True)

    p = add("witness", "explicit group elements realizing a quasi-orbit convergence")
    p.add_argument("--case", required=True, choices=["i", "ii", "modd"])
    p.add_argument("--s", default="1")
    p.add_argument("--t", default="1")
    p.add_argument("--m", type=int)
    p.add_argument("--s-n", dest="s_n")
    p.add_argument("--t-n", dest="t_n")

    def heis_args(p, roots=True):
        p.add_argument("--z", required=True)
        p.add_argument("--a", default="0")
        p.add_argument("--b", default="0")
        if roots:
            p.add_argument("--root-a", dest="root_a", type=int, default=0)
            p.add_argument("--root-b", dest="root_b", type=int, default=0)

    heis_args(add("heis-rep", "finite-dimensional irreducible with kernel (z, a, b)"))
    p = add("res-hull", "characters of Gamma1 or Gamma2 weakly contained in a restriction")
    heis_args(p, roots=False)
    p.add_argument("--subgroup", choices=["Gamma1", "Gamma2"], required=True)

    p = add("folner", "|gF sym-diff F| / |F| for a box")
    p.add_argument("--group", choices=["H3", "Zd"], default="H3")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--g", required=True, help="JSON list: [x, y, z] for H3, a point of Z^d otherwise")

    p = add("amenability", "Powers-Stormer almost-invariant operator for a Heisenberg irreducible")
    heis_args(p)
    p.add_argument("--N", type=int, required=True)

    p = add("greenleaf", "almost-invariant vector on a coset space")
    p.add_argument("--space", choices=sorted(_SPACES), required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--d", type=int, default=1)

    p = add("intertwine", "intertwiner between two irreducibles with the same kernel")
    p.add_argument("--mode", choices=["exact", "approx"], default="exact")
    heis_args(p, roots=False)
    for k in ("a1", "b1", "a2", "b2"):
        p.add_argument(f"--root-{k}", dest=f"root_{k}", type=int, default=0)

    p = add("transitivity", "SL2(Z) acts transitively on order-n points of (Z/n)^2")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--bound", type=int)
    return parser


# ---------------------------------------------------------------- entry points


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def _config(args) -> CliConfig:
    text = args.theta or os.environ.get("PRIMATLAS_THETA")
    theta = parse_enclosure(text) if text else DEFAULT_ENCLOSURE
    return CliConfig(theta=theta, tolerance=args.tolerance)


def run(argv: list[str] | None = None) -> tuple[int, dict]:
    """Execute one command; returns (exit code, JSON document)."""
    try:
        args = build_parser().parse_args(argv)
        docs = _json_args(args)
        _validate(docs)
        if args.validate:
            return 0, {"ok": True, "result": {"validated": sorted(docs)}}
        cfg = _config(args)
        result = _COMMANDS[args.command](args, cfg, docs)
        return 0, {"ok": True, "result": result}
    except UsageError as exc:
        return 1, {"ok": False, "error": {"kind": "UsageError", "detail": str(exc)}}
    except PrimAtlasError as exc:
        return 2, {"ok": False, "error": {"kind": exc.kind, "detail": str(exc)}}
    except ZeroDivisionError as exc:
        return 2, {"ok": False, "error": {"kind": "InvalidValue", "detail": str(exc)}}


def main(argv: list[str] | None = None) -> int:
    code, doc = run(argv)
    print(dumps(doc))
    return code


if __name__ == "__main__":
    sys.exit(main())
