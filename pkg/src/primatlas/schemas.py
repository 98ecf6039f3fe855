"""JSON schemas for CLI inputs and outputs, generated from the codec table.

``scripts/export_schemas.py`` writes these to ``docs/schemas/``; a test keeps the
shipped files in sync.
"""

from __future__ import annotations

import copy

from . import codec

DIALECT = "https://json-schema.org/draft/2020-12/schema"

def _ref_coeffs() -> dict:
    return {"type": "array", "items": {"$ref": "#/$defs/coeff"}}


_SCALARS = {
    "qtheta": {"oneOf": [
        {"type": ["string", "integer"], "description": "element of Q(theta), e.g. '1/3 - 1/2*theta'"},
        {"type": "object", "required": ["coeffs"], "additionalProperties": False,
         "properties": {"coeffs": _ref_coeffs(), "den": _ref_coeffs()}},
    ]},
    "coeff": {"oneOf": [{"type": ["string", "integer"]},
                        {"type": "array", "minItems": 2, "maxItems": 2, "items": {"type": ["string", "integer"]}}]},
    "angle": {"oneOf": [
        {"type": ["string", "integer"], "description": "torus angle a + b*theta modulo 1"},
        {"type": "object", "required": ["a"], "additionalProperties": False,
         "properties": {"a": {"type": ["string", "integer"]}, "b": {"type": ["string", "integer"]}}},
    ]},
    "limit": {"type": ["string", "integer"], "description": "a Q(theta) value or 'inf'"},
    "int_matrix": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
    "q_matrix": {"type": "array", "items": {"type": "array", "items": {"$ref": "#/$defs/qtheta"}}},
    "c_matrix": {
        "type": "object", "required": ["re", "im"], "additionalProperties": False,
        "properties": {"re": {"$ref": "#/$defs/f_matrix"}, "im": {"$ref": "#/$defs/f_matrix"}},
    },
    "f_matrix": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
    "sl3_point": {
        "type": "object", "required": ["g"], "additionalProperties": False,
        "properties": {"g": {"type": "array", "minItems": 3, "maxItems": 3,
                             "items": {"type": "array", "minItems": 3, "maxItems": 3,
                                       "items": {"$ref": "#/$defs/qtheta"}}}},
    },
    "heis_elem": {"oneOf": [
        {"type": "array", "minItems": 3, "maxItems": 3, "items": {"type": "integer"}},
        {"type": "object", "additionalProperties": False,
         "properties": {"x": {"type": "integer"}, "y": {"type": "integer"}, "z": {"type": "integer"}}},
    ]},
}

_GROUPS = {
    "sl2_orbit": ["Dense", "Torsion", "RationalDir"],
    "sl2_target": ["Dense", "Torsion", "RationalDir", "SL2Point"],
    "sl2_profile": ["ConstantSL2", "FixedIrrationalV", "ScaledE1"],
    "sl3_orbit": ["Zero", "Q0", "Q1", "Q2"],
    "sl3_profile": ["Q0Seq", "Q1Seq", "Q2Seq", "ZeroSeq"],
    "heis_profile": ["HeisConst", "HeisOrderEscape", "HeisIrrationalZ"],
    "nr_point": ["Pt", "Infinity"],
    "nr_profile": ["NRConst", "NRConv", "NREscape"],
    "prim_point": ["PrimZero", "Strat1", "Strat2", "Strat0"],
    "prim_profile": ["PrimZeroSeq", "Strat1Seq", "Strat2Seq", "Strat0Seq"],
    "ideal": ["TrivialChar", "Gamma1Char", "Gamma2Char", "HeisIdeal"],
}

_NESTED = {
    ("ConstantSL2", "orbit"): "sl2_orbit",
    ("NRConst", "point"): "nr_point",
    ("Strat1", "x"): "nr_point",
    ("Strat2", "x"): "nr_point",
    ("Strat0", "j"): "HeisPrim",
    ("Strat1Seq", "x"): "nr_profile",
    ("Strat2Seq", "x"): "nr_profile",
    ("Strat0Seq", "heis"): "heis_profile",
    ("Strat0Seq", "a_view"): "sl2_profile",
    ("Strat0Seq", "b_view"): "sl2_profile",
    ("HeisIdeal", "j"): "HeisPrim",
}


def _ref(name: str) -> dict:
    return {"$ref": f"#/$defs/{name}"}


def _field_schema(kind: str, name: str, dec) -> dict:
    if (kind, name) in _NESTED:
        return _ref(_NESTED[(kind, name)])
    simple = {
        codec.dec_q: _ref("qtheta"), codec.dec_frac: _ref("qtheta"), codec.dec_angle: _ref("angle"),
        codec.dec_limit: _ref("limit"), int: {"type": "integer", "minimum": 1}, bool: {"type": "boolean"},
    }
    if dec in simple:
        return simple[dec]
    if dec is codec._opt_int:
        return {"type": ["integer", "null"], "minimum": 1}
    if kind == "SL2Point":
        inner = "qtheta" if name == "v" else "angle"
        return {"type": "array", "minItems": 2, "maxItems": 2, "items": _ref(inner)}
    raise KeyError((kind, name))


def _kind_schema(kind: str) -> dict:
    _cls, fields = codec.KINDS[kind]
    props = {"kind": {"const": kind}}
    required = [] if kind == "HeisPrim" else ["kind"]
    if kind in codec.STRATUM_TAGS:
        props["stratum"] = {"const": codec.STRATUM_TAGS[kind]}
        required = []
    for name, _enc, dec, *opt in fields:
        props[name] = _field_schema(kind, name, dec)
        if not opt:
            required.append(name)
    return {"type": "object", "properties": props, "required": required, "additionalProperties": False}


def _defs() -> dict:
    defs = copy.deepcopy(_SCALARS)
    for kind in codec.KINDS:
        defs[kind] = _kind_schema(kind)
    for group, kinds in _GROUPS.items():
        defs[group] = {"oneOf": [_ref(k) for k in kinds]}
    defs["error"] = {
        "type": "object", "required": ["kind", "detail"], "additionalProperties": False,
        "properties": {"kind": {"type": "string"}, "detail": {"type": "string"}},
    }
    defs["bound_row"] = {
        "type": "object", "required": ["generator", "defect_sq", "folner_ratio", "bound_ok"],
        "additionalProperties": False,
        "properties": {"generator": {"type": "string"}, "defect_sq": {"type": "number"},
                       "folner_ratio": _ref("qtheta"), "bound_ok": {"type": "boolean"}},
    }
    return defs


def _obj(props: dict, required=None) -> dict:
    return {"type": "object", "properties": props, "required": list(props if required is None else required),
            "additionalProperties": False}


_RESULTS = {
    "classify-sl2": _ref("sl2_orbit"),
    "classify-sl3": _obj({"orbit": _ref("sl3_orbit"), "stratum": {"type": "string"},
                          "gamma": _ref("int_matrix"), "h": _ref("q_matrix")}),
    "stabilizer": _obj({"tag": {"enum": ["H3", "Gamma1", "Gamma2", "Trivial"]}, "conjugator": _ref("int_matrix"),
                        "generators": {"type": "array", "items": _ref("int_matrix")}}),
    "limit": {"type": "boolean"},
    "induce": _ref("prim_point"),
    "witness": _obj({"case": {"enum": ["i", "ii", "modd"]}, "gamma": _ref("int_matrix"), "u": _ref("q_matrix"),
                     "product": _ref("q_matrix"), "m": {"type": "integer"}, "k": {"type": "integer"},
                     "residual": {"type": "number"}}, required=["case", "gamma", "u", "product"]),
    "heis-rep": _obj({"n": {"type": "integer"}, "X": _ref("c_matrix"), "Y": _ref("c_matrix"), "Z": _ref("c_matrix"),
                      "rootA": _ref("angle"), "rootB": _ref("angle"), "prim": _ref("HeisPrim"),
                      "residuals": {"type": "object", "additionalProperties": {"type": "number"}}}),
    "res-hull": _obj({"subgroup": {"type": "string"}, "z": _ref("angle"),
                      "pairs": {"type": ["array", "null"],
                                "items": {"type": "array", "minItems": 2, "maxItems": 2, "items": _ref("angle")}}}),
    "folner": _obj({"group": {"type": "string"}, "N": {"type": "integer"}, "size": {"type": "integer"},
                    "g": {"type": "array", "items": {"type": "integer"}}, "ratio": _ref("qtheta")}),
    "amenability": _obj({"N": {"type": "integer"}, "hs_norm": {"type": "number"},
                         "rows": {"type": "array", "items": _ref("bound_row")}}),
    "greenleaf": _obj({"space": {"type": "string"}, "N": {"type": "integer"}, "support": {"type": "integer"},
                       "rows": {"type": "array", "items": _ref("bound_row")}}),
    "intertwine": _obj({"mode": {"enum": ["exact", "approx"]}, "found": {"type": "boolean"},
                        "W": {"oneOf": [_ref("c_matrix"), {"type": "null"}]},
                        "T": _ref("c_matrix"), "defect": {"type": "number"},
                        "exact_defect": {"type": "number"}}, required=["mode", "found"]),
    "transitivity": _obj({"n": {"type": "integer"}, "bound": {"type": "integer"}, "single_orbit": {"type": "boolean"}}),
}


def envelope_schema() -> dict:
    return {
        "$schema": DIALECT,
        "$id": "primatlas/envelope.schema.json",
        "title": "primatlas CLI output",
        "oneOf": [
            _obj({"ok": {"const": True}, "result": {}}),
            _obj({"ok": {"const": False}, "error": _ref("error")}),
        ],
        "$defs": _defs(),
    }


def result_schema(command: str) -> dict:
    return {"$schema": DIALECT, "$id": f"primatlas/result-{command}.schema.json",
            "title": f"result of '{command}'", **_RESULTS[command], "$defs": _defs()}


def input_schema(group: str) -> dict:
    """Schema for a JSON-valued CLI argument (a group name, a kind, or 'sl3_point')."""
    return {"$schema": DIALECT, "$id": f"primatlas/input-{group}.schema.json", **_ref(group), "$defs": _defs()}


INPUT_GROUPS = tuple(_GROUPS) + ("HeisPrim", "SL2Point", "sl3_point", "heis_elem")
COMMANDS = tuple(_RESULTS)


def all_schemas() -> dict[str, dict]:
    out = {"envelope.schema.json": envelope_schema()}
    for c in COMMANDS:
        out[f"result-{c}.schema.json"] = result_schema(c)
    for g in INPUT_GROUPS:
        out[f"input-{g}.schema.json"] = input_schema(g)
    return out
