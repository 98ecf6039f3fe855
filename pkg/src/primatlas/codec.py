"""JSON encoding of the domain objects.

Exact quantities travel as strings: elements of Q(theta) as expressions such as
``"1/3 - 1/2*theta"``, torus points as their angle in [0, 1) + Q*theta, and limits
additionally as ``"inf"``.  Composite objects are dicts tagged by ``"kind"``.
Floats are auxiliary and rounded to 15 significant digits.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import InvalidValue
from .exactnum import IntMatrix, QTheta, TorusElem, as_fraction
from .heisenberg import HeisConst, HeisElem, HeisIrrationalZ, HeisOrderEscape, HeisPrim
from .primspec import (
    Gamma1Char, Gamma2Char, HeisIdeal, Infinity, NRConst, NRConv, NREscape, PrimZero, PrimZeroSeq, Pt,
    Strat0, Strat0Seq, Strat1, Strat1Seq, Strat2, Strat2Seq, TrivialChar,
)
from .sl2_action import INF, ConstantSL2, Dense, FixedIrrationalV, RationalDir, ScaledE1, SL2Point, Torsion
from .sl3_action import Q0, Q1, Q2, Q0Seq, Q1Seq, Q2Seq, SL3Point, Zero, ZeroSeq

# ---------------------------------------------------------------- scalars


def enc_q(x) -> str:
    return str(QTheta.coerce(x))


def dec_q(x) -> QTheta:
    """Accept an expression string, an integer, or {"coeffs": [...], "den": [...]}.

    Coefficient lists run from the constant term upward; entries are rationals or
    [numerator, denominator] pairs.
    """
    if isinstance(x, bool):
        raise InvalidValue("booleans are not numbers")
    if isinstance(x, dict):
        if "coeffs" not in x or set(x) - {"coeffs", "den"}:
            raise InvalidValue("object form of Q(theta) is {'coeffs': [...], 'den': [...]}")
        num = [_coeff(c) for c in x["coeffs"]]
        den = [_coeff(c) for c in x.get("den", [1])]
        return QTheta(num, den)
    return QTheta.coerce(x)


def _coeff(c) -> Fraction:
    if isinstance(c, (list, tuple)):
        if len(c) != 2:
            raise InvalidValue("a coefficient pair is [numerator, denominator]")
        return as_fraction(c[0]) / as_fraction(c[1])
    return as_fraction(c)


def enc_frac(x: Fraction) -> str:
    return str(Fraction(x))


def dec_frac(x) -> Fraction:
    q = dec_q(x)
    return q.rational_value()


def enc_angle(e: TorusElem) -> str:
    return str(e)


def dec_angle(x) -> TorusElem:
    if isinstance(x, dict) and set(x) <= {"a", "b"} and "a" in x:
        return TorusElem(dec_frac(x["a"]), dec_frac(x.get("b", 0)))
    return TorusElem.from_qtheta(dec_q(x))


def enc_limit(x) -> str:
    return "inf" if x is INF else enc_q(x)


def dec_limit(x):
    if isinstance(x, str) and x.strip().lower() in ("inf", "+inf", "infinity"):
        return INF
    return dec_q(x)


def enc_float(x: float) -> float:
    v = float(format(float(x), ".15g"))
    return 0.0 if v == 0 else v


def enc_qmatrix(m) -> list:
    rows = m.rows if isinstance(m, IntMatrix) else m
    return [[enc_q(x) for x in row] for row in rows]


def enc_intmatrix(m) -> list:
    rows = m.rows if isinstance(m, IntMatrix) else m
    return [[int(x) for x in row] for row in rows]


def enc_cmatrix(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=complex)
    return {"re": [[enc_float(v) for v in row] for row in m.real],
            "im": [[enc_float(v) for v in row] for row in m.imag]}


def _opt_int(x):
    return None if x is None else int(x)


# ---------------------------------------------------------------- tagged objects
# kind -> (class, [(field, encoder, decoder, required)])

_Q = (enc_q, dec_q)
_F = (enc_frac, dec_frac)
_ANG = (enc_angle, dec_angle)
_LIM = (enc_limit, dec_limit)
_INT = (int, int)
_OINT = (_opt_int, _opt_int)
_BOOL = (bool, bool)


def _obj(default_kind: str | None = None):
    return (lambda v: encode(v), lambda v: decode(v, default_kind=default_kind))  # late-bound


def _pair(codec):
    e, d = codec
    return (lambda v: [e(x) for x in v], lambda v: tuple(d(x) for x in _list_of(v, 2)))


def _list_of(v, n):
    if not isinstance(v, (list, tuple)) or len(v) != n:
        raise InvalidValue(f"expected a list of length {n}")
    return v


_OPT = object()

KINDS: dict[str, tuple[type, list]] = {
    "Dense": (Dense, []),
    "Torsion": (Torsion, [("m", *_INT), ("t", *_F)]),
    "RationalDir": (RationalDir, [("s", *_Q), ("b", *_ANG), ("a", *_ANG)]),
    "SL2Point": (SL2Point, [("v", *_pair(_Q)), ("w", *_pair(_ANG))]),
    "ConstantSL2": (ConstantSL2, [("orbit", *_obj())]),
    "FixedIrrationalV": (FixedIrrationalV, [("order", *_OINT), ("t", *_LIM)]),
    "ScaledE1": (ScaledE1, [("s", *_LIM), ("order_b", *_OINT), ("a", *_ANG, _OPT), ("ratio", *_LIM, _OPT)]),
    "Zero": (Zero, []),
    "Q0": (Q0, [("s", *_Q), ("t", *_Q)]),
    "Q1": (Q1, [("r", *_Q)]),
    "Q2": (Q2, [("r", *_Q)]),
    "Q0Seq": (Q0Seq, [("s", *_LIM), ("t", *_LIM)]),
    "Q1Seq": (Q1Seq, [("r", *_LIM), ("bounded", *_BOOL, _OPT)]),
    "Q2Seq": (Q2Seq, [("r", *_LIM), ("bounded", *_BOOL, _OPT)]),
    "ZeroSeq": (ZeroSeq, []),
    "HeisPrim": (HeisPrim, [("z", *_ANG), ("a", *_ANG, _OPT), ("b", *_ANG, _OPT)]),
    "HeisConst": (HeisConst, [("z", *_ANG), ("a", *_ANG, _OPT), ("b", *_ANG, _OPT)]),
    "HeisOrderEscape": (HeisOrderEscape, [("z", *_ANG)]),
    "HeisIrrationalZ": (HeisIrrationalZ, [("z", *_ANG)]),
    "Pt": (Pt, [("m", *_INT), ("t", *_F)]),
    "Infinity": (Infinity, []),
    "NRConst": (NRConst, [("point", *_obj())]),
    "NRConv": (NRConv, [("m", *_INT), ("t", *_F)]),
    "NREscape": (NREscape, []),
    "PrimZero": (PrimZero, []),
    "Strat1": (Strat1, [("r", *_Q), ("x", *_obj())]),
    "Strat2": (Strat2, [("r", *_Q), ("x", *_obj())]),
    "Strat0": (Strat0, [("s", *_Q), ("t", *_Q), ("j", *_obj("HeisPrim"))]),
    "PrimZeroSeq": (PrimZeroSeq, []),
    "Strat1Seq": (Strat1Seq, [("r", *_LIM), ("x", *_obj())]),
    "Strat2Seq": (Strat2Seq, [("r", *_LIM), ("x", *_obj())]),
    "Strat0Seq": (Strat0Seq, [("s", *_LIM), ("t", *_LIM), ("heis", *_obj()),
                              ("a_view", *_obj(), _OPT), ("b_view", *_obj(), _OPT)]),
    "TrivialChar": (TrivialChar, []),
    "Gamma1Char": (Gamma1Char, [("a", *_ANG), ("b", *_ANG)]),
    "Gamma2Char": (Gamma2Char, [("a", *_ANG), ("b", *_ANG)]),
    "HeisIdeal": (HeisIdeal, [("j", *_obj("HeisPrim"))]),
}

_BY_CLASS = {cls: kind for kind, (cls, _) in KINDS.items()}

# primitive ideals also carry a short stratum tag
STRATUM_TAGS = {"PrimZero": "zero", "Strat1": "s1", "Strat2": "s2", "Strat0": "s0"}
_FROM_STRATUM = {v: k for k, v in STRATUM_TAGS.items()}


def encode(obj) -> dict:
    try:
        kind = _BY_CLASS[type(obj)]
    except KeyError:
        raise InvalidValue(f"no JSON encoding for {type(obj).__name__}") from None
    out = {"kind": kind}
    if kind in STRATUM_TAGS:
        out["stratum"] = STRATUM_TAGS[kind]
    for name, enc, _dec, *opt in KINDS[kind][1]:
        val = getattr(obj, name)
        if val is None and opt:
            continue
        out[name] = enc(val)
    return out


def decode(doc, allowed: tuple[str, ...] | None = None, default_kind: str | None = None):
    """Build the object described by a tagged dict; ``allowed`` restricts the kinds.

    Primitive ideals may be tagged by ``stratum`` instead of ``kind``.
    """
    if not isinstance(doc, dict):
        raise InvalidValue("expected a JSON object")
    doc = dict(doc)
    stratum = doc.pop("stratum", None)
    if stratum is not None:
        if stratum not in _FROM_STRATUM or doc.setdefault("kind", _FROM_STRATUM[stratum]) != _FROM_STRATUM[stratum]:
            raise InvalidValue(f"stratum tag {stratum!r} does not match the kind")
    if default_kind is not None:
        doc.setdefault("kind", default_kind)
    if "kind" not in doc:
        raise InvalidValue("expected an object with a 'kind' field")
    kind = doc["kind"]
    if kind not in KINDS or (allowed is not None and kind not in allowed):
        raise InvalidValue(f"unexpected kind {kind!r}")
    cls, fields = KINDS[kind]
    known = {f[0] for f in fields} | {"kind"}
    extra = set(doc) - known
    if extra:
        raise InvalidValue(f"unknown fields for {kind}: {sorted(extra)}")
    kwargs = {}
    for name, _enc, dec, *opt in fields:
        if dec is _opt_int and name in doc:
            kwargs[name] = _opt_int(doc[name])
            continue
        if name not in doc or doc[name] is None:
            if opt:
                continue
            raise InvalidValue(f"{kind} needs field {name!r}")
        kwargs[name] = dec(doc[name])
    return cls(**kwargs)


def decode_sl3_point(doc) -> SL3Point:
    if not isinstance(doc, dict) or "g" not in doc:
        raise InvalidValue("an SL3 point is {'g': 3x3 matrix}")
    return SL3Point(tuple(tuple(dec_q(x) for x in _list_of(row, 3)) for row in _list_of(doc["g"], 3)))


def encode_sl3_point(p: SL3Point) -> dict:
    return {"g": enc_qmatrix(p.g)}


def decode_heis_elem(doc) -> HeisElem:
    """[x, y, z] or {"x": .., "y": .., "z": ..}."""
    if isinstance(doc, dict):
        return HeisElem(int(doc.get("x", 0)), int(doc.get("y", 0)), int(doc.get("z", 0)))
    return HeisElem(*(int(c) for c in _list_of(doc, 3)))
