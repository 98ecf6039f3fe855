"""Exact arithmetic over Q(theta), torus elements with decidable order, and integer matrices.

theta is a formal transcendental: two elements are equal only when their
reduced numerator/denominator polynomials agree coefficientwise.  A numeric
value is attached only for sign decisions and float output, through a
rational enclosure of a named real constant (pi by default).
"""

from __future__ import annotations

import math
import os
import re
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .errors import InvalidValue, NotPrimitive, NotUnimodular, NumericalFailure, ZeroVector

Poly = tuple  # tuple[Fraction, ...], lowest degree first


def as_fraction(x) -> Fraction:
    """Coerce int / Fraction / rational string ("3/4", "0.25", "-2") to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise InvalidValue(f"not a rational: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidValue(f"not a rational: {x!r}") from exc
    if isinstance(x, QTheta) and x.is_rational():
        return x.rational_value()
    raise InvalidValue(f"not a rational: {x!r}")


# ---------------------------------------------------------------- polynomials

def _trim(p: Iterable[Fraction]) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def _padd(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return _trim((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n))


def _pneg(p: Poly) -> Poly:
    return tuple(-c for c in p)


def _pmul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _trim(out)


def _pscale(p: Poly, c: Fraction) -> Poly:
    return _trim(c * a for a in p) if c else ()


def _pdivmod(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    r = list(p)
    dq, lq = len(q) - 1, q[-1]
    quot = [Fraction(0)] * max(len(p) - dq, 0)
    while len(r) - 1 >= dq and r:
        c = r[-1] / lq
        k = len(r) - 1 - dq
        quot[k] = c
        for i, b in enumerate(q):
            r[k + i] -= c * b
        r = list(_trim(r))
    return _trim(quot), tuple(r)


def _pgcd(p: Poly, q: Poly) -> Poly:
    while q:
        p, q = q, _pdivmod(p, q)[1]
    return _pscale(p, 1 / p[-1]) if p else ()


def _peval(p: Poly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _interval_eval(p: Poly, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Horner evaluation in exact interval arithmetic; the result contains p([lo, hi])."""
    rlo = rhi = Fraction(0)
    for c in reversed(p):
        cands = (rlo * lo, rlo * hi, rhi * lo, rhi * hi)
        rlo, rhi = min(cands) + c, max(cands) + c
    return rlo, rhi


_ONE: Poly = (Fraction(1),)


# ---------------------------------------------------------------- Q(theta)

class QTheta:
    """Element num(theta)/den(theta) of Q(theta) in reduced form with monic denominator.

    Polynomial values (den == 1) are the common case; ``coeffs`` exposes them.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Iterable = (), den: Iterable = _ONE):
        num = _trim(as_fraction(c) for c in num)
        den = _trim(as_fraction(c) for c in den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            den = _ONE
        elif den != _ONE:
            g = _pgcd(num, den)
            if len(g) > 1:
                num = _pdivmod(num, g)[0]
                den = _pdivmod(den, g)[0]
            lead = den[-1]
            if lead != 1:
                num, den = _pscale(num, 1 / lead), _pscale(den, 1 / lead)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *_):
        raise AttributeError("QTheta is immutable")

    @classmethod
    def _raw(cls, num: Poly, den: Poly = _ONE) -> "QTheta":
        obj = object.__new__(cls)
        object.__setattr__(obj, "num", num)
        object.__setattr__(obj, "den", den)
        return obj

    @classmethod
    def from_coeffs(cls, coeffs: Iterable) -> "QTheta":
        return cls(coeffs)

    @classmethod
    def const(cls, q) -> "QTheta":
        return cls._raw(_trim((as_fraction(q),)))

    @classmethod
    def coerce(cls, x) -> "QTheta":
        if isinstance(x, QTheta):
            return x
        if isinstance(x, str):
            return cls.parse(x)
        return cls.const(x)

    @classmethod
    def parse(cls, text: str) -> "QTheta":
        """Parse expressions like ``"1/2 + 3*theta"``, ``"2θ-1"``, ``"(1+theta)/(2-theta)"``."""
        return _Parser(text).parse()

    # -- structure
    def is_polynomial(self) -> bool:
        return self.den == _ONE

    def is_rational(self) -> bool:
        return len(self.num) <= 1 and self.den == _ONE

    def is_zero(self) -> bool:
        return not self.num

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise InvalidValue(f"{self} is not rational")
        return self.num[0] if self.num else Fraction(0)

    @property
    def coeffs(self) -> Poly:
        if not self.is_polynomial():
            raise InvalidValue(f"{self} is not a polynomial in theta")
        return self.num

    def coeff(self, i: int) -> Fraction:
        c = self.coeffs
        return c[i] if i < len(c) else Fraction(0)

    @property
    def degree(self) -> int:
        """Degree of the numerator for polynomials; -1 for zero."""
        return len(self.coeffs) - 1

    # -- arithmetic
    def _binary(self, other):
        if isinstance(other, QTheta):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return QTheta._raw(_trim((Fraction(other),)))
        return None

    def __add__(self, other):
        o = self._binary(other)
        if o is None:
            return NotImplemented
        if self.den == _ONE and o.den == _ONE:
            return QTheta._raw(_padd(self.num, o.num))
        return QTheta(_padd(_pmul(self.num, o.den), _pmul(o.num, self.den)), _pmul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return QTheta._raw(_pneg(self.num), self.den)

    def __sub__(self, other):
        o = self._binary(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._binary(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._binary(other)
        if o is None:
            return NotImplemented
        if self.den == _ONE and o.den == _ONE:
            return QTheta._raw(_pmul(self.num, o.num))
        return QTheta(_pmul(self.num, o.num), _pmul(self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._binary(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by zero in Q(theta)")
        return QTheta(_pmul(self.num, o.den), _pmul(self.den, o.num))

    def __rtruediv__(self, other):
        o = self._binary(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (QTheta.const(1) / self) ** (-k)
        out = QTheta.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        o = self._binary(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self.is_rational():
            return hash(self.rational_value())
        return hash((self.num, self.den))

    def __bool__(self):
        return bool(self.num)

    # -- evaluation
    def evaluate(self, x) -> Fraction:
        x = as_fraction(x)
        return _peval(self.num, x) / _peval(self.den, x)

    def interval(self, enc: "ThetaEnclosure") -> tuple[Fraction, Fraction] | None:
        """Enclosure of the value, or None if the denominator interval meets 0."""
        nlo, nhi = _interval_eval(self.num, enc.lo, enc.hi)
        dlo, dhi = _interval_eval(self.den, enc.lo, enc.hi)
        if dlo <= 0 <= dhi:
            return None
        cands = (nlo / dlo, nlo / dhi, nhi / dlo, nhi / dhi)
        return min(cands), max(cands)

    def to_float(self, enc: "ThetaEnclosure | None" = None) -> float:
        enc = enc or DEFAULT_ENCLOSURE
        return float(self.evaluate((enc.lo + enc.hi) / 2))

    # -- text
    def __repr__(self):
        return f"QTheta({self})"

    def __str__(self):
        if self.den == _ONE:
            return _poly_str(self.num)
        return f"({_poly_str(self.num)})/({_poly_str(self.den)})"


def _poly_str(p: Poly) -> str:
    if not p:
        return "0"
    parts = []
    for i, c in enumerate(p):
        if c == 0:
            continue
        mono = "" if i == 0 else ("theta" if i == 1 else f"theta^{i}")
        if i == 0:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}*{mono}"
        sgn = "-" if c < 0 else "+"
        parts.append((sgn, body))
    head_sign, head = parts[0]
    out = ("-" if head_sign == "-" else "") + head
    for sgn, body in parts[1:]:
        out += f" {sgn} {body}"
    return out


class _Parser:
    _token = re.compile(r"\s*(?:(\d+(?:\.\d*)?(?:/\d+)?)|(theta|θ|t)|(.))")

    def __init__(self, text: str):
        self.tokens: list[tuple[str, str]] = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = self._token.match(text, pos)
            if m is None or m.end() == pos:
                break
            num, sym, op = m.groups()
            if num is not None:
                self.tokens.append(("num", num))
            elif sym is not None:
                self.tokens.append(("theta", sym))
            elif op.strip():
                self.tokens.append(("op", op))
            pos = m.end()
        self.i = 0
        self.text = text

    def _peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", "")

    def _take(self):
        tok = self._peek()
        self.i += 1
        return tok

    def _fail(self):
        raise InvalidValue(f"cannot parse Q(theta) expression {self.text!r}")

    def parse(self) -> QTheta:
        if not self.tokens:
            self._fail()
        val = self._expr()
        if self._peek()[0] != "end":
            self._fail()
        return val

    def _expr(self) -> QTheta:
        val = self._term()
        while self._peek() in (("op", "+"), ("op", "-")):
            op = self._take()[1]
            rhs = self._term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def _term(self) -> QTheta:
        if self._peek() in (("op", "+"), ("op", "-")):
            op = self._take()[1]
            val = self._term()
            return -val if op == "-" else val
        val = self._power()
        while True:
            tok = self._peek()
            if tok in (("op", "*"), ("op", "/")):
                self._take()
                rhs = self._power()
                if tok[1] == "*":
                    val = val * rhs
                else:
                    try:
                        val = val / rhs
                    except ZeroDivisionError:
                        self._fail()
            elif tok[0] in ("theta", "num") or tok == ("op", "("):
                val = val * self._power()  # implicit product, e.g. "2theta"
            else:
                return val

    def _power(self) -> QTheta:
        val = self._atom()
        if self._peek() == ("op", "^"):
            self._take()
            kind, text = self._take()
            if kind != "num" or not text.isdigit():
                self._fail()
            val = val ** int(text)
        return val

    def _atom(self) -> QTheta:
        kind, text = self._take()
        if kind == "num":
            try:
                return QTheta.const(Fraction(text))
            except (ValueError, ZeroDivisionError):
                self._fail()
        if kind == "theta":
            return THETA
        if (kind, text) == ("op", "("):
            val = self._expr()
            if self._take() != ("op", ")"):
                self._fail()
            return val
        self._fail()


THETA = QTheta._raw((Fraction(0), Fraction(1)))
ZERO = QTheta._raw(())
ONE = QTheta._raw(_ONE)


def qtheta_is_rational(x: QTheta) -> bool:
    return QTheta.coerce(x).is_rational()


# ---------------------------------------------------------------- enclosures

_MP_LOCK = threading.Lock()
_CONSTANTS = ("pi", "e")


def _constant_interval(name: str, prec: int) -> tuple[Fraction, Fraction]:
    from mpmath import iv
    from mpmath.libmp import to_rational

    with _MP_LOCK:
        old = iv.prec
        iv.prec = prec
        try:
            val = iv.pi if name == "pi" else iv.e
            lo, hi = val._mpi_
        finally:
            iv.prec = old
    return Fraction(*to_rational(lo)), Fraction(*to_rational(hi))


@dataclass(frozen=True)
class ThetaEnclosure:
    """Rational interval (lo, hi) containing the numeric value chosen for theta."""

    lo: Fraction
    hi: Fraction
    constant: str = "pi"

    def __post_init__(self):
        object.__setattr__(self, "lo", as_fraction(self.lo))
        object.__setattr__(self, "hi", as_fraction(self.hi))
        if self.constant not in _CONSTANTS:
            raise InvalidValue(f"unknown constant {self.constant!r}; choose from {_CONSTANTS}")
        if not self.lo < self.hi:
            raise InvalidValue("enclosure must satisfy lo < hi")
        prec = 64
        while True:
            clo, chi = _constant_interval(self.constant, prec)
            if self.lo < clo and chi < self.hi:
                return
            if chi <= self.lo or clo >= self.hi:
                raise InvalidValue(f"({self.lo}, {self.hi}) does not bracket {self.constant}")
            prec *= 2
            if prec > 1 << 16:
                raise InvalidValue("enclosure endpoint too close to the constant")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def refine(self) -> "ThetaEnclosure":
        """A strictly narrower enclosure (roughly squares the relative accuracy)."""
        bits = max(self.width.denominator.bit_length() - self.width.numerator.bit_length(), 1)
        clo, chi = _constant_interval(self.constant, 2 * bits + 32)
        return ThetaEnclosure(max(self.lo, clo), min(self.hi, chi), self.constant)


DEFAULT_ENCLOSURE = ThetaEnclosure(Fraction(314159, 100000), Fraction(314160, 100000))


def parse_enclosure(text: str, constant: str = "pi") -> ThetaEnclosure:
    """Parse ``"lo:hi"``, ``"lo,hi"`` or ``"lo/hi"`` (the last only with decimal endpoints)."""
    text = text.strip()
    for sep in (":", ",", " "):
        if sep in text:
            lo, hi = text.split(sep, 1)
            break
    else:
        if text.count("/") != 1:
            raise InvalidValue(f"cannot parse enclosure {text!r}")
        lo, hi = text.split("/")
    return ThetaEnclosure(as_fraction(lo), as_fraction(hi), constant)


def enclosure_from_env(default: ThetaEnclosure = DEFAULT_ENCLOSURE) -> ThetaEnclosure:
    text = os.environ.get("PRIMATLAS_THETA")
    return parse_enclosure(text) if text else default


def sign(x, enc: ThetaEnclosure | None = None, max_refinements: int = 40) -> int:
    """Sign of x at the numeric theta; refines the enclosure until the answer is certain."""
    x = QTheta.coerce(x)
    if x.is_zero():
        return 0
    if x.is_rational():
        return 1 if x.rational_value() > 0 else -1
    enc = enc or DEFAULT_ENCLOSURE
    for _ in range(max_refinements):
        box = x.interval(enc)
        if box is not None:
            lo, hi = box
            if lo > 0:
                return 1
            if hi < 0:
                return -1
        enc = enc.refine()
    raise NumericalFailure(f"could not decide the sign of {x}")


def is_positive(x, enc: ThetaEnclosure | None = None) -> bool:
    return sign(x, enc) > 0


# ---------------------------------------------------------------- torus

@dataclass(frozen=True)
class TorusElem:
    """Angle a + b*theta modulo 1; a is kept in [0, 1)."""

    a: Fraction
    b: Fraction = Fraction(0)

    def __post_init__(self):
        a, b = as_fraction(self.a), as_fraction(self.b)
        object.__setattr__(self, "a", a - math.floor(a))
        object.__setattr__(self, "b", b)

    @classmethod
    def from_qtheta(cls, q) -> "TorusElem":
        q = QTheta.coerce(q)
        if not q.is_polynomial() or q.degree > 1:
            raise InvalidValue(f"torus coordinate must be of the form a + b*theta, got {q}")
        return cls(q.coeff(0), q.coeff(1))

    def to_qtheta(self) -> QTheta:
        return QTheta((self.a, self.b))

    @property
    def order(self) -> int | None:
        """Torsion order; None stands for infinite order."""
        return self.a.denominator if self.b == 0 else None

    def is_torsion(self) -> bool:
        return self.b == 0

    def __add__(self, other: "TorusElem") -> "TorusElem":
        return TorusElem(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "TorusElem") -> "TorusElem":
        return TorusElem(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "TorusElem":
        return TorusElem(-self.a, -self.b)

    def __mul__(self, k: int) -> "TorusElem":
        if not isinstance(k, int):
            return NotImplemented
        return TorusElem(self.a * k, self.b * k)

    __rmul__ = __mul__

    def conj(self) -> "TorusElem":
        return -self

    def principal_root(self, n: int) -> "TorusElem":
        """The n-th root e^{2 pi i (a + b theta)/n} with a taken in [0, 1)."""
        return TorusElem(self.a / n, self.b / n)

    def __str__(self):
        return str(self.to_qtheta())


def angle(x) -> TorusElem:
    if isinstance(x, TorusElem):
        return x
    return TorusElem.from_qtheta(x)


# ---------------------------------------------------------------- integer matrices

@dataclass(frozen=True)
class IntMatrix:
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in r) for r in self.rows)
        if not rows or any(len(r) != len(rows) for r in rows):
            raise InvalidValue("IntMatrix must be square")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.rows)

    @cached_property
    def det(self) -> int:
        return int(mat_det(self.rows))

    def is_unimodular(self) -> bool:
        return abs(self.det) == 1

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.rows)))

    def inverse(self) -> "IntMatrix":
        if not self.is_unimodular():
            raise NotUnimodular(f"det = {self.det}")
        return IntMatrix(tuple(tuple(int(v) for v in r) for r in mat_inv(self.rows)))

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            return IntMatrix(mat_mul(self.rows, other.rows))
        return mat_mul(self.rows, other)

    def __rmatmul__(self, other):
        return mat_mul(other, self.rows)

    def __neg__(self):
        return IntMatrix(tuple(tuple(-v for v in r) for r in self.rows))

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


# ---------------------------------------------------------------- generic matrix helpers

def mat_mul(A, B):
    """Product of row-major matrices whose entries support + and *."""
    B_cols = list(zip(*B))
    return tuple(tuple(_dot(r, c) for c in B_cols) for r in A)


def _dot(r, c):
    acc = 0
    for x, y in zip(r, c):
        if x and y:
            acc = acc + x * y
    return acc


def mat_vec(A, v):
    return tuple(_dot(r, v) for r in A)


def mat_det(A):
    n = len(A)
    if n == 1:
        return A[0][0]
    if n == 2:
        return A[0][0] * A[1][1] - A[0][1] * A[1][0]
    if n == 3:
        return (A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1])
                - A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0])
                + A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]))
    raise InvalidValue("only 1x1, 2x2 and 3x3 determinants are supported")


def mat_adj(A):
    n = len(A)
    if n == 2:
        return ((A[1][1], -A[0][1]), (-A[1][0], A[0][0]))
    if n == 3:
        def cof(i, j):
            r = [k for k in range(3) if k != i]
            c = [k for k in range(3) if k != j]
            minor = A[r[0]][c[0]] * A[r[1]][c[1]] - A[r[0]][c[1]] * A[r[1]][c[0]]
            return minor if (i + j) % 2 == 0 else -minor
        return tuple(tuple(cof(j, i) for j in range(3)) for i in range(3))
    raise InvalidValue("only 2x2 and 3x3 inverses are supported")


def mat_inv(A):
    d = mat_det(A)
    if d == 0:
        raise ZeroDivisionError("singular matrix")
    adj = mat_adj(A)
    if isinstance(d, int) and abs(d) == 1:
        return tuple(tuple(x * d for x in r) for r in adj)
    return tuple(tuple(x / d for x in r) for r in adj)


def qmat(rows) -> tuple:
    """Coerce a nested list of numbers / strings / QTheta into a QTheta matrix."""
    return tuple(tuple(QTheta.coerce(x) for x in r) for r in rows)


def identity_q(n: int) -> tuple:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


# ---------------------------------------------------------------- lattice utilities

def egcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with x*a + y*b = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def primitive_part(v: Sequence[int]) -> tuple[int, ...]:
    """Divide by the gcd and make the first nonzero entry positive."""
    g = 0
    for x in v:
        g = math.gcd(g, x)
    if g == 0:
        raise ZeroVector("zero vector has no primitive part")
    out = [x // g for x in v]
    first = next(x for x in out if x)
    return tuple(-x for x in out) if first < 0 else tuple(out)


def rational_direction(v: Sequence) -> tuple[int, ...] | None:
    """Primitive integer vector p with v in R*p, or None when v has irrational direction.

    The sign is normalized so that the first nonzero entry is positive.
    """
    v = [QTheta.coerce(x) for x in v]
    pivot = next((x for x in v if not x.is_zero()), None)
    if pivot is None:
        raise ZeroVector("zero vector has no direction")
    ratios = []
    for x in v:
        r = x / pivot
        if not r.is_rational():
            return None
        ratios.append(r.rational_value())
    den = math.lcm(*(r.denominator for r in ratios))
    return primitive_part([int(r * den) for r in ratios])


def extend_to_unimodular(row: Sequence[int], slot: int) -> IntMatrix:
    """Matrix in SL_n(Z) whose row number ``slot`` (1-based) equals ``row``."""
    row = tuple(int(x) for x in row)
    n = len(row)
    if not 1 <= slot <= n:
        raise InvalidValue(f"slot must be in 1..{n}")
    g = 0
    for x in row:
        g = math.gcd(g, x)
    if g != 1:
        raise NotPrimitive(f"gcd of {row} is {g}")
    k = slot - 1
    if n == 1:
        if row[0] != 1:
            raise NotUnimodular("1x1 row must be (1)")
        return IntMatrix(((1,),))
    if row == tuple(int(i == k) for i in range(n)):
        return IntMatrix.identity(n)
    if n == 2:
        a, b = row
        _, x, y = egcd(a, b)
        other = (y, -x) if slot == 2 else (-y, x)
        rows = (other, row) if slot == 2 else (row, other)
        return IntMatrix(rows)
    # Column operations W with row*W = +-e1, tracking W^{-1}; then row = +-(first row of W^{-1}).
    v = list(row)
    winv = [[int(i == j) for j in range(n)] for i in range(n)]
    while sum(1 for x in v if x) > 1:
        i = min((j for j in range(n) if v[j]), key=lambda j: abs(v[j]))
        for j in range(n):
            if j != i and v[j]:
                q = v[j] // v[i]
                v[j] -= q * v[i]
                winv[i] = [p + q * r for p, r in zip(winv[i], winv[j])]
    i = next(j for j in range(n) if v[j])
    winv[0], winv[i] = winv[i], winv[0]
    if v[i] < 0:
        winv[0] = [-x for x in winv[0]]
    assert tuple(winv[0]) == row
    rows = winv[1:]
    rows.insert(k, winv[0])
    M = IntMatrix(tuple(tuple(r) for r in rows))
    if M.det < 0:
        flip = 0 if k != 0 else 1
        rows[flip] = [-x for x in rows[flip]]
        M = IntMatrix(tuple(tuple(r) for r in rows))
    assert M.det == 1 and M.rows[k] == row
    return M
