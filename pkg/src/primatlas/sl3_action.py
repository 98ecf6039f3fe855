"""SL3(Z) acting on SL3(R)/U3(R): strata, canonical quasi-orbits, stabilizers and limits.

A coset gU lies in Gamma P2 when the first column of g has rational direction and
in Gamma P1 when the last row of g^{-1} does.  Reducing g by an integer matrix to a
positive-diagonal upper triangular (or block triangular) form h, the diagonal
entries of h are well defined because Gamma meets the positive Borel only in the
unipotent Heisenberg group.  They give the parameters:

    both tests pass      Q0(h11, 1/h33)
    only P1              Q1(1/h33)
    only P2              Q2(h11)
    neither              Zero
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from .errors import CaseMismatch, InvalidValue, NotUnimodular, StratumMismatch, UnsupportedProfile
from .exactnum import (
    IntMatrix, QTheta, ThetaEnclosure, as_fraction, extend_to_unimodular, identity_q, mat_det,
    mat_inv, mat_mul, qmat, rational_direction, sign, THETA,
)
from .sl2_action import INF, limit_value

# ---------------------------------------------------------------- points

HEIS_X = IntMatrix(((1, 0, 0), (0, 1, 1), (0, 0, 1)))
HEIS_Y = IntMatrix(((1, 1, 0), (0, 1, 0), (0, 0, 1)))
HEIS_Z = IntMatrix(((1, 0, 1), (0, 1, 0), (0, 0, 1)))


@dataclass(frozen=True)
class SL3Point:
    """The coset gU for g in SL3 with entries in Q(theta)."""

    g: tuple

    def __post_init__(self):
        g = qmat(self.g)
        if len(g) != 3 or any(len(r) != 3 for r in g):
            raise InvalidValue("SL3Point needs a 3x3 matrix")
        if mat_det(g) != 1:
            raise NotUnimodular("det(g) must be exactly 1")
        object.__setattr__(self, "g", g)

    @property
    def inverse(self) -> tuple:
        return mat_inv(self.g)


def A(s, t) -> SL3Point:
    s, t = QTheta.coerce(s), QTheta.coerce(t)
    return SL3Point(((s, 0, 0), (0, t / s, 0), (0, 0, 1 / t)))


def A1(r, theta=THETA) -> SL3Point:
    r = QTheta.coerce(r)
    return SL3Point(((1, 0, 0), (theta, r, 0), (0, 0, 1 / r)))


def A2(r, theta=THETA) -> SL3Point:
    r = QTheta.coerce(r)
    return SL3Point(((r, 0, 0), (0, 1, 0), (0, theta, 1 / r)))


def act(gamma: IntMatrix, p: SL3Point) -> SL3Point:
    return SL3Point(mat_mul(gamma.rows, p.g))


def is_upper_unitriangular(m) -> bool:
    return all((m[i][j] == (1 if i == j else 0)) for i in range(3) for j in range(i + 1))


# ---------------------------------------------------------------- quasi-orbits

@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class Q0:
    s: QTheta
    t: QTheta

    def __post_init__(self):
        _positive(self, "s", "t")


@dataclass(frozen=True)
class Q1:
    r: QTheta

    def __post_init__(self):
        _positive(self, "r")


@dataclass(frozen=True)
class Q2:
    r: QTheta

    def __post_init__(self):
        _positive(self, "r")


def _positive(obj, *names):
    for n in names:
        v = QTheta.coerce(getattr(obj, n))
        if sign(v) <= 0:
            raise InvalidValue(f"{n} must be positive, got {v}")
        object.__setattr__(obj, n, v)


SL3QuasiOrbit = Zero | Q0 | Q1 | Q2


@dataclass(frozen=True)
class Reduction:
    """gamma with h = gamma g in the canonical block form of the point's stratum."""

    stratum: Literal["Q0", "Q1", "Q2", "Zero"]
    gamma: IntMatrix
    h: tuple
    orbit: SL3QuasiOrbit


def _col_to_e1(prim) -> IntMatrix:
    """gamma in SL3(Z) with gamma * prim = e1."""
    return extend_to_unimodular(prim, 1).transpose().inverse()


def _sign_fix(h, enc, fix_first: bool, fix_last: bool) -> IntMatrix:
    e1 = sign(h[0][0], enc) if fix_first else 1
    e3 = sign(h[2][2], enc) if fix_last else 1
    if e1 > 0 and e3 > 0:
        return IntMatrix.identity(3)
    if e1 < 0 and e3 < 0:
        return IntMatrix(((-1, 0, 0), (0, 1, 0), (0, 0, -1)))
    if e1 < 0:
        return IntMatrix(((-1, 0, 0), (0, -1, 0), (0, 0, 1)))
    return IntMatrix(((1, 0, 0), (0, -1, 0), (0, 0, -1)))


def sl3_reduce(p: SL3Point, enc: ThetaEnclosure | None = None) -> Reduction:
    g = p.g
    first_col = rational_direction([g[i][0] for i in range(3)])
    last_row = rational_direction(list(p.inverse[2]))
    if first_col is not None and last_row is not None:
        gamma = _col_to_e1(first_col)
        row = [sum(last_row[i] * gi for i, gi in enumerate(col)) for col in zip(*gamma.inverse().rows)]
        # row = last_row * gamma^{-1}, whose first entry vanishes
        assert row[0] == 0
        n2 = extend_to_unimodular(row[1:], 2)
        gamma = IntMatrix(((1, 0, 0), (0,) + n2.rows[0], (0,) + n2.rows[1])) @ gamma
        h = mat_mul(gamma.rows, g)
        fix = _sign_fix(h, enc, True, True)
        gamma = fix @ gamma
        h = mat_mul(gamma.rows, g)
        return Reduction("Q0", gamma, h, Q0(h[0][0], 1 / h[2][2]))
    if last_row is not None:
        gamma = extend_to_unimodular(last_row, 3)
        h = mat_mul(gamma.rows, g)
        gamma = _sign_fix(h, enc, False, True) @ gamma
        h = mat_mul(gamma.rows, g)
        return Reduction("Q1", gamma, h, Q1(1 / h[2][2]))
    if first_col is not None:
        gamma = _col_to_e1(first_col)
        h = mat_mul(gamma.rows, g)
        gamma = _sign_fix(h, enc, True, False) @ gamma
        h = mat_mul(gamma.rows, g)
        return Reduction("Q2", gamma, h, Q2(h[0][0]))
    return Reduction("Zero", IntMatrix.identity(3), g, Zero())


def sl3_classify(p: SL3Point, enc: ThetaEnclosure | None = None) -> SL3QuasiOrbit:
    return sl3_reduce(p, enc).orbit


# ---------------------------------------------------------------- stabilizers

_NAMED = {"H3": (HEIS_X, HEIS_Y, HEIS_Z), "Gamma1": (HEIS_X, HEIS_Z), "Gamma2": (HEIS_Y, HEIS_Z), "Trivial": ()}
_TAG = {"Q0": "H3", "Q1": "Gamma1", "Q2": "Gamma2", "Zero": "Trivial"}


@dataclass(frozen=True)
class StabilizerInfo:
    """Stabilizer = conjugator^{-1} * (named subgroup) * conjugator."""

    tag: Literal["H3", "Gamma1", "Gamma2", "Trivial"]
    conjugator: IntMatrix
    generators: tuple


def stabilizes(gamma: IntMatrix, p: SL3Point) -> bool:
    """Exact test g^{-1} gamma g in U."""
    return is_upper_unitriangular(mat_mul(p.inverse, mat_mul(gamma.rows, p.g)))


def sl3_stabilizer(p: SL3Point, enc: ThetaEnclosure | None = None) -> StabilizerInfo:
    red = sl3_reduce(p, enc)
    tag = _TAG[red.stratum]
    inv = red.gamma.inverse()
    gens = tuple(inv @ sigma @ red.gamma for sigma in _NAMED[tag])
    for gen in gens:
        if not stabilizes(gen, p):
            raise AssertionError("stabilizer generator failed the membership test")
    return StabilizerInfo(tag, red.gamma, gens)


# ---------------------------------------------------------------- limits

@dataclass(frozen=True)
class Q0Seq:
    """Q0(s_n, t_n) with s_n -> s, t_n -> t in [0, INF]."""

    s: object
    t: object

    def __post_init__(self):
        object.__setattr__(self, "s", limit_value(self.s))
        object.__setattr__(self, "t", limit_value(self.t))


@dataclass(frozen=True)
class Q1Seq:
    """Q1(r_n) with r_n -> r in [0, INF]; ``bounded`` means bounded away from zero."""

    r: object
    bounded: bool | None = None

    def __post_init__(self):
        _check_bounded(self)


@dataclass(frozen=True)
class Q2Seq:
    r: object
    bounded: bool | None = None

    def __post_init__(self):
        _check_bounded(self)


@dataclass(frozen=True)
class ZeroSeq:
    """The constant sequence at the dense point."""


def _check_bounded(obj):
    r = limit_value(obj.r)
    object.__setattr__(obj, "r", r)
    positive = r is INF or sign(r) > 0
    if obj.bounded is None:
        object.__setattr__(obj, "bounded", positive)
    elif obj.bounded != positive:
        raise UnsupportedProfile("boundedAwayFromZero contradicts the limit of r_n")


SL3SeqProfile = Q0Seq | Q1Seq | Q2Seq | ZeroSeq


def _is_zero(x) -> bool:
    return x is not INF and x == 0


def _same(x, y) -> bool:
    return x is not INF and x == y


def sl3_quasiorbit_limit(profile: SL3SeqProfile, target, enc: ThetaEnclosure | None = None) -> bool:
    if isinstance(target, SL3Point):
        target = sl3_classify(target, enc)
    if isinstance(profile, ZeroSeq):
        return True
    if isinstance(profile, Q0Seq):
        s0, t0 = profile.s, profile.t
        if _is_zero(s0) and _is_zero(t0):
            return True
        if isinstance(target, Zero):
            return False
        if isinstance(target, Q1):
            return _is_zero(s0) and _same(t0, target.r)
        if isinstance(target, Q2):
            return _same(s0, target.r) and _is_zero(t0)
        if isinstance(target, Q0):
            return (_is_zero(s0) or _same(s0, target.s)) and (_is_zero(t0) or _same(t0, target.t))
    elif isinstance(profile, (Q1Seq, Q2Seq)):
        if not profile.bounded:
            return True  # r_n -> 0: pair with any s_n -> 0 and every point is a limit
        if isinstance(target, Zero):
            return False
        own, other = (Q1, Q2) if isinstance(profile, Q1Seq) else (Q2, Q1)
        if isinstance(target, other):
            return False
        if isinstance(target, own):
            return _same(profile.r, target.r)
        if isinstance(target, Q0):
            return _same(profile.r, target.t if own is Q1 else target.s)
    else:
        raise UnsupportedProfile(f"unsupported SL3 profile {profile!r}")
    raise InvalidValue(f"not an SL3 quasi-orbit: {target!r}")


# ---------------------------------------------------------------- witnesses

def nearest_odd(x: Fraction) -> int:
    """Odd integer closest to x; ties go to the larger one."""
    k = math.floor((x - 1) / 2 + Fraction(1, 2))
    return 2 * k + 1


def _modd_block(m: int):
    n = (m - 1) // 2
    return ((m, n), (2, 1)), n


def _embed(block, at: int):
    """3x3 matrix with a 2x2 block on rows/cols (at, at+1) (0-based) and 1 elsewhere."""
    out = [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]
    for i in range(2):
        for j in range(2):
            out[at + i][at + j] = block[i][j]
    return tuple(tuple(r) for r in out)


@dataclass(frozen=True)
class SL3Witness:
    gamma: IntMatrix
    u: tuple
    product: tuple
    m: int
    k: int
    residual: float


def _diag(s, t):
    return ((s, 0, 0), (0, t / s, 0), (0, 0, 1 / t))


def sl3_witness(case: Literal["i", "ii"], s_n, t_n, s=1, t=1) -> SL3Witness:
    """gamma A(s_n, t_n) u approximating A(s, t) via two odd-multiplier steps.

    Case "i" needs t_n/s_n >= 1, case "ii" needs t_n/s_n <= 1.  The multipliers are
    m = nearest odd to s/s_n and k = nearest odd to t/t_n.
    """
    s_n, t_n, s, t = (as_fraction(x) for x in (s_n, t_n, s, t))
    if min(s_n, t_n, s, t) <= 0:
        raise InvalidValue("all parameters must be positive")
    ratio = t_n / s_n
    if case == "i" and ratio < 1 or case == "ii" and ratio > 1:
        raise CaseMismatch(f"t_n/s_n = {ratio} does not fit case {case}")
    if case not in ("i", "ii"):
        raise InvalidValue(f"unknown case {case!r}")
    m, k = nearest_odd(s / s_n), nearest_odd(t / t_n)
    gm, nm = _modd_block(m)
    gk, nk = _modd_block(k)
    if case == "i":
        # block (1,2) acts on diag(s_n, t_n/s_n); then block (2,3) on diag(t_n/(m s_n), 1/t_n)
        a1, b1 = s_n, t_n / s_n
        a2, b2 = t_n / (m * s_n), 1 / t_n
        g_first, u_first = _embed(gm, 0), _embed(((1, -nm * b1 / (m * a1)), (0, 1)), 0)
        g_second, u_second = _embed(gk, 1), _embed(((1, -nk * b2 / (k * a2)), (0, 1)), 1)
        expected = ((m * s_n, 0, 0),
                    (2 * k * s_n, k * t_n / (m * s_n), 0),
                    (4 * s_n, 2 * t_n / (m * s_n), 1 / (k * t_n)))
    else:
        a1, b1 = t_n / s_n, 1 / t_n
        a2, b2 = s_n, k * t_n / s_n
        g_first, u_first = _embed(gk, 1), _embed(((1, -nk * b1 / (k * a1)), (0, 1)), 1)
        g_second, u_second = _embed(gm, 0), _embed(((1, -nm * b2 / (m * a2)), (0, 1)), 0)
        expected = ((m * s_n, 0, 0),
                    (2 * s_n, k * t_n / (m * s_n), 0),
                    (0, 2 * t_n / s_n, 1 / (k * t_n)))
    gamma = IntMatrix(mat_mul(g_second, g_first))
    u = mat_mul(u_first, u_second)
    product = mat_mul(mat_mul(gamma.rows, _diag(s_n, t_n)), u)
    expected = tuple(tuple(Fraction(x) for x in r) for r in expected)
    if gamma.det != 1 or product != expected or not is_upper_unitriangular(u):
        raise AssertionError("witness closed form failed")  # unreachable for valid input
    target = _diag(s, t)
    residual = max(abs(float(product[i][j] - target[i][j])) for i in range(3) for j in range(3))
    return SL3Witness(gamma, u, product, m, k, residual)


# ---------------------------------------------------------------- corner convergence

def _in_Q(gamma: IntMatrix, stratum: int) -> bool:
    if stratum == 2:
        return tuple(r[0] for r in gamma.rows) == (1, 0, 0)
    return gamma.rows[2] == (0, 0, 1)


def _in_P_plus(g, stratum: int, enc) -> bool:
    if stratum == 2:
        return g[1][0] == 0 and g[2][0] == 0 and sign(g[0][0], enc) > 0
    return g[2][0] == 0 and g[2][1] == 0 and sign(g[2][2], enc) > 0


def cornerconv_check(samples, g: SL3Point, stratum: int, delta, enc: ThetaEnclosure | None = None,
                     tol: float = 0.05) -> bool:
    """Necessary conditions for gamma_n g_n U -> g U along the listed samples.

    On the second half of the samples: every gamma_n lies in Q_i, the corner errors
    |corner(g_n) - corner(g)| are non-increasing, and the final error is below ``tol``.
    The corner is g_33 for stratum 1 and g_11 for stratum 2, evaluated numerically.
    """
    if stratum not in (1, 2):
        raise InvalidValue("stratum must be 1 or 2")
    if not samples:
        raise InvalidValue("need at least one sample")
    delta = as_fraction(delta)
    if not _in_P_plus(g.g, stratum, enc):
        raise StratumMismatch(f"target is not in P_{stratum},+")
    ci = (2, 2) if stratum == 1 else (0, 0)

    def corner(m):
        return m[ci[0]][ci[1]].to_float(enc)

    errors = []
    tail = samples[len(samples) // 2:]
    for gamma, gn in samples:
        if not _in_P_plus(gn.g, stratum, enc):
            raise StratumMismatch(f"sample is not in P_{stratum},+")
        c = gn.g[ci[0]][ci[1]]
        bound = 1 / c if stratum == 1 else c
        if sign(bound - delta, enc) <= 0:
            raise InvalidValue("corner entries must stay above delta")
    for gamma, gn in tail:
        if not _in_Q(gamma, stratum):
            return False
        errors.append(abs(corner(gn.g) - corner(g.g)))
    monotone = all(b <= a + 1e-12 for a, b in zip(errors, errors[1:]))
    return monotone and errors[-1] <= tol
