"""Primitive ideals of SL3(Z) x C0(SL3(R)/U3(R)): coordinates, induction and convergence.

Points
    Zero, Strat1(r, x), Strat2(r, x) with x in (N x R)^-, and Strat0(s, t, J) with J a
    primitive ideal of the Heisenberg group.

(N x R)^-
    Pairs (m, t) plus a point Infinity.  Closed sets are the empty set, the whole
    space and the compact subsets of N x R.  A sequence escaping every compact set
    therefore converges to every point.

Characters of the stabilizers Gamma1 = <X, Z> and Gamma2 = <Y, Z> are written as
angle pairs (value on X or Y, value on Z) relative to the generators returned by
``sl3_stabilizer``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvalidValue, PartialKnowledge, StabilizerMismatch, UnsupportedProfile
from .exactnum import (
    IntMatrix, QTheta, ThetaEnclosure, TorusElem, angle, as_fraction, mat_mul, sign, THETA,
)
from .heisenberg import HeisConst, HeisIrrationalZ, HeisOrderEscape, HeisPrim, heis_prim_converges
from .sl2_action import (
    INF, ConstantSL2, Dense, FixedIrrationalV, RationalDir, ScaledE1, SL2Point, Torsion,
    limit_value, sl2_classify, sl2_limit,
)
from .sl3_action import (
    HEIS_X, HEIS_Y, HEIS_Z, Q0, Q1, Q2, Q0Seq, Q1Seq, Q2Seq, SL3Point, Zero, ZeroSeq, act,
    sl3_quasiorbit_limit, sl3_reduce,
)

# ---------------------------------------------------------------- (N x R)^-


@dataclass(frozen=True)
class Pt:
    m: int
    t: Fraction

    def __post_init__(self):
        if int(self.m) < 1:
            raise InvalidValue("m must be a positive integer")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "t", as_fraction(self.t))


@dataclass(frozen=True)
class Infinity:
    pass


NRBarPoint = Pt | Infinity


@dataclass(frozen=True)
class NRConst:
    point: NRBarPoint


@dataclass(frozen=True)
class NRConv:
    """m_n = m constant and t_n -> t."""

    m: int
    t: Fraction

    def __post_init__(self):
        Pt(self.m, self.t)
        object.__setattr__(self, "t", as_fraction(self.t))


@dataclass(frozen=True)
class NREscape:
    """The sequence leaves every compact subset of N x R."""


NRProfile = NRConst | NRConv | NREscape


def nrbar_limit(profile: NRProfile, target: NRBarPoint) -> bool:
    if isinstance(profile, NREscape):
        return True
    if isinstance(profile, NRConst):
        if isinstance(profile.point, Infinity):
            return True  # the closure of {Infinity} is everything
        return profile.point == target
    if isinstance(profile, NRConv):
        return target == Pt(profile.m, profile.t)
    raise UnsupportedProfile(f"unsupported (N x R)^- profile {profile!r}")


def q_theta(z1, z2) -> NRBarPoint:
    """Write (z1, z2) = z0 + t (1, theta) with z0 torsion if possible; return (ord z0, t)."""
    z1, z2 = angle(z1), angle(z2)
    if z1.b != 0:
        return Infinity()
    t = z2.b
    z0 = (TorusElem(z1.a - t), TorusElem(z2.a))
    return Pt(math.lcm(z0[0].order, z0[1].order), t)


def q_theta_section(x: NRBarPoint) -> tuple[TorusElem, TorusElem]:
    """A point z of T^2 with q_theta(z) = x."""
    if isinstance(x, Infinity):
        return TorusElem(0, 1), TorusElem(0)
    return TorusElem(Fraction(1, x.m) + x.t), TorusElem(0, x.t)


def nr_orbit(x: NRBarPoint):
    """The quasi-orbit Q(v_theta, z) for any z with q_theta(z) = x."""
    return Dense() if isinstance(x, Infinity) else Torsion(x.m, x.t)


def nr_sl2_profile(profile: NRProfile):
    """Profile of Q(v_theta, z_n) for z_n with q_theta(z_n) = x_n."""
    if isinstance(profile, NRConst):
        return ConstantSL2(nr_orbit(profile.point))
    if isinstance(profile, NRConv):
        return FixedIrrationalV(profile.m, profile.t)
    if isinstance(profile, NREscape):
        return FixedIrrationalV(None, INF)
    raise UnsupportedProfile(f"unsupported (N x R)^- profile {profile!r}")


# ---------------------------------------------------------------- primitive ideals


@dataclass(frozen=True)
class PrimZero:
    pass


@dataclass(frozen=True)
class Strat1:
    r: QTheta
    x: NRBarPoint

    def __post_init__(self):
        _pos(self, "r")


@dataclass(frozen=True)
class Strat2:
    r: QTheta
    x: NRBarPoint

    def __post_init__(self):
        _pos(self, "r")


@dataclass(frozen=True)
class Strat0:
    s: QTheta
    t: QTheta
    j: HeisPrim

    def __post_init__(self):
        _pos(self, "s", "t")


def _pos(obj, *names):
    for n in names:
        v = QTheta.coerce(getattr(obj, n))
        if sign(v) <= 0:
            raise InvalidValue(f"{n} must be positive")
        object.__setattr__(obj, n, v)


PrimPoint = PrimZero | Strat1 | Strat2 | Strat0


def a_root_target(s, j: HeisPrim) -> RationalDir:
    """Q(s e1, (a^{1/ord z}, conj z)) with the principal root."""
    m = j.order
    root = j.a.principal_root(m) if m is not None else TorusElem(0)
    return RationalDir(s, j.z.conj(), root)


def b_root_target(s, j: HeisPrim) -> RationalDir:
    """Q(s e1, (b^{1/ord z}, z)) with the principal root."""
    m = j.order
    root = j.b.principal_root(m) if m is not None else TorusElem(0)
    return RationalDir(s, j.z, root)


# ---------------------------------------------------------------- induction


@dataclass(frozen=True)
class TrivialChar:
    pass


@dataclass(frozen=True)
class Gamma1Char:
    """Character of Gamma1 = <X, Z>: a = chi(X), b = chi(Z)."""

    a: TorusElem
    b: TorusElem

    def __post_init__(self):
        object.__setattr__(self, "a", angle(self.a))
        object.__setattr__(self, "b", angle(self.b))


@dataclass(frozen=True)
class Gamma2Char:
    """Character of Gamma2 = <Y, Z>: a = chi(Y), b = chi(Z)."""

    a: TorusElem
    b: TorusElem

    def __post_init__(self):
        object.__setattr__(self, "a", angle(self.a))
        object.__setattr__(self, "b", angle(self.b))


@dataclass(frozen=True)
class HeisIdeal:
    j: HeisPrim


Ideal = TrivialChar | Gamma1Char | Gamma2Char | HeisIdeal
_EXPECTED = {"Zero": TrivialChar, "Q1": Gamma1Char, "Q2": Gamma2Char, "Q0": HeisIdeal}


def induce(p: SL3Point, ideal: Ideal, enc: ThetaEnclosure | None = None) -> PrimPoint:
    red = sl3_reduce(p, enc)
    if not isinstance(ideal, _EXPECTED[red.stratum]):
        raise StabilizerMismatch(f"stratum {red.stratum} needs {_EXPECTED[red.stratum].__name__}")
    h = red.h
    if red.stratum == "Zero":
        return PrimZero()
    if red.stratum == "Q0":
        return Strat0(red.orbit.s, red.orbit.t, ideal.j)
    if red.stratum == "Q1":
        # diag(gamma, 1) acts on (chi(X), chi(Z)) through J gamma J, J = diag(1, -1)
        pt = SL2Point((h[0][0], h[1][0]), (ideal.a, -ideal.b))
        return Strat1(red.orbit.r, _nr_of(sl2_classify(pt, enc)))
    pt = SL2Point((h[1][1], h[2][1]), (ideal.a, ideal.b))
    return Strat2(red.orbit.r, _nr_of(sl2_classify(pt, enc)))


def _nr_of(orbit) -> NRBarPoint:
    if isinstance(orbit, Torsion):
        return Pt(orbit.m, orbit.t)
    if isinstance(orbit, Dense):
        return Infinity()
    raise AssertionError("vector of a stratum point has rational direction")


def _gamma_exponents(m, stratum: str) -> tuple[int, int]:
    """Exponents (k, l) with m = N^k Z^l, N = X for Gamma1 and Y for Gamma2."""
    rows = m.rows if isinstance(m, IntMatrix) else m
    if stratum == "Q1":
        return rows[1][2], rows[0][2]
    return rows[0][1], rows[0][2]


def transport_ideal(p: SL3Point, ideal: Ideal, gamma: IntMatrix, enc: ThetaEnclosure | None = None) -> Ideal:
    """The ideal on the stabilizer of gamma.p corresponding to ``ideal`` on that of p.

    chi''(tau) = chi(gamma^{-1} tau gamma); in frame coordinates this is chi evaluated on
    zeta^{-1} N zeta with zeta = gamma_{p'} gamma gamma_p^{-1}, an element normalizing the
    named subgroup.
    """
    red = sl3_reduce(p, enc)
    red2 = sl3_reduce(act(gamma, p), enc)
    if not isinstance(ideal, _EXPECTED[red.stratum]):
        raise StabilizerMismatch(f"stratum {red.stratum} needs {_EXPECTED[red.stratum].__name__}")
    if red.stratum in ("Zero", "Q0"):
        return ideal  # Q0: zeta lies in H3(Z) and inner automorphisms fix primitive ideals
    zeta = red2.gamma @ gamma @ red.gamma.inverse()
    zinv = zeta.inverse()
    n_gen = HEIS_X if red.stratum == "Q1" else HEIS_Y
    vals = []
    for sigma in (n_gen, HEIS_Z):
        k, l = _gamma_exponents(zinv @ sigma @ zeta, red.stratum)
        vals.append(ideal.a * k + ideal.b * l)
    return type(ideal)(*vals)


# ---------------------------------------------------------------- sequence profiles


@dataclass(frozen=True)
class PrimZeroSeq:
    """The constant sequence at the zero ideal."""


@dataclass(frozen=True)
class Strat1Seq:
    r: object
    x: NRProfile

    def __post_init__(self):
        object.__setattr__(self, "r", limit_value(self.r))


@dataclass(frozen=True)
class Strat2Seq:
    r: object
    x: NRProfile

    def __post_init__(self):
        object.__setattr__(self, "r", limit_value(self.r))


@dataclass(frozen=True)
class Strat0Seq:
    """(s_n, t_n, J_n) with (s_n, t_n) -> (s, t) in [0, INF]^2.

    ``a_view`` profiles Q(s_n e1, (a_n^{1/ord z_n}, conj z_n)) and ``b_view`` profiles
    Q(s_n^{-1} t_n e1, (b_n^{1/ord z_n}, z_n)); they are consulted only by the clauses
    that need them.
    """

    s: object
    t: object
    heis: object
    a_view: object = None
    b_view: object = None

    def __post_init__(self):
        object.__setattr__(self, "s", limit_value(self.s))
        object.__setattr__(self, "t", limit_value(self.t))

    @classmethod
    def with_constant_heis(cls, s, t, j: HeisPrim) -> "Strat0Seq":
        """(s_n, t_n) -> (s, t) with J_n = j for all n; both views are derived."""
        s, t = limit_value(s), limit_value(t)
        m = j.order
        a_root = j.a.principal_root(m) if m is not None else TorusElem(0)
        b_root = j.b.principal_root(m) if m is not None else TorusElem(0)
        a_view = ScaledE1(s, m, a_root, 0) if s is not INF else None
        q = _quotient_limit(t, s)
        b_view = ScaledE1(q, m, b_root, 0) if q is not None else None
        return cls(s, t, HeisConst.at(j), a_view, b_view)


def _quotient_limit(t, s):
    """lim t_n/s_n when it is determined by the limits alone, else None."""
    if s is INF:
        return 0 if t is not INF else None
    if s == 0:
        return INF if (t is INF or t != 0) else None
    return INF if t is INF else t / s


PrimSeqProfile = PrimZeroSeq | Strat1Seq | Strat2Seq | Strat0Seq


def constant_profile(p: PrimPoint) -> PrimSeqProfile:
    if isinstance(p, PrimZero):
        return PrimZeroSeq()
    if isinstance(p, Strat1):
        return Strat1Seq(p.r, NRConst(p.x))
    if isinstance(p, Strat2):
        return Strat2Seq(p.r, NRConst(p.x))
    return Strat0Seq.with_constant_heis(p.s, p.t, p.j)


def _is_zero(x) -> bool:
    return x is not INF and x == 0


def _eq(x, y) -> bool:
    return x is not INF and x == y


def _view(profile: Strat0Seq, name: str):
    v = getattr(profile, name)
    if v is None:
        raise UnsupportedProfile(f"this clause needs {name} on the Strat0Seq profile")
    return v


def prim_converges(profile: PrimSeqProfile, target: PrimPoint, enc: ThetaEnclosure | None = None) -> bool:
    if isinstance(profile, PrimZeroSeq):
        return True
    if isinstance(profile, (Strat1Seq, Strat2Seq)):
        first = isinstance(profile, Strat1Seq)
        r0 = profile.r
        if _is_zero(r0):
            if isinstance(target, PrimZero):
                return True
            raise PartialKnowledge("r_n -> 0: only convergence to the zero ideal is classified")
        if isinstance(target, PrimZero):
            return False
        own, other = (Strat1, Strat2) if first else (Strat2, Strat1)
        if isinstance(target, other):
            return False
        if isinstance(target, own):
            return _eq(r0, target.r) and nrbar_limit(profile.x, target.x)
        if isinstance(target, Strat0):
            if first:
                return _eq(r0, target.t) and sl2_limit(nr_sl2_profile(profile.x), a_root_target(target.s, target.j), enc)
            return _eq(r0, target.s) and sl2_limit(
                nr_sl2_profile(profile.x), b_root_target(target.t / target.s, target.j), enc)
    elif isinstance(profile, Strat0Seq):
        s0, t0 = profile.s, profile.t
        if _is_zero(s0) and _is_zero(t0):
            if isinstance(target, PrimZero):
                return True
            raise PartialKnowledge("(s_n, t_n) -> (0, 0): only convergence to the zero ideal is classified")
        if isinstance(target, PrimZero):
            return False
        if isinstance(target, Strat1):
            return (_is_zero(s0) and _eq(t0, target.r)
                    and sl2_limit(_view(profile, "a_view"), nr_orbit(target.x), enc))
        if isinstance(target, Strat2):
            return (_eq(s0, target.r) and _is_zero(t0)
                    and sl2_limit(_view(profile, "b_view"), nr_orbit(target.x), enc))
        if isinstance(target, Strat0):
            s, t, j = target.s, target.t, target.j
            if _is_zero(s0) and _eq(t0, t):
                return sl2_limit(_view(profile, "a_view"), a_root_target(s, j), enc)
            if _eq(s0, s) and _is_zero(t0):
                return sl2_limit(_view(profile, "b_view"), b_root_target(t / s, j), enc)
            if _eq(s0, s) and _eq(t0, t):
                return heis_prim_converges(profile.heis, j)
            return False
    else:
        raise UnsupportedProfile(f"unsupported profile {profile!r}")
    raise InvalidValue(f"not a primitive ideal: {target!r}")


def prim_t0_check(p: PrimPoint, q: PrimPoint, enc: ThetaEnclosure | None = None) -> bool:
    """False only if p != q while each constant sequence converges to the other point."""
    if p == q:
        return True
    return not (prim_converges(constant_profile(p), q, enc) and prim_converges(constant_profile(q), p, enc))


def project_profile(profile: PrimSeqProfile):
    """The induced profile of quasi-orbits in SL3(R)/U3(R)."""
    if isinstance(profile, PrimZeroSeq):
        return ZeroSeq()
    if isinstance(profile, Strat1Seq):
        return Q1Seq(profile.r)
    if isinstance(profile, Strat2Seq):
        return Q2Seq(profile.r)
    return Q0Seq(profile.s, profile.t)


def project_point(p: PrimPoint):
    if isinstance(p, PrimZero):
        return Zero()
    if isinstance(p, Strat1):
        return Q1(p.r)
    if isinstance(p, Strat2):
        return Q2(p.r)
    return Q0(p.s, p.t)
