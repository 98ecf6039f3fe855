"""Hand-derived truth table for convergence in the primitive ideal space.

Each row is worked out directly from the convergence criteria, independent of the
implementation:

* zero-profile rows: the zero ideal is dense, so its constant sequence converges
  everywhere;
* stratum-1/2 rows: r_n -> r together with a condition on x_n, either in (N x R)^-
  (compact sets are closed, escaping sequences converge everywhere) or, for
  Strat0 targets, membership of (s e1, roots) in the closure of the torsion
  quasi-orbit Q(v_theta, z_n), which holds iff the shifted point has the right order;
* stratum-0 rows: (s_n, t_n) -> (s0, t0) decides which sub-criterion applies.

``expected`` is True, False or an exception class.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as F

from primatlas import TorusElem
from primatlas.errors import PartialKnowledge, UnsupportedProfile
from primatlas.heisenberg import HeisConst, HeisIrrationalZ, HeisOrderEscape, HeisPrim
from primatlas.primspec import (
    Infinity, NRConst, NRConv, NREscape, PrimZero, PrimZeroSeq, Pt, Strat0, Strat0Seq, Strat1, Strat1Seq,
    Strat2, Strat2Seq,
)
from primatlas.sl2_action import INF, ScaledE1


@dataclass(frozen=True)
class Case:
    clause: str
    profile: object
    target: object
    expected: object


J_TRIV = HeisPrim(0, 0, 0)
J_HALF = HeisPrim(F(1, 2), 0, 0)
J_HALF_A = HeisPrim(F(1, 2), F(1, 2), 0)
J_QUARTER = HeisPrim(F(1, 4), 0, 0)
J_QUARTER_B = HeisPrim(F(1, 4), 0, F(1, 2))
J_THIRD = HeisPrim(F(1, 3), 0, 0)
J_THIRD_B = HeisPrim(F(1, 3), 0, F(1, 2))
J_IRR = HeisPrim(TorusElem(0, 1))  # z = e^{2 pi i theta}

const = Strat0Seq.with_constant_heis


def _cases():
    c = []
    add = lambda clause, prof, tgt, exp: c.append(Case(clause, prof, tgt, exp))  # noqa: E731

    # zero ideal: dense point
    for tgt in (PrimZero(), Strat1(1, Pt(1, 0)), Strat2(2, Infinity()), Strat0(1, 1, J_TRIV), Strat0(3, 1, J_THIRD_B)):
        add("zero-dense", PrimZeroSeq(), tgt, True)

    # stratum 1: convergence to zero iff r_n -> 0
    add("s1-zero", Strat1Seq(0, NREscape()), PrimZero(), True)
    add("s1-zero", Strat1Seq(0, NRConst(Pt(2, 0))), PrimZero(), True)
    add("s1-zero", Strat1Seq(2, NRConst(Pt(1, 0))), PrimZero(), False)
    add("s1-zero", Strat1Seq(INF, NREscape()), PrimZero(), False)
    add("s1-zero-silent", Strat1Seq(0, NREscape()), Strat1(1, Pt(1, 0)), PartialKnowledge)
    # no cluster points in the other stratum
    add("s1-other", Strat1Seq(2, NRConst(Pt(1, 0))), Strat2(2, Pt(1, 0)), False)
    add("s1-other", Strat1Seq(INF, NREscape()), Strat2(1, Infinity()), False)
    # same stratum: r_n -> r and x_n -> x in (N x R)^-
    add("s1-same", Strat1Seq(2, NRConst(Pt(3, F(1, 2)))), Strat1(2, Pt(3, F(1, 2))), True)
    add("s1-same", Strat1Seq(2, NRConst(Pt(3, F(1, 2)))), Strat1(3, Pt(3, F(1, 2))), False)
    add("s1-same", Strat1Seq(2, NRConst(Pt(3, F(1, 2)))), Strat1(2, Pt(3, F(1, 3))), False)
    add("s1-same", Strat1Seq(2, NRConst(Pt(3, F(1, 2)))), Strat1(2, Infinity()), False)
    add("s1-same", Strat1Seq(2, NREscape()), Strat1(2, Pt(5, 7)), True)
    add("s1-same", Strat1Seq(2, NREscape()), Strat1(2, Infinity()), True)
    add("s1-same", Strat1Seq(2, NRConst(Infinity())), Strat1(2, Pt(1, 0)), True)
    add("s1-same", Strat1Seq(2, NRConv(4, F(1, 3))), Strat1(2, Pt(4, F(1, 3))), True)
    add("s1-same", Strat1Seq(2, NRConv(4, F(1, 3))), Strat1(2, Pt(2, F(1, 3))), False)
    add("s1-same", Strat1Seq(2, NRConv(4, F(1, 3))), Strat1(2, Infinity()), False)
    add("s1-same", Strat1Seq(INF, NREscape()), Strat1(1, Infinity()), False)
    # stratum 0 targets: r_n -> t and Q(v_theta, z_n) -> Q(s e1, (a^{1/m}, conj z))
    # J_HALF: root 0, conj z = 1/2; the shifted point (-t', 1/2) has order lcm(ord t', 2)
    add("s1-to-s0", Strat1Seq(3, NRConst(Pt(2, 0))), Strat0(1, 3, J_HALF), True)
    add("s1-to-s0", Strat1Seq(3, NRConst(Pt(1, 0))), Strat0(1, 3, J_HALF), False)
    add("s1-to-s0", Strat1Seq(3, NRConst(Pt(2, F(1, 2)))), Strat0(1, 3, J_HALF), True)
    add("s1-to-s0", Strat1Seq(3, NRConst(Pt(2, F(1, 3)))), Strat0(1, 3, J_HALF), False)
    add("s1-to-s0", Strat1Seq(3, NRConst(Pt(6, F(1, 3)))), Strat0(1, 3, J_HALF), True)
    # s = 2 doubles the shift: (-2/3, 1/2) has order 6
    add("s1-to-s0", Strat1Seq(3, NRConst(Pt(6, F(1, 3)))), Strat0(2, 3, J_HALF), True)
    add("s1-to-s0", Strat1Seq(3, NRConst(Pt(2, F(1, 4)))), Strat0(2, 3, J_HALF), True)
    # a = 1/2 on z of order 2: root 1/4, point (1/4, 1/2) has order 4
    add("s1-to-s0", Strat1Seq(3, NRConst(Pt(4, 0))), Strat0(1, 3, J_HALF_A), True)
    add("s1-to-s0", Strat1Seq(3, NRConst(Pt(2, 0))), Strat0(1, 3, J_HALF_A), False)
    add("s1-to-s0", Strat1Seq(3, NRConv(4, 0)), Strat0(1, 3, J_HALF_A), True)
    add("s1-to-s0", Strat1Seq(3, NREscape()), Strat0(5, 3, J_THIRD_B), True)
    add("s1-to-s0", Strat1Seq(3, NRConst(Infinity())), Strat0(5, 3, J_THIRD_B), True)
    add("s1-to-s0", Strat1Seq(3, NREscape()), Strat0(5, 2, J_THIRD_B), False)
    add("s1-to-s0", Strat1Seq(3, NRConst(Pt(1, 0))), Strat0(1, 3, J_TRIV), True)

    # stratum 2, mirrored
    add("s2-zero", Strat2Seq(0, NRConst(Pt(1, 0))), PrimZero(), True)
    add("s2-zero", Strat2Seq(1, NREscape()), PrimZero(), False)
    add("s2-zero-silent", Strat2Seq(0, NREscape()), Strat0(1, 1, J_TRIV), PartialKnowledge)
    add("s2-other", Strat2Seq(2, NRConst(Pt(1, 0))), Strat1(2, Pt(1, 0)), False)
    add("s2-same", Strat2Seq(2, NRConst(Pt(5, 2))), Strat2(2, Pt(5, 2)), True)
    add("s2-same", Strat2Seq(2, NRConst(Pt(5, 2))), Strat2(2, Pt(5, 3)), False)
    add("s2-same", Strat2Seq(2, NRConv(5, 2)), Strat2(1, Pt(5, 2)), False)
    add("s2-same", Strat2Seq(2, NREscape()), Strat2(2, Pt(1, 0)), True)
    # stratum 0 targets: r_n -> s and Q(v_theta, z_n) -> Q(s^{-1} t e1, (b^{1/m}, z))
    # J_QUARTER_B with t/s = 1: point (1/8, 1/4), order 8
    add("s2-to-s0", Strat2Seq(2, NRConst(Pt(4, 0))), Strat0(2, 2, J_QUARTER_B), False)
    add("s2-to-s0", Strat2Seq(2, NRConst(Pt(8, 0))), Strat0(2, 2, J_QUARTER_B), True)
    # shifting by t' = 1/8 kills the root: (0, 1/4) has order 4
    add("s2-to-s0", Strat2Seq(2, NRConst(Pt(4, F(1, 8)))), Strat0(2, 2, J_QUARTER_B), True)
    # t/s = 1/2 halves the shift: (1/8 - 1/16, 1/4) has order 16
    add("s2-to-s0", Strat2Seq(2, NRConst(Pt(16, F(1, 8)))), Strat0(2, 1, J_QUARTER_B), True)
    add("s2-to-s0", Strat2Seq(2, NRConst(Pt(4, F(1, 8)))), Strat0(2, 1, J_QUARTER_B), False)
    add("s2-to-s0", Strat2Seq(2, NREscape()), Strat0(3, 2, J_QUARTER_B), False)
    add("s2-to-s0", Strat2Seq(2, NRConv(4, 0)), Strat0(2, 5, J_QUARTER), True)

    # stratum 0: (s_n, t_n) -> (0, 0)
    add("s0-zero", const(0, 0, J_HALF), PrimZero(), True)
    add("s0-zero-silent", const(0, 0, J_HALF), Strat0(1, 1, J_HALF), PartialKnowledge)
    add("s0-zero", const(1, 1, J_HALF), PrimZero(), False)
    add("s0-zero", const(0, 2, J_HALF), PrimZero(), False)
    add("s0-zero", const(INF, INF, J_HALF), PrimZero(), False)
    # (a): Strat1 targets need s0 = 0, t0 = r and Q(s_n e1, (a_n^{1/m}, conj z_n)) -> Q(v_theta, z)
    # with s_n -> 0 and constant J the view converges to Torsion(lcm(ord root, m), 0) only
    add("s0-to-s1", const(0, 2, J_HALF), Strat1(2, Pt(2, 0)), True)
    add("s0-to-s1", const(0, 2, J_HALF), Strat1(2, Pt(2, F(1, 2))), False)
    add("s0-to-s1", const(0, 2, J_HALF), Strat1(2, Pt(1, 0)), False)
    add("s0-to-s1", const(0, 2, J_HALF), Strat1(2, Infinity()), False)
    add("s0-to-s1", const(0, 2, J_HALF_A), Strat1(2, Pt(4, 0)), True)
    add("s0-to-s1", const(0, 2, J_HALF), Strat1(3, Pt(2, 0)), False)
    add("s0-to-s1", const(1, 2, J_HALF), Strat1(2, Pt(2, 0)), False)
    add("s0-to-s1", const(0, 2, J_IRR), Strat1(2, Pt(7, 5)), True)
    add("s0-to-s1", Strat0Seq(0, 2, HeisOrderEscape(0), ScaledE1(0, None)), Strat1(2, Infinity()), True)
    add("s0-to-s1", Strat0Seq(0, 2, HeisConst(F(1, 3)), ScaledE1(0, 3, F(1, 2), F(1, 5))), Strat1(2, Pt(6, F(1, 5))), True)
    add("s0-to-s1", Strat0Seq(0, 2, HeisConst(F(1, 3)), ScaledE1(0, 3, F(1, 2), F(1, 5))), Strat1(2, Pt(6, 0)), False)
    add("s0-to-s1", Strat0Seq(0, 2, HeisConst(F(1, 3)), ScaledE1(0, 3, F(1, 2), INF)), Strat1(2, Pt(1, 0)), True)
    add("s0-missing-view", Strat0Seq(0, 2, HeisConst(F(1, 2))), Strat1(2, Pt(2, 0)), UnsupportedProfile)
    # (b): Strat2 targets need s0 = r, t0 = 0 and the b-view
    add("s0-to-s2", const(2, 0, J_THIRD_B), Strat2(2, Pt(6, 0)), True)
    add("s0-to-s2", const(2, 0, J_THIRD_B), Strat2(2, Pt(3, 0)), False)
    add("s0-to-s2", const(2, 0, J_THIRD), Strat2(2, Pt(3, 0)), True)
    add("s0-to-s2", const(2, 0, J_THIRD), Strat2(1, Pt(3, 0)), False)
    add("s0-to-s2", const(2, 1, J_THIRD), Strat2(2, Pt(3, 0)), False)
    add("s0-to-s2", const(INF, 0, J_THIRD), Strat2(2, Pt(3, 0)), False)
    # (c)(i): s0 = 0, t0 = t
    add("s0-to-s0-i", const(0, 1, J_HALF), Strat0(5, 1, J_HALF), True)
    add("s0-to-s0-i", const(0, 1, J_HALF), Strat0(5, 1, J_HALF_A), False)
    add("s0-to-s0-i", const(0, 1, J_HALF), Strat0(5, 1, J_QUARTER), False)
    add("s0-to-s0-i", const(0, 1, J_QUARTER), Strat0(5, 1, HeisPrim(F(1, 2), F(1, 2), 0)), True)
    add("s0-to-s0-i", const(0, 1, J_HALF), Strat0(5, 2, J_HALF), False)
    # (c)(ii): s0 = s, t0 = 0
    add("s0-to-s0-ii", const(1, 0, J_THIRD), Strat0(1, 3, J_THIRD), True)
    add("s0-to-s0-ii", const(1, 0, J_THIRD_B), Strat0(1, 3, J_THIRD), False)
    add("s0-to-s0-ii", const(1, 0, J_THIRD_B), Strat0(1, 3, J_THIRD_B), True)
    add("s0-to-s0-ii", const(1, 0, J_THIRD), Strat0(2, 3, J_THIRD), False)
    # (c)(iii): s0 = s, t0 = t and J_n -> J in Prim C*(H3)
    add("s0-to-s0-iii", const(1, 1, J_HALF), Strat0(1, 1, J_HALF), True)
    add("s0-to-s0-iii", const(1, 1, J_HALF), Strat0(1, 1, J_HALF_A), False)
    add("s0-to-s0-iii", const(1, 1, J_HALF), Strat0(1, 2, J_HALF), False)
    add("s0-to-s0-iii", Strat0Seq(1, 1, HeisOrderEscape(F(1, 2))), Strat0(1, 1, HeisPrim(F(1, 2), F(1, 3), F(1, 5))), True)
    add("s0-to-s0-iii", Strat0Seq(1, 1, HeisOrderEscape(F(1, 2))), Strat0(1, 1, J_THIRD), False)
    add("s0-to-s0-iii", Strat0Seq(1, 1, HeisIrrationalZ(0)), Strat0(1, 1, HeisPrim(0, F(1, 2), 0)), True)
    # escaping parameters
    add("s0-escape", const(INF, 1, J_HALF), Strat0(1, 1, J_HALF), False)
    add("s0-escape", const(0, INF, J_HALF), Strat0(1, 1, J_HALF), False)
    add("s0-escape", const(0, INF, J_HALF), Strat1(1, Pt(2, 0)), False)
    return c


CASES = _cases()


# a spread of points in every stratum for pairwise checks
def _grid():
    xs = (Pt(1, 0), Pt(2, 0), Pt(2, F(1, 2)), Infinity())
    js = (HeisPrim(0), HeisPrim(F(1, 2)), HeisPrim(F(1, 2), F(1, 2)), HeisPrim(F(1, 3), 0, F(1, 2)))
    pts = [PrimZero()]
    pts += [Strat1(r, x) for r in (1, 2) for x in xs]
    pts += [Strat2(r, x) for r in (1, 2) for x in xs]
    pts += [Strat0(s, t, j) for s, t in ((1, 1), (1, 2)) for j in js]
    return pts


GRID = _grid()
