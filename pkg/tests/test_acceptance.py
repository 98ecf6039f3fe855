"""The ten acceptance criteria, one test each.

Every test logs a ``PASS criterion N: ...`` or ``FAIL criterion N: ...`` line; the
lines are gathered into a block at the end of the pytest run.
"""

import itertools
import math
import random
import time
from contextlib import contextmanager
from fractions import Fraction as F

import numpy as np
import pytest

from _support import STRATA, random_fraction, random_sl, random_sl2_point, stratum_point
from clause_table import CASES, GRID
from primatlas import THETA, QTheta
from primatlas.exactnum import mat_mul, qmat
from primatlas.heisenberg import (
    GEN_X, GEN_Y, GEN_Z, HeisPrim, NamedSubgroup, check_irrep_relations, heis_irrep, heis_prim_of_irrep, res_hull,
)
from primatlas.primspec import constant_profile, prim_converges, prim_t0_check
from primatlas.sl2_action import act as act2
from primatlas.sl2_action import modd_witness, sl2_classify, sl2_torsion_transitivity
from primatlas.sl3_action import act as act3
from primatlas.sl3_action import is_upper_unitriangular, sl3_classify, sl3_stabilizer, sl3_witness, stabilizes
from primatlas.weak_containment import (
    FinRep, FolnerSet, amenability_witness, approx_heis_intertwiner, exact_intertwiner, folner_ratio, hs_norm,
)


@contextmanager
def criterion(log, number, text, limit=None):
    start = time.perf_counter()
    status = "FAIL"
    try:
        yield
        elapsed = time.perf_counter() - start
        assert limit is None or elapsed < limit, f"took {elapsed:.2f}s, limit {limit}s"
        status = "PASS"
    finally:
        elapsed = time.perf_counter() - start
        budget = f", limit {limit}s" if limit else ""
        line = f"{status} criterion {number}: {text} ({elapsed:.2f}s{budget})"
        log.append(line)
        print(line)


def primitive_z(n):
    return [F(k, n) for k in range(n) if math.gcd(k, n) == 1]


def test_criterion_01_modd_identity(acceptance_log):
    rng = random.Random(1)
    inputs = [(random_fraction(rng, 50, 50, positive=True), random_fraction(rng, 50, 50, positive=True))
              for _ in range(200)]
    inputs += [(QTheta.const(random_fraction(rng, positive=True)) + rng.randint(1, 3) * THETA,
                random_fraction(rng, positive=True) * THETA) for _ in range(20)]
    ms = [2 * rng.randint(0, 49) + 1 for _ in inputs]
    with criterion(acceptance_log, 1, "gamma diag(s,t) u = [[ms,0],[2s,t/m]] on 220 inputs", limit=1.0):
        for (s, t), m in zip(inputs, ms):
            w = modd_witness(s, t, m)
            assert w.gamma.det == 1
            assert mat_mul(mat_mul(w.gamma.rows, qmat(((s, 0), (0, t)))), w.u) == qmat(((m * s, 0), (2 * s, t / m)))
            assert w.product == qmat(((m * s, 0), (2 * s, t / m)))


def test_criterion_02_irrep_relations(acceptance_log):
    with criterion(acceptance_log, 2, "Heisenberg irrep relations to 1e-9 and exact round trip, n <= 12", limit=5.0):
        count = 0
        for n in range(1, 13):
            for z in primitive_z(n):
                for a, b in ((0, 0), (F(1, 5), F(2, 7))):
                    p = HeisPrim(z, a, b)
                    for ra, rb in {(0, 0), (1 % n, (n - 1) % n), ((n - 1) % n, 1 % n)}:
                        r = heis_irrep(p, ra, rb)
                        assert max(check_irrep_relations(r).values()) <= 1e-9
                        assert heis_prim_of_irrep(r) == p
                        count += 1
        assert count > 100


def test_criterion_03_restriction_hulls(acceptance_log):
    params = [F(j, 12) for j in range(12)] + [F(1, 7), F(3, 11), F(2, 5)]
    with criterion(acceptance_log, 3, "|res_hull| = ord z with c^ord(z) = a for ord z <= 12"):
        for n in range(1, 13):
            for z in primitive_z(n):
                for a in params:
                    p = HeisPrim(z, a, params[(params.index(a) * 5) % len(params)])
                    h1 = res_hull(p, NamedSubgroup.GAMMA1)
                    assert len(h1) == n == len(set(h1.pairs))
                    assert all(c * n == p.a and zz == p.z for c, zz in h1.pairs)
                    h2 = res_hull(p, NamedSubgroup.GAMMA2)
                    assert len(h2) == n and all(c * n == p.b and zz == p.z for c, zz in h2.pairs)


def test_criterion_04_torsion_transitivity(acceptance_log):
    with criterion(acceptance_log, 4, "SL2(Z) transitive on order-n points for n <= 30", limit=30.0):
        assert all(sl2_torsion_transitivity(n) for n in range(1, 31))


def test_criterion_05_quasiorbit_invariance(acceptance_log):
    rng = random.Random(5)
    with criterion(acceptance_log, 5, "classification invariant under 200 + 200 random group elements"):
        for _ in range(200):
            p = random_sl2_point(rng)
            assert sl2_classify(act2(random_sl(2, 5, rng), p)) == sl2_classify(p)
        for i in range(200):
            p = stratum_point(STRATA[i % 4], rng)
            assert sl3_classify(act3(random_sl(3, 5, rng), p)) == sl3_classify(p)


def test_criterion_06_stabilizer_soundness(acceptance_log):
    rng = random.Random(6)
    with criterion(acceptance_log, 6, "stabilizer generators conjugate into U3 on 60 points"):
        tags = set()
        for i in range(60):
            p = act3(random_sl(3, 4, rng), stratum_point(STRATA[i % 4], rng))
            info = sl3_stabilizer(p)
            tags.add(info.tag)
            for g in info.generators:
                assert is_upper_unitriangular(mat_mul(p.inverse, mat_mul(g.rows, p.g)))
                assert stabilizes(g, p)
        assert tags == {"H3", "Gamma1", "Gamma2", "Trivial"}


def test_criterion_07_witness_convergence(acceptance_log):
    ns = (10, 100, 1000, 10_000)
    profiles = {"i": lambda n: (F(1, n * n), F(1, n)), "ii": lambda n: (F(1, n), F(1, n * n))}
    with criterion(acceptance_log, 7, "witness residuals decrease to < 0.05 with unimodular integer gamma", limit=1.0):
        for case, prof in profiles.items():
            res = []
            for n in ns:
                w = sl3_witness(case, *prof(n))
                assert all(isinstance(x, int) for row in w.gamma.rows for x in row)
                assert w.gamma.det == 1
                assert is_upper_unitriangular(w.u)
                res.append(w.residual)
            assert all(a > b for a, b in zip(res, res[1:])), res
            assert res[-1] < 0.05


def test_criterion_08_powers_stormer(acceptance_log):
    boxes = {N: FolnerSet.h3_box(N) for N in range(1, 7)}
    gens = {"X": GEN_X, "Y": GEN_Y, "Z": GEN_Z}
    with criterion(acceptance_log, 8, "||pi(g) T pi(g)* - T||^2 <= |gF sym F|/|F| for n <= 5, N <= 6", limit=60.0):
        for n in range(1, 6):
            for z in primitive_z(n):
                for a, b in ((0, 0), (F(1, 3), F(1, 2))):
                    pi = FinRep.from_heis_irrep(heis_irrep(HeisPrim(z, a, b)))
                    for N, box in boxes.items():
                        w = amenability_witness(pi, box, check=False)
                        assert w.T.norm == pytest.approx(1.0)
                        for row in w.rows:
                            g = gens[row.generator]
                            assert isinstance(row.folner_ratio, F) and row.folner_ratio == folner_ratio(box, g)
                            m = pi.image(g)
                            direct = hs_norm(m @ w.T.matrix @ m.conj().T - w.T.matrix) ** 2
                            assert direct == pytest.approx(row.defect_sq, abs=1e-12)
                            assert direct <= row.folner_ratio + 1e-9


def test_criterion_09_oracle_coherence(acceptance_log):
    pairs = list(itertools.product(GRID, repeat=2))
    with criterion(acceptance_log, 9, f"{len(CASES)} clause cases, reflexivity and T0 on {len(pairs)} pairs"):
        assert len(CASES) >= 60 and len(pairs) >= 200
        for case in CASES:
            if isinstance(case.expected, bool):
                assert prim_converges(case.profile, case.target) is case.expected, case
            else:
                with pytest.raises(case.expected):
                    prim_converges(case.profile, case.target)
        assert all(prim_converges(constant_profile(p), p) for p in GRID)
        assert all(prim_t0_check(p, q) for p, q in pairs)


def test_criterion_10_intertwiner_duality(acceptance_log):
    with criterion(acceptance_log, 10, "exact intertwiners for all same-kernel pairs n <= 8; approx defect <= 1e-6"):
        pairs = 0
        for n in range(1, 9):
            for z in primitive_z(n):
                p = HeisPrim(z, F(1, 7), F(2, 9))
                irreps = [heis_irrep(p, ra, rb) for ra in range(n) for rb in range(n)]
                for pi, rho in itertools.product(irreps, repeat=2):
                    assert exact_intertwiner(pi, rho, tol=1e-9) is not None
                    pairs += 1
                base = irreps[0]
                for rho in irreps:
                    approx = approx_heis_intertwiner(base, rho)
                    assert approx.defect <= 1e-6
                    w = exact_intertwiner(base, rho) / np.sqrt(n)
                    phase = np.vdot(w, approx.T.matrix)
                    assert abs(abs(phase) - 1) <= 1e-6
                    assert np.allclose(approx.T.matrix, phase * w, atol=1e-6)
        assert pairs > 30_000
