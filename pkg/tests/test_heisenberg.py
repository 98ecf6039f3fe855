import math
import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from primatlas import TorusElem
from primatlas.errors import InfiniteOrder, NotScalar, UnsupportedProfile
from primatlas.heisenberg import (
    GEN_X, GEN_Y, GEN_Z, IDENTITY, HeisConst, HeisElem, HeisIrrep, HeisOrderEscape, HeisPrim, NamedSubgroup,
    check_irrep_relations, heis_irrep, heis_mul, heis_prim_converges, heis_prim_of_irrep, res_hull,
)

ints = st.integers(-20, 20)
elems = st.builds(HeisElem, ints, ints, ints)


def test_multiplication_examples():
    assert heis_mul(GEN_X, GEN_Y) == HeisElem(1, 1, 0)
    assert heis_mul(GEN_Y, GEN_X) == HeisElem(1, 1, 1)
    g = HeisElem(3, -2, 5)
    assert heis_mul(g, g.inverse()) == IDENTITY


@given(elems)
def test_normal_form_matches_matrix_product(g):
    h = HeisElem(2, -1, 4)
    prod = np.array(g.matrix(), dtype=object) @ np.array(h.matrix(), dtype=object)
    assert heis_mul(g, h) == HeisElem.from_matrix(prod.tolist())


def test_associativity_on_ten_thousand_triples():
    rng = random.Random(11)
    for _ in range(10_000):
        a, b, c = (HeisElem(*(rng.randint(-9, 9) for _ in range(3))) for _ in range(3))
        assert heis_mul(heis_mul(a, b), c) == heis_mul(a, heis_mul(b, c))
        assert heis_mul(a, a.inverse()) == IDENTITY == heis_mul(a.inverse(), a)


def test_center_commutes():
    assert heis_mul(GEN_Z, GEN_X) == heis_mul(GEN_X, GEN_Z)
    assert NamedSubgroup.CENTER.contains(HeisElem(0, 0, 7))
    assert NamedSubgroup.GAMMA1.contains(HeisElem(4, 0, 1))
    assert not NamedSubgroup.GAMMA2.contains(HeisElem(4, 0, 1))


def test_irrep_examples():
    r = heis_irrep(HeisPrim(F(1, 2)))
    np.testing.assert_allclose(r.matX, [[0, 1], [1, 0]], atol=1e-12)
    np.testing.assert_allclose(r.matY, np.diag([1, -1]), atol=1e-12)
    np.testing.assert_allclose(r.matZ, -np.eye(2), atol=1e-12)
    triv = heis_irrep(HeisPrim(0))
    assert triv.n == 1 and np.allclose([triv.matX, triv.matY, triv.matZ], 1)
    r3 = heis_irrep(HeisPrim(F(1, 3), F(1, 2)))
    np.testing.assert_allclose(np.linalg.matrix_power(r3.matX, 3), -np.eye(3), atol=1e-12)


def test_infinite_order_has_no_finite_irrep():
    with pytest.raises(InfiniteOrder):
        heis_irrep(HeisPrim(TorusElem(0, 1)))


def test_matrix_closed_form_is_a_homomorphism():
    r = heis_irrep(HeisPrim(F(2, 5), F(1, 3), F(3, 4)), 2, 1)
    rng = random.Random(3)
    for _ in range(50):
        g, h = (HeisElem(*(rng.randint(-6, 6) for _ in range(3))) for _ in range(2))
        np.testing.assert_allclose(r.matrix(heis_mul(g, h)), r.matrix(g) @ r.matrix(h), atol=1e-9)
    np.testing.assert_allclose(r.matrix(GEN_X), r.matX, atol=1e-12)
    np.testing.assert_allclose(r.matrix(GEN_Y), r.matY, atol=1e-12)


@given(st.integers(1, 12), st.data())
def test_relations_and_roundtrip(n, data):
    k = data.draw(st.integers(0, n - 1).filter(lambda k: math.gcd(k, n) == 1))
    a = data.draw(st.fractions(0, 1, max_denominator=12))
    b = data.draw(st.fractions(0, 1, max_denominator=12))
    p = HeisPrim(F(k, n), a, b)
    r = heis_irrep(p, data.draw(st.integers(0, n - 1)), data.draw(st.integers(0, n - 1)))
    assert max(check_irrep_relations(r).values()) <= 1e-9
    assert heis_prim_of_irrep(r) == p


def test_root_choice_cancels():
    r = heis_irrep(HeisPrim(F(1, 2)), 1, 0)
    assert heis_prim_of_irrep(r) == HeisPrim(F(1, 2))


def test_not_scalar():
    r = heis_irrep(HeisPrim(F(1, 2)))
    bad = HeisIrrep(2, r.matX, r.matY, r.matZ + np.diag([0, 1e-3]), r.rootA, r.rootB)
    with pytest.raises(NotScalar):
        heis_prim_of_irrep(bad)


def test_res_hull_examples():
    p = HeisPrim(F(1, 4), 0, F(1, 2))
    quarter = TorusElem(F(1, 4))
    assert res_hull(p, NamedSubgroup.GAMMA1).pairs == tuple((TorusElem(F(k, 4)), quarter) for k in range(4))
    assert res_hull(p, NamedSubgroup.GAMMA2).pairs == tuple((TorusElem(F(k, 8)), quarter) for k in (1, 3, 5, 7))
    assert res_hull(HeisPrim(0), NamedSubgroup.GAMMA1).pairs == ((TorusElem(0), TorusElem(0)),)
    assert res_hull(HeisPrim(TorusElem(0, 1)), NamedSubgroup.GAMMA1).pairs is None


@given(st.integers(1, 12), st.fractions(0, 1, max_denominator=20))
def test_res_hull_members_are_roots(n, a):
    p = HeisPrim(F(1, n), a)
    hull = res_hull(p, NamedSubgroup.GAMMA1)
    assert len(hull) == n == len(set(hull.pairs))
    assert all(c * n == p.a and zz == p.z for c, zz in hull.pairs)


def test_hull_matches_spectrum_of_restriction():
    # Gamma1 = <X, Z> acts on C^n through commuting unitaries; its joint eigenvalues are the hull
    p = HeisPrim(F(1, 3), F(2, 5))
    r = heis_irrep(p, 1, 2)
    eig = np.linalg.eigvals(r.matX)
    angles = sorted(round((np.angle(e) / (2 * np.pi)) % 1.0, 9) for e in eig)
    hull = res_hull(p, NamedSubgroup.GAMMA1)
    assert angles == sorted(round(float(c.a), 9) for c, _ in hull.pairs)


def test_convergence_examples():
    z = F(1, 4)
    target = HeisPrim(z, F(1, 3), F(1, 5))
    assert heis_prim_converges(HeisConst(z, F(1, 3), F(1, 5)), target)
    assert heis_prim_converges(HeisOrderEscape(0), HeisPrim(0, F(1, 7), F(2, 9)))
    assert not heis_prim_converges(HeisConst(z, F(1, 3), F(1, 5)), HeisPrim(z, F(2, 3), F(1, 5)))
    assert not heis_prim_converges(HeisOrderEscape(F(1, 2)), target)
    with pytest.raises(UnsupportedProfile):
        heis_prim_converges(object(), target)


@given(st.integers(1, 12), st.fractions(0, 1, max_denominator=12), st.fractions(0, 1, max_denominator=12))
def test_convergence_is_reflexive(n, a, b):
    p = HeisPrim(F(1, n), a, b)
    assert heis_prim_converges(HeisConst.at(p), p)
