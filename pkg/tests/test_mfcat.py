"""Tests for graded matrices, matrix factorizations and the homotopy solver."""
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from lgcy import mfcat, orlov
from lgcy.mfcat import (GradedMatrix, MFMorphism, NOT_FOUND, GradingError, hom_diff,
                        is_closed, is_null_homotopic, mf_compose, mf_cone, mf_identity,
                        mf_shift, mf_twist, mf_validate, monomials_of_degree)
from lgcy.qseries import NovikovSeries
from lgcy.ring import GradedPolynomial

CUT = 30


@pytest.fixture(scope="module")
def M0():
    return orlov.displayed_mf(0, CUT)


@pytest.fixture(scope="module")
def M1():
    return orlov.displayed_mf(1, CUT)


def test_monomials_of_degree():
    assert len(monomials_of_degree(0)) == 1
    assert len(monomials_of_degree(2)) == 6
    assert len(monomials_of_degree(3)) == 10
    assert monomials_of_degree(-1) == []


def test_displayed_twists(M0, M1):
    assert (M0.P0, M0.P1) == ((0, -1, -1, -1), (0, 1, 1, 1))
    assert (M1.P0, M1.P1) == ((1, 0, 0, 0), (1, 2, 2, 2))


def test_displayed_valid(M0, M1):
    assert mf_validate(M0)
    assert mf_validate(M1)


def test_diagnose_reports_a_broken_entry(M0):
    rows = [list(r) for r in M0.p0.entries]
    rows[1][2] = rows[1][2] + GradedPolynomial({(1, 1, 0): NovikovSeries({0: 1}, CUT)})
    bad = mfcat.MatrixFactorization(M0.P0, M0.P1, GradedMatrix(rows, M0.P0, M0.P1), M0.p1, CUT)
    problems = mfcat.mf_diagnose(bad)
    assert problems and all("differs from W" in p for p in problems)


def test_diagnose_reports_degrees(M0):
    bad = mfcat.MatrixFactorization(M0.P0, M0.P1, M0.p0.with_twists(M0.P0, (0, 0, 1, 1)),
                                    M0.p1, CUT)
    assert mfcat.mf_diagnose(bad)


def test_shift_twice_is_twist(M0):
    assert mf_shift(mf_shift(M0)).agrees(mf_twist(M0, 3))


@given(st.integers(min_value=-9, max_value=9))
def test_twist_preserves_validity(n):
    M = orlov.displayed_mf(0, 10)
    assert mf_validate(mf_twist(M, n))
    assert mf_twist(mf_twist(M, n), -n).agrees(M)


def test_identity_and_cone(M0):
    I = mf_identity(M0)
    assert is_closed(I, M0, M0)
    C = mf_cone(I, M0, M0)
    assert mf_validate(C)
    assert C.rank == (8, 8)


def test_identity_not_null_homotopic(M0):
    assert is_null_homotopic(mf_identity(M0), M0, M0, 2, CUT) == NOT_FOUND


def test_compose_with_identity(M0):
    I = mf_identity(M0)
    # (id, -id) composed with itself is (id, -id) under the sign rule
    assert mf_compose(I, I).agrees(I)


def test_wrong_twists_rejected(M0, M1):
    f = mf_identity(M0)
    with pytest.raises(GradingError):
        hom_diff(f, M0, M1)


def _random_matrix(draw, source, target, max_degree=2):
    rows = []
    for t in target:
        row = []
        for s in source:
            deg = t - s
            terms = {}
            if 0 <= deg <= max_degree:
                for m in monomials_of_degree(deg):
                    c = draw(st.integers(min_value=-2, max_value=2))
                    if c:
                        terms[m] = NovikovSeries({0: c}, CUT)
            row.append(GradedPolynomial(terms))
        rows.append(row)
    return GradedMatrix(rows, source, target)


@settings(max_examples=8, deadline=None)
@given(st.data())
def test_boundaries_are_null_homotopic(data):
    K, L = orlov.displayed_mf(0, CUT), orlov.displayed_mf(1, CUT)
    h = MFMorphism(1, _random_matrix(data.draw, K.term(0), L.term(1)),
                   _random_matrix(data.draw, K.term(1), L.term(2)))
    f = hom_diff(h, K, L)
    assert is_closed(f, K, L)
    g = is_null_homotopic(f, K, L, 4, CUT)
    assert g != NOT_FOUND
    assert hom_diff(g, K, L).agrees(f, CUT)


def test_complete_morphism_from_constants(M0):
    I = mf_identity(M0)
    consts = MFMorphism(0, GradedMatrix(I.f0.entries, M0.P0, M0.P0),
                        GradedMatrix(I.f1.entries, M0.P1, M0.P1))
    f = mfcat.complete_morphism(consts, M0, M0, 4, CUT)
    assert f != NOT_FOUND
    assert is_closed(f, M0, M0)
    assert f.f0.constant_pattern() == I.f0.constant_pattern()


def test_solver_respects_valuation_floor():
    # an entry T^-1 x is reachable only when the floor allows it
    K = orlov.displayed_mf(0, CUT)
    L = orlov.displayed_mf(1, CUT)
    x = GradedPolynomial({(1, 0, 0): NovikovSeries({-1: 1}, CUT)})
    rows = [[0] * 4 for _ in range(4)]
    rows[0][0] = x
    h = MFMorphism(1, GradedMatrix(rows, K.term(0), L.term(1)), GradedMatrix.zero(K.term(1), L.term(2)))
    f = hom_diff(h, K, L)
    assert is_null_homotopic(f, K, L, 2, CUT - 2, valuation_floor=0) == NOT_FOUND
    assert is_null_homotopic(f, K, L, 2, CUT - 2, valuation_floor=-1) != NOT_FOUND


def test_toy_rank_one():
    x = GradedPolynomial({(1, 0, 0): NovikovSeries({0: 1}, CUT)})
    W = x * x * x
    M = mfcat.MatrixFactorization((0,), (1,), GradedMatrix([[x]], (0,), (1,)),
                                  GradedMatrix([[x * x]], (1,), (3,)), CUT)
    assert mf_validate(M, W)
    assert not mf_validate(M)


def test_sign_flip_detected(M0):
    rows = [list(r) for r in M0.p0.entries]
    rows[0][1] = -rows[0][1]
    bad = mfcat.MatrixFactorization(M0.P0, M0.P1, GradedMatrix(rows, M0.P0, M0.P1), M0.p1, CUT)
    assert not mf_validate(bad)


def test_shift_basics(M0):
    Ms = mf_shift(M0)
    assert mf_validate(Ms)
    assert Ms.P0 == M0.P1
    assert mf_twist(M0, 0).agrees(M0)


@settings(max_examples=20, deadline=None)
@given(st.data(), st.integers(0, 1))
def test_hom_diff_squares_to_zero(data, parity):
    K, L = orlov.displayed_mf(0, 10), orlov.displayed_mf(1, 10)
    f = MFMorphism(parity, _random_matrix(data.draw, K.term(0), L.term(parity)),
                   _random_matrix(data.draw, K.term(1), L.term(parity + 1)))
    assert hom_diff(hom_diff(f, K, L), K, L).is_zero(10)


def test_cone_of_x_morphism(M0, M1):
    from lgcy import mirror
    f = mirror.orlov_morphism("x", 0, CUT)
    assert mf_validate(mf_cone(f, M0, M1))


def test_cone_of_zero_is_direct_sum(M0, M1):
    C = mf_cone(mfcat.mf_zero(M0, M1), M0, M1)
    S = mf_shift(M0)
    assert C.P0 == M1.P0 + S.P0 and C.P1 == M1.P1 + S.P1
    assert C.p0.submatrix(range(4), range(4)).agrees(M1.p0)
    assert C.p0.submatrix(range(4, 8), range(4, 8)).agrees(S.p0)
    assert C.p0.submatrix(range(4), range(4, 8)).is_zero()


def test_cone_of_identity_contractible():
    M = orlov.displayed_mf(0, 10)
    C = mf_cone(mf_identity(M), M, M)
    h = is_null_homotopic(mf_identity(C), C, C, 2, 10)
    assert h != NOT_FOUND


def test_zero_has_zero_homotopy(M0, M1):
    h = is_null_homotopic(mfcat.mf_zero(M0, M1), M0, M1, 2, CUT)
    assert h != NOT_FOUND and h.is_zero()
