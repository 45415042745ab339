"""Tests for graded polynomials and the named series of the potential."""
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from lgcy import ring
from lgcy.qseries import NovikovSeries
from lgcy.ring import GradedPolynomial, INHOMOGENEOUS, build_W, var

X, Y, Z = var("x"), var("y"), var("z")

# oracle coefficients in q_alpha units, cutoff 200
PHI = {9: -1, 81: 3}
PSI = {1: -1, 25: -5, 49: 7, 121: 11, 169: -13}
ALPHA = {1: 1, 25: -1, 49: -1, 121: 1, 169: 1}


def test_named_series():
    assert ring.series_phi(200).terms == PHI
    assert ring.series_psi(200).terms == PSI
    assert ring.series_alpha(200).terms == ALPHA


def test_named_series_small_cutoff():
    assert ring.series_phi(10).terms == {9: -1}
    assert ring.series_psi(2).terms == {1: -1}
    with pytest.raises(ValueError):
        ring.series_phi(0)


def test_build_W_signs_and_terms():
    B = build_W(200)
    assert B.signs == (-1, 1)
    W = B.W
    assert W.coefficient((3, 0, 0)).terms == PHI
    assert W.coefficient((0, 0, 3)).terms == PHI
    assert W.coefficient((0, 3, 0)).terms == {e: -c for e, c in PHI.items()}
    assert W.coefficient((1, 1, 1)).terms == PSI
    assert set(W.monomials()) == {(3, 0, 0), (0, 3, 0), (0, 0, 3), (1, 1, 1)}
    assert W.degree() == 3


def test_w_decomposition():
    B = build_W(100)
    assert (X * B.wx + Y * B.wy + Z * B.wz).agrees(B.W, 100)


def test_divide_by_alpha():
    a = ring.series_alpha(60)
    p = GradedPolynomial({(1, 0, 0): a * NovikovSeries({3: 2}, 62)})
    q = ring.divide_by_alpha(p, 50)
    assert q.coefficient((1, 0, 0)).agrees(NovikovSeries({3: 2}, 50))


def test_degree():
    assert X.degree() == 1
    assert (X + 1).degree() == INHOMOGENEOUS
    assert (X * Y * Z).is_homogeneous(3)


def test_json_roundtrip():
    W = build_W(50).W
    assert GradedPolynomial.from_json(W.to_json(), 50).agrees(W)


small = st.integers(min_value=-3, max_value=3)
monos = st.tuples(*[st.integers(min_value=0, max_value=2)] * 3)
polys = st.dictionaries(monos, small, max_size=4).map(
    lambda d: GradedPolynomial({m: NovikovSeries({0: c}, 10) for m, c in d.items()}))


@given(polys, polys, polys)
def test_polynomial_ring_axioms(a, b, c):
    assert (a * b).agrees(b * a)
    assert (a * (b + c)).agrees(a * b + a * c)
    assert ((a * b) * c).agrees(a * (b * c))


@given(polys, polys)
def test_degree_additive(a, b):
    if a.is_homogeneous() and b.is_homogeneous() and a and b:
        assert (a * b).degree() == a.degree() + b.degree()


def test_named_coefficients():
    assert ring.series_phi(200).coeff(10) == 0
    assert ring.series_wx(200).coefficient((2, 0, 0)).coeff(9) == -1
    assert ring.series_wz(200).coefficient((1, 1, 0)).coeff(1) == -1
    assert ring.series_wy(200).coefficient((0, 2, 0)).coeff(9) == 1
    assert ring.poly_degree(ring.series_wx(200)) == 2
    assert (X * Y - Y * X).is_zero()
