"""Tests for linear Lagrangians on the torus, polygon counts and strip matrices."""
import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from lgcy import fukaya
from lgcy.fukaya import (LinearLagrangian, SeidelConfig, apply_symplectomorphism,
                         branch_index, enumerate_triangles, intersect, intersection_degree,
                         pz_lagrangian, seidel_branch)
from lgcy.orlov import koszul_blocks
from lgcy.ring import build_W

S = SeidelConfig()


def primitive(v):
    return math.gcd(*v) == 1


directions = st.tuples(st.integers(-4, 4), st.integers(-4, 4)).filter(primitive)
points = st.tuples(st.fractions(0, 1, max_denominator=6), st.fractions(0, 1, max_denominator=6))


def brute_intersections(L1, L2):
    """Solve P1 + s v1 = P2 + t v2 + (m, n) over a box of lattice translates."""
    (a, b), (c, d) = L1.direction, L2.direction
    det = a * d - b * c
    found = set()
    for m in range(-12, 13):
        for n in range(-12, 13):
            rx = L2.point[0] + m - L1.point[0]
            ry = L2.point[1] + n - L1.point[1]
            s = (rx * d - ry * c) / det
            if 0 <= s < 1:
                found.add(s)
    return sorted(found)


@settings(max_examples=60)
@given(directions, directions, points, points)
def test_intersection_count(v1, v2, p1, p2):
    assume(v1[0] * v2[1] - v1[1] * v2[0] != 0)
    L1, L2 = LinearLagrangian(v1, p1), LinearLagrangian(v2, p2)
    pts = intersect(L1, L2)
    assert len(pts) == abs(v1[0] * v2[1] - v1[1] * v2[0])
    assert [p.s for p in pts] == brute_intersections(L1, L2)
    for p in pts:
        assert L2.param(p.location) == p.t


@given(directions, directions, points, points, st.integers(-2, 2), st.integers(-2, 2))
def test_degree_duality(v1, v2, p1, p2, w, sh):
    assume(v1[0] * v2[1] - v1[1] * v2[0] != 0)
    L1 = LinearLagrangian(v1, p1, winding=w)
    L2 = LinearLagrangian(v2, p2, shift=sh)
    for p in intersect(L1, L2):
        q = next(q for q in intersect(L2, L1) if q.location == p.location)
        assert intersection_degree(p, L1, L2) + intersection_degree(q, L2, L1) == 1


def test_parallel_lines():
    with pytest.raises(fukaya.ParallelLinesError):
        intersect(pz_lagrangian(1, 0), pz_lagrangian(-1, 0, Fraction(1, 2)))


def test_non_primitive_direction():
    with pytest.raises(ValueError):
        LinearLagrangian((2, 4))


def test_fractional_degrees():
    L, T = seidel_branch(0), seidel_branch(1)
    for p in intersect(L, T):
        assert intersection_degree(p, L, T, fractional=True) == Fraction(2, 3)
    for p in intersect(T, L):
        assert intersection_degree(p, T, L, fractional=True) == Fraction(1, 3)
    with pytest.raises(fukaya.UngradedError):
        p = intersect(pz_lagrangian(1, 0), pz_lagrangian(0, 1))[0]
        intersection_degree(p, p.source, p.target, fractional=True)


def test_corner_points():
    pts = fukaya.corner_points(S, 0)
    assert pts == {"x": (Fraction(1, 3), Fraction(1, 6)), "y": (Fraction(0), Fraction(1, 2)),
                   "z": (Fraction(2, 3), Fraction(5, 6))}


# ---------------------------------------------------------------------------
# theta functions


@pytest.fixture(scope="module")
def pz_lines():
    L0, L1, L2 = pz_lagrangian(1, 0), pz_lagrangian(1, -1), pz_lagrangian(1, -2)
    return L0, L1, L2, intersect(L0, L1)[0], intersect(L1, L2)[0]


def test_pz_triangles(pz_lines):
    L0, L1, L2, p1, p2 = pz_lines
    c = enumerate_triangles(L0, L1, L2, p1, p2, 50)
    q0 = {m * m: 2 for m in range(1, 8)}
    q0[0] = 1
    q1 = {Fraction((2 * m + 1) ** 2, 4): 2 for m in range(7)}
    assert c.get("q0").terms == q0
    assert c.get("q1").terms == q1


def test_pz_degenerate_term_only(pz_lines):
    L0, L1, L2, p1, p2 = pz_lines
    c = enumerate_triangles(L0, L1, L2, p1, p2, Fraction(1, 8))
    assert c.get("q0").terms == {0: 1}
    assert c.get("q1").is_zero()


def test_pz_degrees_add(pz_lines):
    L0, L1, L2, p1, p2 = pz_lines
    for q in intersect(L0, L2):
        assert q.degree == p1.degree + p2.degree


def test_theta_values():
    assert fukaya.theta_series(0, 5).terms == {0: 1, Fraction(1, 2): 2, 2: 2, Fraction(9, 2): 2}
    assert fukaya.theta_series(Fraction(1, 2), 2).terms == {Fraction(1, 8): 2, Fraction(9, 8): 2}


@pytest.mark.parametrize("cutoff", [5, 30])
def test_addition_formula(cutoff):
    assert fukaya.addition_formula_check(cutoff)


# ---------------------------------------------------------------------------
# symplectomorphisms

S_TABLE = {  # i: (d, j, direction of the image)
    -6: (0, 2, (1, 2)), -5: (2, 1, (-2, -1)), -4: (1, 1, (1, -1)), -3: (0, 1, (1, 2)),
    -2: (2, 0, (-2, -1)), -1: (1, 0, (1, -1)), 0: (0, 0, (1, 2)), 1: (2, -1, (-2, -1)),
    2: (1, -1, (1, -1)), 3: (0, -1, (1, 2)), 4: (2, -2, (-2, -1)), 5: (1, -2, (1, -1)),
    6: (0, -2, (1, 2)),
}


@pytest.mark.parametrize("i", sorted(S_TABLE))
def test_symplectomorphism_table(i):
    im = apply_symplectomorphism(i, pz_lagrangian(1, 3 * i))
    d, j, v = S_TABLE[i]
    assert (im.d, im.j, im.lagrangian.direction) == (d, j, v)
    assert im.formal_shift == -j
    assert im.lagrangian.shift == 2 * j
    assert im.lagrangian.same_line(seidel_branch(d))
    assert branch_index(im.lagrangian) == d


@pytest.mark.parametrize("i", range(-6, 7))
def test_symplectomorphism_labels(i):
    r = branch_index(apply_symplectomorphism(i, pz_lagrangian(1, 3 * i)).lagrangian)
    got = [fukaya.point_variable(S, fukaya.transform_point(i, (Fraction(k, 3), 0)), r)
           for k in range(3)]
    assert got == ["y", "x", "z"]


def test_off_branch_line():
    with pytest.raises(fukaya.TransversalityError):
        branch_index(pz_lagrangian(1, 0))


# ---------------------------------------------------------------------------
# the potential and the strips


@pytest.mark.parametrize("cutoff", [1, 2, 10, 26, 50, 82])
def test_polygons_give_W(cutoff):
    W = build_W(cutoff).W
    for r in range(3):
        assert fukaya.potential_from_polygons(S, r, cutoff).agrees(W, cutoff)


def test_polygon_leading_counts():
    c = fukaya.enumerate_decorated_polygons(S, 0, 10)
    assert c.get("e0", "xxx").terms == {9: -1}
    assert c.get("e0", "yyy").terms == {9: 1}
    assert c.get("e0", "xyz").terms == {1: -1}
    # the x^2 y decoration is never realised
    assert c.get("e0", "xxy").is_zero()


def test_inverted_config_breaks_W():
    W = build_W(10).W
    assert not fukaya.potential_from_polygons(S.inverted(), 0, 10).agrees(W, 10)


def test_strip_degrees():
    d = fukaya.strip_matrix(S, seidel_branch(0), 10)
    assert d.generators() == [("a0", 0, 0), ("a_x", -2, 2), ("a_y", -2, 2), ("a_z", -2, 2),
                              ("b0", 0, 1), ("b_x", -1, 1), ("b_y", -1, 1), ("b_z", -1, 1)]
    d = fukaya.strip_matrix(S, apply_symplectomorphism(0, pz_lagrangian(1, -3)).lagrangian, 10)
    assert [k for _, _, k in d.generators()] == [0, 0, 0, 0, 1, 1, 1, 1]
    assert [g for _, g, _ in d.generators()] == [-1, 0, 0, 0, -1, -2, -2, -2]


@pytest.mark.parametrize("cutoff", [1, 9, Fraction(49, 2), 60])
def test_strips_match_koszul_blocks(cutoff):
    d = fukaya.strip_matrix(S, seidel_branch(0), cutoff)
    P, Q = koszul_blocks(cutoff)
    for A, B in ((d.p0, P), (d.p1, Q)):
        for a in range(4):
            for b in range(4):
                assert A[a, b].agrees(B[a][b], cutoff)


def _sliver(var, parity):
    idx = 1 + "xyz".index(var)
    f0 = [[0] * 4 for _ in range(4)]
    f1 = [[0] * 4 for _ in range(4)]
    f0[idx][0] = 1
    if parity == 0:
        f1[0][idx] = -1
    else:
        f0[0][idx] = 1
    return f0, f1


def test_sliver_patterns():
    L, T = seidel_branch(0), seidel_branch(1)
    for src, tgt, parity in ((L, T, 0), (T, L, 1)):
        for w in intersect(src, tgt):
            v = fukaya.point_variable(S, w.location, 0)
            f = fukaya.morphism_strips(S, src, tgt, w, 10)
            assert f.parity == parity
            assert (f.f0.constant_pattern(), f.f1.constant_pattern()) == _sliver(v, parity)


@pytest.mark.parametrize("a, b, n", [((1, 0), (1, -3), 3), ((1, 0), (0, 1), 1), ((1, 2), (1, -1), 3)])
def test_intersection_oracles(a, b, n):
    assert len(intersect(pz_lagrangian(*a), pz_lagrangian(*b))) == n


def test_zero_images():
    im = apply_symplectomorphism(0, pz_lagrangian(1, 0))
    assert im.rotated.direction == (1, 2)
    assert im.lagrangian.same_line(seidel_branch(0))
    im = apply_symplectomorphism(0, pz_lagrangian(1, -3))
    assert im.lagrangian.same_line(seidel_branch(1))


@pytest.mark.parametrize("i", range(-6, 7))
def test_shear_direction(i):
    v = fukaya._shear(i, (1, 3 * i))
    assert tuple(v) == (1, 2)


@pytest.mark.parametrize("shift", [-2, 0, 1, 3])
@pytest.mark.parametrize("winding", [-1, 0, 2])
def test_triangle_degree_additivity(shift, winding):
    L0 = pz_lagrangian(1, 0)
    L1 = LinearLagrangian.line(1, -1, shift=shift, winding=winding)
    L2 = LinearLagrangian.line(1, -2, winding=winding)
    p1, p2 = intersect(L0, L1)[0], intersect(L1, L2)[0]
    c = enumerate_triangles(L0, L1, L2, p1, p2, 10)
    for q in intersect(L0, L2):
        if c.get(f"q{q.index}"):
            # rigid triangles have index 2 - k = 0
            assert q.degree - p1.degree - p2.degree == 0
