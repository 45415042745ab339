"""Tests for complexes over A = R/W and their periodic tails."""
import pytest

from lgcy import mfcat, mirror, orlov
from lgcy.ring import build_W, var

CUT = 30
S = "*"


@pytest.fixture(scope="module")
def cone():
    return orlov.cone_phi(CUT)


@pytest.fixture(scope="module")
def res():
    return orlov.resolution_A1(CUT)


def test_complexes_over_A(cone, res):
    assert orlov.verify_complex(cone)
    assert orlov.verify_complex(res)
    assert orlov.verify_complex(orlov.koszul_resolution_k(4, CUT))


def test_cone_ends_in_A(cone):
    assert cone.high == 1
    assert cone.module(1) == (0,)
    assert cone.module(0) == (0, -1, -1, -1)


def test_tails_equal_displayed(cone, res):
    assert orlov.extract_periodic_tail(cone).agrees(orlov.displayed_mf(0, CUT))
    assert orlov.extract_periodic_tail(res).agrees(orlov.displayed_mf(1, CUT))


def test_short_resolution_has_no_period():
    with pytest.raises(orlov.PeriodicityError):
        orlov.extract_periodic_tail(orlov.resolution_A1(CUT, length=3))


def test_too_few_rows():
    with pytest.raises(ValueError):
        orlov.koszul_resolution_k(1, CUT)


def test_divide_by_W():
    W = build_W(CUT).W
    x, y = var("x"), var("y")
    q, r = orlov.divide_by_W(W * y + x * y, W)
    assert q.agrees(y)
    assert r.agrees(x * y)


def lift_pattern(name):
    """Constant entries of the lift of a module map; * marks entries of positive degree."""
    r = "xyz".index(name[0])
    e = [1 if a == r else 0 for a in range(3)]
    if not name.endswith("*"):
        f0 = [[S] * 4] + [[e[a], S, S, S] for a in range(3)]
        f1 = [[S] + [-c for c in e]] + [[S] * 4 for _ in range(3)]
    else:
        f0 = [[0] + e] + [[e[a], S, S, S] for a in range(3)]
        f1 = [[S] * 4] + [[S, 0, 0, 0] for _ in range(3)]
    return f0, f1


@pytest.mark.parametrize("name", mirror.MORPHISMS)
def test_lifted_morphisms(name):
    f = mirror.orlov_morphism(name, 0, CUT)
    K = orlov.displayed_mf(1 if name.endswith("*") else 0, CUT)
    L = orlov.displayed_mf(0 if name.endswith("*") else 1, CUT)
    assert mfcat.is_closed(f, K, L)
    assert (f.f0.constant_pattern(), f.f1.constant_pattern()) == lift_pattern(name)


def test_alternative_rows_null_homotopic():
    for r in (1, 2, 3):
        src, tgt, comps = orlov.row_chain_map(r, CUT)
        h = orlov.chain_null_homotopy(comps, src, tgt, 6, CUT)
        assert h is not None
    src, tgt, comps = orlov.row_chain_map(0, CUT)
    assert orlov.chain_null_homotopy(comps, src, tgt, 6, CUT) is None


def test_even_block_entry():
    P, _ = orlov.koszul_blocks(CUT)
    assert P[1][2].constant_part() == {(1, 1, 0): -1}


def test_augmentation_kills_skew_block():
    _, Q = orlov.koszul_blocks(CUT)
    xyz = [var("x"), var("y"), var("z")]
    for j in range(1, 4):
        assert sum((xyz[k] * Q[k + 1][j] for k in range(3)), var("x") * 0).is_zero()


def test_verify_complex_detects_sign_flip(cone):
    maps = list(cone.maps)
    k = len(maps) - 2
    rows = [list(r) for r in maps[k].entries]
    rows[0][1] = -rows[0][1]
    maps[k] = mfcat.GradedMatrix(rows, maps[k].source, maps[k].target)
    bad = orlov.AComplex(cone.modules, maps, cone.marker, cone.cutoff)
    assert not orlov.verify_complex(bad)
    assert orlov.verify_complex(orlov.AComplex([], [], 0, CUT))


def test_zero_seed_lifts_to_zero(cone, res):
    seed = mfcat.GradedMatrix.zero(cone.module(0), res.module(0))
    comps = orlov.lift_chain_map(cone, res, seed, 0, 0, CUT, 6)
    assert all(m.is_zero() for m in comps.values())


def test_twist_relation():
    assert mirror.orlov_object(2, 0, CUT).agrees(mfcat.mf_twist(mirror.orlov_object(0, 0, CUT), -2))
