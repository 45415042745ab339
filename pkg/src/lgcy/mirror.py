"""The localized mirror functor and the comparison with the Orlov side.

Objects of the Fukaya side are the images S_i(L_(1,3i)) and S_i(L_(1,3i-3)),
which are branches of the Seidel Lagrangian.  Their strip counts are graded
by the recipe below and compared with the periodic tails of the two Orlov
resolutions twisted by -i.  Morphisms are compared through their constant
entries and up to homotopy.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .fukaya import (SeidelConfig, StripData, apply_symplectomorphism, branch_index, intersect,
                     morphism_strips, point_variable, pz_lagrangian, sliver_positions, strip_matrix,
                     transform_point)
from .mfcat import (D, GradedMatrix, GradingError, MatrixFactorization, MFMorphism, NOT_FOUND,
                    complete_morphism, is_closed, is_null_homotopic, mf_shift, mf_twist)
from .orlov import (chain_map_to_mf, cone_phi, extract_periodic_tail, lift_chain_map,
                    resolution_A1)
from .qseries import qexp

__all__ = [
    "GradingRecipe", "grade_mf", "lm_object", "orlov_object", "orlov_morphism", "lm_morphism",
    "diagram_check", "mf_shift_by", "MORPHISMS", "VALUATION_FLOOR",
]

MORPHISMS = ("x", "y", "z", "x*", "y*", "z*")


@dataclass(frozen=True)
class GradingRecipe:
    """Twist of a generator on branch g (0, -1, -2) in degree k.

    Even k: -k d/2 - (d/2) a_g;  odd k: (1 - k) d/2 - (d/2) a_g, with the
    character a_{-j} = -2j/3 of the Z/3 action.
    """

    d: int = D

    def character(self, g: int) -> Fraction:
        return Fraction(2 * g, 3)

    def twist(self, g: int, k: int) -> int:
        half = Fraction(self.d, 2)
        base = -k * half if k % 2 == 0 else (1 - k) * half
        t = base - half * self.character(g)
        if t.denominator != 1:
            raise GradingError(f"non-integral twist {t} for branch {g}, degree {k}")
        return int(t)


def grade_mf(strip: StripData, recipe: GradingRecipe = GradingRecipe(), cutoff=None) -> MatrixFactorization:
    """Attach twists to the strip matrices; a-generators must sit in even degree."""
    if any(k % 2 for k in strip.degrees_even) or not all(k % 2 for k in strip.degrees_odd):
        raise GradingError("generator degrees have the wrong parity for this block order")
    P0 = tuple(recipe.twist(g, k) for g, k in zip(strip.branches_even, strip.degrees_even))
    P1 = tuple(recipe.twist(g, k) for g, k in zip(strip.branches_odd, strip.degrees_odd))
    p0 = GradedMatrix(strip.p0.entries, P0, P1)
    p1 = GradedMatrix(strip.p1.entries, P1, tuple(t + recipe.d for t in P0))
    for m in (p0, p1):
        if not m.is_graded():
            raise GradingError("strip matrix is not homogeneous for the recipe twists")
    cut = strip.cutoff if cutoff is None else qexp(cutoff)
    return MatrixFactorization(P0, P1, p0, p1, cut, recipe.d)


def mf_shift_by(M: MatrixFactorization, n: int) -> MatrixFactorization:
    """M[n]; two shifts are the twist by d."""
    if n % 2:
        M = mf_shift(M)
        n -= 1
    return mf_twist(M, M.d * n // 2)


def _lm_of(L, cutoff, config: SeidelConfig) -> MatrixFactorization:
    base = replace(L, shift=0)
    return mf_shift_by(grade_mf(strip_matrix(config, base, cutoff)), L.shift)


def _objects(i: int):
    return pz_lagrangian(1, 3 * i), pz_lagrangian(1, 3 * i - 3)


def lm_object(i: int, which: int = 0, cutoff=None, config: SeidelConfig = SeidelConfig()) -> MatrixFactorization:
    """LM of S_i(L_(1,3i)) (which = 0) or S_i(L_(1,3i-3)) (which = 1).

    The image carries the grading shift 2j, so that the result is the i = 0
    object twisted by -i.
    """
    cut = qexp(cutoff if cutoff is not None else 200)
    image = apply_symplectomorphism(i, _objects(i)[which])
    return _lm_of(image.lagrangian, cut, config)


@lru_cache(maxsize=8)
def _orlov_base(cutoff):
    C, R = cone_phi(cutoff), resolution_A1(cutoff)
    return C, R, extract_periodic_tail(C), extract_periodic_tail(R)


def orlov_object(i: int, which: int = 0, cutoff=None) -> MatrixFactorization:
    """Periodic tail of the resolution of O(-i) (which = 0) or of the resolution of A(1)_{>=0} twisted by -i."""
    cut = qexp(cutoff if cutoff is not None else 200)
    _, _, M0, M1 = _orlov_base(cut)
    return mf_twist(M0 if which == 0 else M1, -i)


@lru_cache(maxsize=32)
def _orlov_morphism0(name: str, cutoff, degree_bound: int) -> MFMorphism:
    C, R, _, _ = _orlov_base(cutoff)
    r = "xyz".index(name[0])
    if not name.endswith("*"):
        rows = [[1 if (a == r and b == 0) else 0 for b in range(len(C.module(0)))] for a in range(len(R.module(0)))]
        seed = GradedMatrix(rows, C.module(0), R.module(0))
        comps = lift_chain_map(C, R, seed, 0, 0, cutoff, degree_bound)
        return chain_map_to_mf(comps, C, R, 0)
    cols = [[1 if b == r else 0 for b in range(len(R.module(0)))]]
    seed = GradedMatrix(cols, R.module(0), C.module(1))
    comps = lift_chain_map(R, C, seed, 0, 1, cutoff, degree_bound)
    return chain_map_to_mf(comps, R, C, 1)


def _twist_morphism(f: MFMorphism, n: int) -> MFMorphism:
    return MFMorphism(f.parity, f.f0.twist(n), f.f1.twist(n))


def orlov_morphism(name: str, i: int = 0, cutoff=None, degree_bound: int = 6) -> MFMorphism:
    """Lift of the module map named by ``name`` (x, y, z or x*, y*, z*), twisted by -i."""
    cut = qexp(cutoff if cutoff is not None else 200)
    return _twist_morphism(_orlov_morphism0(name, cut, degree_bound), -i)


def _with_twists(f: MFMorphism, K: MatrixFactorization, L: MatrixFactorization) -> MFMorphism:
    j = f.parity
    return MFMorphism(j, GradedMatrix(f.f0.entries, K.term(0), L.term(j)),
                      GradedMatrix(f.f1.entries, K.term(1), L.term(j + 1)))


def lm_morphism(name: str, i: int, cutoff=None, config: SeidelConfig = SeidelConfig()):
    """Constant part of the image of the intersection point ``name``.

    Returns ``(constants, K, L)`` with K, L the LM objects; for the starred
    morphisms L is the shifted object and the constants have parity 1 into
    the unshifted one.
    """
    cut = qexp(cutoff if cutoff is not None else 200)
    A, B = _objects(i)
    SA = apply_symplectomorphism(i, A).lagrangian
    SB = apply_symplectomorphism(i, B).lagrangian
    star = name.endswith("*")
    src, tgt = (SB, SA.shifted(1)) if star else (SA, SB)
    r = branch_index(SA)
    w = None
    for p in intersect(src, tgt):
        if point_variable(config, p.location, r) == name[0]:
            w = p
    if w is None:
        raise ValueError(f"no intersection point labelled {name}")
    consts = morphism_strips(config, src, tgt, w, cut)
    K = _lm_of(src, cut, config)
    L = _lm_of(SA, cut, config) if star else _lm_of(tgt, cut, config)
    return _with_twists(consts, K, L), K, L


def _check_labels(i: int, config: SeidelConfig) -> bool:
    """S_i sends (0,0), (1/3,0), (2/3,0) to the immersed points y, x, z."""
    A, _ = _objects(i)
    r = branch_index(apply_symplectomorphism(i, A).lagrangian)
    got = [point_variable(config, transform_point(i, (Fraction(k, 3), 0)), r) for k in range(3)]
    return got == ["y", "x", "z"]


def _compare_objects(name, lm, orl, cut):
    twist = lm.P0 == orl.P0 and lm.P1 == orl.P1
    matrix = twist and lm.agrees(orl, cut)
    const = (lm.p0.constant_pattern() == orl.p0.constant_pattern()
             and lm.p1.constant_pattern() == orl.p1.constant_pattern())
    return {"name": name, "kind": "object", "twist_match": twist, "matrix_match": matrix,
            "constant_match": const, "homotopy_match": matrix}


# morphisms are compared over the Novikov field; homotopies may need one
# division by alpha, whose valuation is 1
VALUATION_FLOOR = -1


@lru_cache(maxsize=64)
def _complete0(name: str, cutoff, degree_bound: int, floor, config: SeidelConfig):
    """Completion of the i = 0 constants and its comparison with the Orlov lift."""
    consts, K, L = lm_morphism(name, 0, cutoff, config)
    F = orlov_morphism(name, 0, cutoff, degree_bound)
    full = complete_morphism(consts, K, L, degree_bound, cutoff, floor, sliver_positions(consts.parity))
    if isinstance(full, str):
        return consts, K, L, None, False
    h = is_null_homotopic(F - full, K, L, degree_bound, cutoff, floor)
    return consts, K, L, full, not isinstance(h, str)


def _morphism_entry(name, i, cut, degree_bound, floor, config, objs, labels_ok):
    entry = {"name": f"morphism:{name}", "kind": "morphism"}
    consts, K, L = lm_morphism(name, i, cut, config)
    F = orlov_morphism(name, i, cut, degree_bound)
    Ko, Lo = (objs[1][1], objs[0][1]) if name.endswith("*") else (objs[0][1], objs[1][1])
    entry["twist_match"] = (consts.f0.source == F.f0.source and consts.f0.target == F.f0.target
                            and consts.f1.source == F.f1.source and consts.f1.target == F.f1.target)
    entry["constant_match"] = labels_ok and (
        consts.f0.constant_pattern() == F.f0.constant_pattern()
        and consts.f1.constant_pattern() == F.f1.constant_pattern())
    entry["matrix_match"] = entry["homotopy_match"] = False
    if not (entry["twist_match"] and K.agrees(Ko, cut) and L.agrees(Lo, cut)):
        return entry
    c0, K0, L0, full0, hom0 = _complete0(name, cut, degree_bound, floor, config)
    # the systems at index i are the i = 0 systems twisted by -i
    if (consts.agrees(_twist_morphism(c0, -i), cut) and K.agrees(mf_twist(K0, -i), cut)
            and L.agrees(mf_twist(L0, -i), cut)):
        full = None if full0 is None else _twist_morphism(full0, -i)
        hom = hom0
    else:
        full = complete_morphism(consts, K, L, degree_bound, cut, floor, sliver_positions(consts.parity))
        full = None if isinstance(full, str) else full
        hom = full is not None and not isinstance(
            is_null_homotopic(F - full, Ko, Lo, degree_bound, cut, floor), str)
    if full is not None:
        entry["matrix_match"] = full.agrees(F, cut)
        entry["homotopy_match"] = hom
    return entry


def diagram_check(i: int, cutoff=None, degree_bound: int = 6,
                  config: SeidelConfig = SeidelConfig(), valuation_floor=VALUATION_FLOOR) -> dict:
    """Compare both sides of the square for the index i.

    Objects must agree exactly.  A morphism passes when its twists and its
    constant entries agree and the Fukaya-side morphism, completed from the
    entries the sliver count determines, is homotopic to the Orlov lift; full
    matrix equality is reported but not required.
    """
    cut = qexp(cutoff if cutoff is not None else 200)
    comps: List[dict] = []
    objs = {}
    for which, label in ((0, "object:L(1,3i)"), (1, "object:L(1,3i-3)")):
        lm = lm_object(i, which, cut, config)
        orl = orlov_object(i, which, cut)
        objs[which] = (lm, orl)
        comps.append(_compare_objects(label, lm, orl, cut))
    labels_ok = _check_labels(i, config)
    for name in MORPHISMS:
        comps.append(_morphism_entry(name, i, cut, degree_bound, qexp(valuation_floor), config, objs, labels_ok))
    ok = all(c["twist_match"] and c["constant_match"] and c["homotopy_match"]
             and (c["kind"] == "morphism" or c["matrix_match"]) for c in comps)
    return {"index": i, "cutoff": str(cut), "comparisons": comps, "pass": ok}
