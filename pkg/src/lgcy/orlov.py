"""Complexes over A = R/W and the passage to matrix factorizations.

Free A-modules are twist lists, maps are :class:`GradedMatrix` over R, and
"complex over A" means every consecutive composite is divisible by W.
Positions follow cohomological indexing; ``AComplex.modules[k]`` sits at
position ``k - marker``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .mfcat import (D, GradedMatrix, MatrixFactorization, MFMorphism, mf_validate,
                    monomials_of_degree, sign_twist, solve_homotopy)
from .qseries import DEFAULT_CUTOFF, NovikovSeries, qexp
from .ring import (GradedPolynomial, X, Y, Z, build_W, divide_by_alpha, series_alpha,
                   series_wx, series_wy, series_wz)

__all__ = [
    "AComplex", "GORENSTEIN_PARAMETER", "PeriodicityError", "LiftError",
    "koszul_blocks", "displayed_mf", "koszul_resolution_k", "cone_phi", "resolution_A1",
    "extract_periodic_tail", "lift_chain_map", "verify_complex", "divide_by_W",
    "chain_map_to_mf", "chain_null_homotopy", "row_chain_map", "point_target",
]

GORENSTEIN_PARAMETER = 0


class PeriodicityError(ValueError):
    pass


class LiftError(ValueError):
    pass


@dataclass(frozen=True)
class AComplex:
    modules: Tuple[Tuple[int, ...], ...]
    maps: Tuple[GradedMatrix, ...]
    marker: int
    cutoff: Optional[Fraction] = DEFAULT_CUTOFF

    def __post_init__(self):
        object.__setattr__(self, "modules", tuple(tuple(m) for m in self.modules))
        object.__setattr__(self, "maps", tuple(self.maps))
        if self.modules and len(self.maps) != len(self.modules) - 1:
            raise ValueError("a complex needs one map between consecutive modules")

    @property
    def low(self) -> int:
        return -self.marker

    @property
    def high(self) -> int:
        return len(self.modules) - 1 - self.marker

    def has(self, n: int) -> bool:
        return bool(self.modules) and self.low <= n <= self.high

    def module(self, n: int) -> Tuple[int, ...]:
        """Twist list at position n (empty outside the stored range)."""
        return self.modules[n + self.marker] if self.has(n) else ()

    def map(self, n: int) -> GradedMatrix:
        """d^n : C^n -> C^{n+1}."""
        if self.has(n) and self.has(n + 1):
            return self.maps[n + self.marker]
        return GradedMatrix.zero(self.module(n), self.module(n + 1))

    def to_json(self):
        return {
            "marker": self.marker,
            "positions": [self.low, self.high] if self.modules else [],
            "modules": [list(m) for m in self.modules],
            "maps": [m.to_json() for m in self.maps],
        }


# ---------------------------------------------------------------------------
# the displayed blocks

@lru_cache(maxsize=8)
def koszul_blocks(cutoff=DEFAULT_CUTOFF):
    """Entries of the two alternating 4x4 blocks (first row (0 x y z), first row (0 w_x w_y w_z))."""
    cut = qexp(cutoff)
    guard = cut + 4
    wx, wy, wz = series_wx(cut), series_wy(cut), series_wz(cut)
    gx, gy, gz = series_wx(guard), series_wy(guard), series_wz(guard)
    a = series_alpha(cut)
    zero = GradedPolynomial.zero()
    ax, ay, az = X * a, Y * a, Z * a
    P = [[zero, X, Y, Z],
         [X, zero, divide_by_alpha(gz, cut), divide_by_alpha(gy, cut, -1)],
         [Y, divide_by_alpha(gz, cut, -1), zero, divide_by_alpha(gx, cut)],
         [Z, divide_by_alpha(gy, cut), divide_by_alpha(gx, cut, -1), zero]]
    Q = [[zero, wx, wy, wz],
         [wx, zero, -az, ay],
         [wy, az, zero, -ax],
         [wz, -ay, ax, zero]]
    return P, Q


def displayed_mf(which: int = 0, cutoff=DEFAULT_CUTOFF) -> MatrixFactorization:
    """M0 (which = 0) on R + R(-1)^3 -> R + R(1)^3, or M1 = M0(1), from the two blocks."""
    cut = qexp(cutoff)
    P, Q = koszul_blocks(cut)
    P0 = tuple(t + which for t in (0, -1, -1, -1))
    P1 = tuple(t + which for t in (0, 1, 1, 1))
    return MatrixFactorization(P0, P1, GradedMatrix(P, P0, P1),
                               GradedMatrix(Q, P1, _shift(P0, D)), cut, D)


def _shift(tw, n):
    return tuple(t + n for t in tw)


def _build(modules_by_pos: Dict[int, Tuple[int, ...]], entries_by_pos: Dict[int, list], cutoff) -> AComplex:
    lo, hi = min(modules_by_pos), max(modules_by_pos)
    mods = [modules_by_pos[n] for n in range(lo, hi + 1)]
    maps = [GradedMatrix(entries_by_pos[n], modules_by_pos[n], modules_by_pos[n + 1]) for n in range(lo, hi)]
    return AComplex(mods, maps, -lo, qexp(cutoff))


def _k_resolution_data(rows: int, cutoff):
    if rows < 2:
        raise ValueError("the double complex needs at least two rows")
    P, Q = koszul_blocks(cutoff)
    mods = {2: (0,), 1: (-1, -1, -1), 0: (-3, -2, -2, -2), -1: (-3, -4, -4, -4)}
    ents = {1: [[X, Y, Z]], 0: Q[1:], -1: P}
    low = 3 - 2 * rows
    n = -2
    while n >= low:
        mods[n] = _shift(mods[n + 2], -D)
        ents[n] = Q if n % 2 == 0 else P
        n -= 1
    return mods, ents


def koszul_resolution_k(rows: int = 4, cutoff=DEFAULT_CUTOFF) -> AComplex:
    """Totalization of the first ``rows`` rows of the double complex resolving k[-2].

    Positions run from 3 - 2*rows (the last complete one) up to 2.
    """
    mods, ents = _k_resolution_data(rows, cutoff)
    return _build(mods, ents, cutoff)


def cone_phi(cutoff=DEFAULT_CUTOFF, rows: int = 5) -> AComplex:
    """Cone of phi = (0 w_x w_y w_z) : k[-2] -> A, ending in A + A(-1)^3 -> A -> 0.

    Position 0 is A + A(-1)^3 and position 1 is A; below 0 the cone agrees
    with the resolution of k[-2] moved up by one.
    """
    kmods, kents = _k_resolution_data(rows, cutoff)
    _, Q = koszul_blocks(cutoff)
    zero = GradedPolynomial.zero()
    mods = {1: (0,), 0: (0, -1, -1, -1)}
    ents = {0: [[zero, X, Y, Z]], -1: Q}
    for n in range(-1, min(kmods) - 2, -1):
        mods[n] = kmods[n + 1]
        if n <= -2:
            ents[n] = kents[n + 1]
    return _build(mods, ents, cutoff)


def resolution_A1(cutoff=DEFAULT_CUTOFF, length: int = 8) -> AComplex:
    """Free resolution of A(1)_{>=0}: ... -> A(-2)+A(-1)^3 -> A^3 -> 0, ``length`` maps long."""
    P, Q = koszul_blocks(cutoff)
    mods = {0: (0, 0, 0), -1: (-2, -1, -1, -1), -2: (-2, -3, -3, -3)}
    ents = {-1: Q[1:], -2: P}
    n = -3
    while n >= -length:
        mods[n] = _shift(mods[n + 2], -D)
        ents[n] = Q if n % 2 else P
        n -= 1
    return _build(mods, ents, cutoff)


# ---------------------------------------------------------------------------
# divisibility by W

def divide_by_W(p: GradedPolynomial, W: GradedPolynomial):
    """Division with remainder by W in lex order (leading monomial x^3).

    Returns ``(quotient, remainder)``; p is divisible by W iff the remainder
    vanishes below its cutoff.
    """
    lead = max(W.monomials())
    lc_inv = W.coefficient(lead).inv()
    q = GradedPolynomial.zero()
    r = p
    while True:
        cands = [m for m in r.monomials() if all(a >= b for a, b in zip(m, lead))]
        if not cands:
            return q, r
        m = max(cands)
        c = r.coefficient(m) * lc_inv
        mono = GradedPolynomial({tuple(a - b for a, b in zip(m, lead)): c})
        q = q + mono
        r = r - mono * W
        if r.coefficient(m):
            raise ArithmeticError("division by W did not cancel the leading term")


def _divisible(p: GradedPolynomial, W: GradedPolynomial) -> bool:
    if not p:
        return True
    _, r = divide_by_W(p, W)
    return r.is_zero()


def verify_complex(C: AComplex, W: Optional[GradedPolynomial] = None) -> bool:
    """Every consecutive composite is entrywise divisible by W, and all maps are graded."""
    if not C.modules:
        return True
    if W is None:
        W = build_W(C.cutoff if C.cutoff is not None else DEFAULT_CUTOFF).W
    for m in C.maps:
        if not m.is_graded():
            return False
    for n in range(C.low, C.high - 1):
        comp = C.map(n + 1) @ C.map(n)
        for row in comp.entries:
            for e in row:
                if e and not _divisible(e, W):
                    return False
    return True


# ---------------------------------------------------------------------------
# periodic tails

def _pair_matches(C: AComplex, e: int) -> bool:
    """maps at e, e+1 equal the maps at e-2, e-1 twisted by d."""
    for k in (0, 1):
        a, b = C.map(e + k), C.map(e - 2 + k)
        if not (C.has(e + k + 1) and C.has(e - 2 + k)):
            return False
        if a.shape != b.shape or a.entries != b.entries:
            return False
        if a.source != _shift(b.source, D) or a.target != _shift(b.target, D):
            return False
    return True


def periodic_position(C: AComplex) -> int:
    """Highest even position e whose map pair repeats one period lower."""
    e = C.high - 2 if (C.high - 2) % 2 == 0 else C.high - 3
    while e - 2 >= C.low:
        if _pair_matches(C, e):
            return e
        e -= 2
    raise PeriodicityError("periodicity not detected within the available length")


def extract_periodic_tail(C: AComplex) -> MatrixFactorization:
    """One period of the tail, twisted so that the even part sits at position 0."""
    e = periodic_position(C)
    tw = -D * (e // 2)
    P0 = _shift(C.module(e), tw)
    P1 = _shift(C.module(e + 1), tw)
    M = MatrixFactorization(P0, P1, C.map(e).twist(tw), C.map(e + 1).twist(tw), C.cutoff, D)
    if not mf_validate(M):
        raise PeriodicityError("the extracted period is not a matrix factorization")
    return M


# ---------------------------------------------------------------------------
# lifting chain maps

def _w_identity_partner(T: AComplex, n: int, W) -> Optional[GradedMatrix]:
    """d_T^{n-1} if d_T^n d_T^{n-1} = W id (so W-multiples into T^{n+1} lift exactly)."""
    if not (T.has(n - 1) and T.has(n + 1)):
        return None
    a, b = T.map(n), T.map(n - 1)
    if a.shape[0] != a.shape[1] or b.shape != a.shape:
        return None
    comp = a @ b
    ident = GradedMatrix.identity(comp.source, W)
    return b if comp.agrees(ident.with_twists(comp.source, comp.target), T.cutoff) else None


def lift_chain_map(source: AComplex, target: AComplex, seed: GradedMatrix, position: int = 0,
                   shift: int = 0, cutoff=None, degree_bound: int = 6,
                   free_seed: bool = True) -> Dict[int, GradedMatrix]:
    """Lift ``seed : source^position -> target^{position+shift}`` to a chain map.

    Components f^n : source^n -> target^{n+shift} are solved downwards so that
    d_T f^{n-1} = f^n d_S modulo W.  Each step solves two squares jointly and
    keeps the upper component, so a choice that cannot be continued (the
    target need not be exact at its top positions) is never made.  Entries of
    the seed whose required degree is positive are unknowns when
    ``free_seed``; they are the undetermined entries of the displayed seeds.
    Wherever the target is already 2-periodic the W-multiple is absorbed, so
    those squares commute exactly over R.  Returns ``{n: f^n}``.
    """
    cut = qexp(cutoff) if cutoff is not None else min(c for c in (source.cutoff, target.cutoff) if c is not None)
    W = build_W(cut).W

    def w_block(src, tgt):
        low = _shift(tgt, -D)
        return (src, low, 0, degree_bound), GradedMatrix.identity(low, W).with_twists(low, tgt)

    comps: Dict[int, GradedMatrix] = {position: seed}
    n = position
    first = True
    while source.has(n - 1):
        fn = comps[n]
        src1, tgt1 = source.module(n - 1), target.module(n - 1 + shift)
        tgt0 = target.module(n + shift)
        if not src1 or not tgt1:
            comps[n - 1] = GradedMatrix.zero(src1, tgt1)
            n -= 1
            first = False
            continue
        free = free_seed and first and any(
            fn.required_degree(i, j) > 0 for i in range(len(fn.target)) for j in range(len(fn.source)))
        fixed = fn
        if free:
            fixed = GradedMatrix([[fn[i, j] if fn.required_degree(i, j) <= 0 else 0
                                   for j in range(len(fn.source))] for i in range(len(fn.target))],
                                 fn.source, fn.target)
        unknowns = [(src1, tgt1, 0, degree_bound)]
        eq0 = [(0, target.map(n - 1 + shift), None, 1)]
        eq1 = []
        i_seed = i_next = i_c0 = None
        if free:
            unknowns.append((fn.source, fn.target, 1, degree_bound))
            i_seed = len(unknowns) - 1
            eq0.append((i_seed, None, source.map(n - 1), -1))
        src2, tgt2 = source.module(n - 2), target.module(n - 2 + shift)
        look = bool(src2) and bool(tgt2)
        if look:
            unknowns.append((src2, tgt2, 0, degree_bound))
            i_next = len(unknowns) - 1
            eq1 = [(i_next, target.map(n - 2 + shift), None, 1), (0, None, source.map(n - 2), -1)]
        if tgt0:
            spec, wm = w_block(src1, tgt0)
            unknowns.append(spec)
            i_c0 = len(unknowns) - 1
            eq0.append((i_c0, wm, None, -1))
        if look:
            spec, wm = w_block(src2, tgt1)
            unknowns.append(spec)
            eq1.append((len(unknowns) - 1, wm, None, -1))
        rhs0 = fixed @ source.map(n - 1) if tgt0 else GradedMatrix.zero(src1, tgt0)
        targets, terms = [rhs0], [eq0]
        if look:
            targets.append(GradedMatrix.zero(src2, tgt1))
            terms.append(eq1)
        res = solve_homotopy(targets, unknowns, terms, degree_bound, cut)
        if res is None:
            raise LiftError(f"no lift at position {n - 1}: the seed does not commute modulo W")
        sol, _ = res
        f_prev = sol[0]
        if free:
            comps[n] = fixed + sol[i_seed]
        if i_c0 is not None:
            C = sol[i_c0]
            partner = _w_identity_partner(target, n - 1 + shift, W)
            if partner is not None and not C.is_zero():
                f_prev = f_prev + partner.with_twists(_shift(tgt0, -D), tgt1) @ C
        comps[n - 1] = f_prev.truncate(cut)
        n -= 1
        first = False
    return comps


def chain_map_to_mf(comps: Dict[int, GradedMatrix], source: AComplex, target: AComplex,
                    parity: int = 0, position: Optional[int] = None) -> MFMorphism:
    """MF morphism between the periodic tails read off at an even position.

    Components are twisted by -3e/2 and signs follow :func:`mfcat.sign_twist`.
    """
    if position is None:
        e = min(periodic_position(source), periodic_position(target) - parity)
        e -= e % 2
    else:
        e = position
    if e not in comps or e + 1 not in comps:
        raise LiftError(f"the lift does not reach position {e}")
    tw = -D * (e // 2)
    return sign_twist(parity, comps[e].twist(tw), comps[e + 1].twist(tw))


# ---------------------------------------------------------------------------
# homotopies of chain maps over A

def point_target(twist: int, cutoff=DEFAULT_CUTOFF) -> AComplex:
    """The free module A(twist) concentrated at position 0."""
    return AComplex([(twist,)], [], 0, qexp(cutoff))


def row_chain_map(r: int, cutoff=DEFAULT_CUTOFF, rows: int = 3):
    """Row r of the 4x4 block (first row (0 w_x w_y w_z)) as a chain map k[-2] -> A(t).

    Row 0 is phi.  Returns ``(source complex, target complex, {0: map})``.
    """
    F = koszul_resolution_k(rows, cutoff)
    _, Q = koszul_blocks(cutoff)
    src = F.module(0)
    row = Q[r]
    j = next(k for k, e in enumerate(row) if e)
    t = row[j].degree() + src[j]
    T = point_target(t, cutoff)
    return F, T, {0: GradedMatrix([row], src, (t,))}


def chain_null_homotopy(comps: Dict[int, GradedMatrix], source: AComplex, target: AComplex,
                        degree_bound: int = 6, cutoff=None):
    """Find h^n : S^n -> T^{n-1} with f^n = d_T h^n + h^{n+1} d_S modulo W at every stored n.

    Returns ``{n: h^n}`` or None.
    """
    cut = qexp(cutoff) if cutoff is not None else source.cutoff
    W = build_W(cut).W
    positions = sorted(comps)
    hpos = sorted({n for n in positions} | {n + 1 for n in positions})
    hpos = [n for n in hpos if source.has(n) and target.has(n - 1)]
    idx = {n: k for k, n in enumerate(hpos)}
    unknowns = [(source.module(n), target.module(n - 1), 0, degree_bound) for n in hpos]
    targets, terms = [], []
    for n in positions:
        f = comps[n]
        eq = []
        if n in idx:
            eq.append((idx[n], target.map(n - 1), None, 1))
        if n + 1 in idx:
            eq.append((idx[n + 1], None, source.map(n), 1))
        tw = target.module(n)
        unknowns.append((source.module(n), _shift(tw, -D), 0, degree_bound))
        eq.append((len(unknowns) - 1, GradedMatrix.identity(_shift(tw, -D), W).with_twists(_shift(tw, -D), tw), None, 1))
        targets.append(f)
        terms.append(eq)
    res = solve_homotopy(targets, unknowns, terms, degree_bound, cut)
    if res is None:
        return None
    sol, _ = res
    h = {n: sol[idx[n]] for n in hpos}
    # certificate check: f - d_T h - h d_S is divisible by W
    for n in positions:
        acc = comps[n]
        if n in h:
            acc = acc - target.map(n - 1) @ h[n]
        if n + 1 in h:
            acc = acc - h[n + 1] @ source.map(n)
        for row in acc.entries:
            for e in row:
                if e and not _divisible(e, W):
                    raise AssertionError("chain homotopy certificate failed")
    return h
