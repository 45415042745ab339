"""Combinatorial Floer theory on the hexagonal torus.

Points of the torus C/(Z + wZ), w = exp(2 pi i/3), are written in lattice
coordinates (a, b) meaning a + b w; the fundamental domain has area 1 in the
unit used for the theta counts.  A linear Lagrangian is a closed line with a
primitive integer direction.

The Seidel Lagrangian is L + tau(L) + tau^2(L) with L the vertical line through
(1 + w)/2 and tau the rotation by -2 pi/3.  Its analysis uses trilinear
coordinates u_r = 2 det(v_r, p), r = 0, 1, 2, where v_r is the direction of
tau^r(L); u0 + u1 + u2 = 0 and the lifts of tau^r(L) are the lines u_r = odd.
In these coordinates the deck group is {2(a, b, c) : a = b = c mod 3}, a
triangle cut out by u_r = a_r has area (a0 + a1 + a2)^2 in units of the
smallest xyz-triangle (the q_alpha unit), and a corner u_r = a, u_{r+1} = b is
an immersed point of class ((a - b) // 2) mod 3.

The sign conventions and the positions of the spin markers and of the
perturbation data are collected in :class:`SeidelConfig`; they were fixed
once so that the decorated-polygon count returns the potential W of
:mod:`lgcy.ring` and the strip count returns its matrix factorizations.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .mfcat import GradedMatrix, MFMorphism, sign_twist
from .qseries import NovikovSeries, qexp
from .ring import GradedPolynomial

Vec = Tuple[Fraction, Fraction]

__all__ = [
    "LinearLagrangian", "IntersectionPoint", "CountSeries", "SeidelConfig", "StripData",
    "SymplectomorphismImage", "ParallelLinesError", "UngradedError", "TransversalityError",
    "intersect", "intersection_degree", "apply_symplectomorphism", "enumerate_triangles",
    "enumerate_decorated_polygons", "strip_matrix", "morphism_strips", "theta_series",
    "theta_function", "addition_formula_check", "seidel_branch", "trilinear", "corner_class",
    "pz_lagrangian", "potential_from_polygons", "transform_point", "point_variable",
    "branch_index", "corner_points", "sliver_positions",
]


class ParallelLinesError(ValueError):
    pass


class UngradedError(ValueError):
    pass


class TransversalityError(ValueError):
    pass


# ---------------------------------------------------------------------------
# lattice geometry

def _vec(p) -> Vec:
    return (Fraction(p[0]), Fraction(p[1]))


def _det(u, v) -> Fraction:
    return u[0] * v[1] - u[1] * v[0]


def _mod1(p) -> Vec:
    return (Fraction(p[0]) % 1, Fraction(p[1]) % 1)


def _cross_sign(u, v) -> int:
    # the basis (1, w) is positively oriented, so Im(conj(u) v) has the sign of det
    d = _det(u, v)
    return (d > 0) - (d < 0)


def _upper(v) -> bool:
    """arg v in [0, pi] (as opposed to (-pi, 0))."""
    im = v[1]  # Im(a + b w) = b sqrt(3)/2
    re = v[0] - Fraction(v[1]) / 2
    return im > 0 or (im == 0 and re != 0)


def _arg_less(u, v) -> bool:
    """Exact comparison of principal arguments in (-pi, pi]."""
    hu, hv = _upper(u), _upper(v)
    if hu != hv:
        return hv
    if _det(u, v) != 0:
        return _det(u, v) > 0
    # parallel: equal argument unless opposite, then the upper one is larger
    re_u = u[0] - Fraction(u[1]) / 2
    re_v = v[0] - Fraction(v[1]) / 2
    if u[1] == 0 and v[1] == 0:
        return re_u > 0 > re_v
    return False


# arguments (in units of pi) of the twelve directions that occur with rational phase
_HEX_ARG = {
    (1, 0): Fraction(0), (2, 1): Fraction(1, 6), (1, 1): Fraction(1, 3), (1, 2): Fraction(1, 2),
    (0, 1): Fraction(2, 3), (-1, 1): Fraction(5, 6), (-1, 0): Fraction(1), (-2, -1): Fraction(-5, 6),
    (-1, -1): Fraction(-2, 3), (-1, -2): Fraction(-1, 2), (0, -1): Fraction(-1, 3), (1, -1): Fraction(-1, 6),
}


def _rotate_tau(v):
    """Multiplication by exp(-2 pi i/3) = w^2 in lattice coordinates."""
    return (v[1] - v[0], -v[0])


def _shear(i: int, v):
    return (v[0], (-3 * i + 2) * v[0] + v[1])


def _continued_winding(old, new, winding: int) -> int:
    """Winding of ``new`` when the true change of argument lies in (-pi, pi)."""
    if _arg_less(old, new) and _det(old, new) < 0:
        return winding - 1
    if _arg_less(new, old) and _det(old, new) > 0:
        return winding + 1
    return winding


@dataclass(frozen=True)
class LinearLagrangian:
    """The closed line point + t*direction on the torus.

    ``winding`` lifts the phase: theta = arg(direction)/pi + 2*winding, and the
    formal shift [n] lowers it by n.  ``frac_phase`` is the constant phase for
    the 1/3-grading (None if not used).  ``spin_marker`` is the line parameter
    (mod 1) of the point marking a nontrivial spin structure.
    """

    direction: Tuple[int, int]
    point: Vec = (Fraction(0), Fraction(0))
    shift: int = 0
    winding: int = 0
    frac_phase: Optional[Fraction] = None
    spin_marker: Optional[Fraction] = None
    name: str = ""

    def __post_init__(self):
        a, b = int(self.direction[0]), int(self.direction[1])
        if math.gcd(a, b) != 1:
            raise ValueError(f"direction {(a, b)} is not primitive")
        object.__setattr__(self, "direction", (a, b))
        object.__setattr__(self, "point", _mod1(self.point))

    @classmethod
    def line(cls, a: int, b: int, c=0, **kw) -> "LinearLagrangian":
        """The line (c, 0) + t(a, b)."""
        return cls((a, b), (Fraction(c), Fraction(0)), **kw)

    @property
    def offset(self) -> Optional[Fraction]:
        """c with the line equal to (c, 0) + t*direction, or None for horizontal lines."""
        a, b = self.direction
        if b == 0:
            return None
        return (self.point[0] - self.point[1] * Fraction(a, b)) % Fraction(1, abs(b))

    @property
    def invariant(self) -> Fraction:
        """det(direction, point) mod 1; it determines the unoriented line."""
        return _det(self.direction, self.point) % 1

    @property
    def phase(self) -> Optional[Fraction]:
        """theta/pi including winding and shift, when the argument is rational."""
        arg = _HEX_ARG.get(self.direction)
        if arg is None:
            return None
        return arg + 2 * self.winding - self.shift

    def same_line(self, other: "LinearLagrangian") -> bool:
        d1, d2 = self.direction, other.direction
        return _det(d1, d2) == 0 and (_det(d1, other.point) - _det(d1, self.point)) % 1 == 0

    def param(self, p) -> Fraction:
        """Line parameter (mod 1) of a point of the line."""
        a, b = self.direction
        g, ua, ub = _ext_gcd(a, b)
        u = (-ub, ua)  # det(direction, u) = a*ua + b*ub = 1
        diff = (Fraction(p[0]) - self.point[0], Fraction(p[1]) - self.point[1])
        if _det(self.direction, diff) % 1 != 0:
            raise ValueError("point is not on the line")
        return _det(diff, u) % 1

    def shifted(self, n: int) -> "LinearLagrangian":
        return replace(self, shift=self.shift + n)

    def to_json(self):
        return {"direction": list(self.direction), "point": [str(c) for c in self.point],
                "shift": self.shift, "winding": self.winding,
                "phase": None if self.phase is None else str(self.phase), "name": self.name}


def _ext_gcd(a: int, b: int):
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, x, y = _ext_gcd(b, a % b)
    return (g, y, x - (a // b) * y)


@dataclass(frozen=True)
class IntersectionPoint:
    location: Vec
    source: LinearLagrangian
    target: LinearLagrangian
    s: Fraction  # parameter on the source
    t: Fraction  # parameter on the target
    index: int = 0

    @property
    def degree(self) -> Optional[int]:
        try:
            return intersection_degree(self, self.source, self.target)
        except UngradedError:
            return None

    def to_json(self):
        return {"location": [str(c) for c in self.location], "index": self.index,
                "degree": self.degree}


def intersect(L1: LinearLagrangian, L2: LinearLagrangian) -> List[IntersectionPoint]:
    """The |det| intersection points, ordered by their parameter on L1."""
    v1, v2 = L1.direction, L2.direction
    det = _det(v1, v2)
    if det == 0:
        raise ParallelLinesError("parallel lines: transverse intersection needed")
    base = _det((L1.point[0] - L2.point[0], L1.point[1] - L2.point[1]), v2)
    # s det + base must be an integer k, 0 <= s < 1
    ks = range(math.floor(min(base, base + det)), math.ceil(max(base, base + det)) + 1)
    pts = []
    for k in ks:
        s = (k - base) / det
        if not 0 <= s < 1:
            continue
        loc = _mod1((L1.point[0] + s * v1[0], L1.point[1] + s * v1[1]))
        pts.append((s, loc))
    pts.sort()
    return [IntersectionPoint(loc, L1, L2, s, L2.param(loc), n) for n, (s, loc) in enumerate(pts)]


def intersection_degree(p: IntersectionPoint, L1: LinearLagrangian, L2: LinearLagrangian,
                        fractional: bool = False):
    """Degree of p as a morphism L1 -> L2.

    Z-grading: theta_2 - theta_1 + psi, with pi*psi in (0, pi) the angle of
    the positive definite path from T L2 to T L1; this is the ceiling of
    theta_2 - theta_1.  With ``fractional`` the 1/3-grading is used:
    (theta'_2 - theta'_1 + 3 psi)/3 for the constant phases theta'.
    """
    v1, v2 = L1.direction, L2.direction
    if _det(v1, v2) == 0:
        raise TransversalityError("degree of a non-transverse intersection")
    if fractional:
        if L1.frac_phase is None or L2.frac_phase is None:
            raise UngradedError("fractional degree needs 1/3-graded Lagrangians")
        a1, a2 = _HEX_ARG.get(v1), _HEX_ARG.get(v2)
        if a1 is None or a2 is None:
            raise UngradedError("fractional degree needs rational phase angles")
        psi = (a1 - a2) % 1
        return (L2.frac_phase - L1.frac_phase + 3 * psi) / 3
    # ceil((arg2 - arg1)/pi) from exact comparisons
    if _arg_less(v1, v2):
        c = 1 if _det(v1, v2) > 0 else 2
    else:
        c = -1 if _det(v1, v2) > 0 else 0
    return c + 2 * (L2.winding - L1.winding) - (L2.shift - L1.shift)


# ---------------------------------------------------------------------------
# the Seidel configuration

def seidel_branch(r: int) -> LinearLagrangian:
    """tau^r(L) for r = 0, 1, 2 with phase pi/2 - 2 pi r/3 and 1/3-phase -1/2."""
    r %= 3
    v, p = (1, 2), (Fraction(1, 2), Fraction(1, 2))
    for _ in range(r):
        v, p = _rotate_tau(v), _rotate_tau(p)
    return LinearLagrangian(v, p, frac_phase=Fraction(-1, 2), name=f"tau^{r}(L)")


_BRANCH_DIRS = tuple(seidel_branch(r).direction for r in range(3))


def trilinear(p) -> Tuple[Fraction, Fraction, Fraction]:
    """(u0, u1, u2) of a lift p in lattice coordinates."""
    return tuple(2 * _det(v, _vec(p)) for v in _BRANCH_DIRS)


def corner_class(p) -> Tuple[int, int]:
    """(r, class) of an immersed point: it lies on branches r and r+1."""
    u = trilinear(p)
    odd = [r for r in range(3) if u[r].denominator == 1 and int(u[r]) % 2 == 1]
    if len(odd) < 2:
        raise ValueError("not an immersed point of the Seidel Lagrangian")
    r = next(r for r in range(3) if r in odd and (r + 1) % 3 in odd)
    return r, _cls(int(u[r]), int(u[(r + 1) % 3]))


def _cls(a: int, b: int) -> int:
    return ((a - b) // 2) % 3


def branch_index(L: LinearLagrangian) -> int:
    """r with L equal to tau^r(L) as an unoriented line."""
    for r in range(3):
        if seidel_branch(r).same_line(L):
            return r
    raise TransversalityError("only branches of the Seidel Lagrangian are supported as targets")


@dataclass(frozen=True)
class SeidelConfig:
    """Calibration constants of the combinatorial model.

    marker: position of the spin marker of each branch, as u_{r+1} = u_r + marker mod 6
    target_marker: the same for the target L' (relative to its line u = 1)
    tip_a, tip_b: line parameters (u1 - 1, mod 6) of the two intersections a0, b0
        left by the perturbation of L' along its own branch
    target_orientation: +1 if L' is traversed with increasing u1
    branch_orientation: +1 if each branch is traversed with increasing u_{r+1}
    output_point: position of the point class used for the potential
    variables: the variable attached to each corner class
    """

    marker: Fraction = Fraction(17, 4)
    target_marker: Fraction = Fraction(17, 4)
    tip_a: Fraction = Fraction(7, 2)
    tip_b: Fraction = Fraction(3, 2)
    target_orientation: int = 1
    branch_orientation: int = -1
    output_point: Fraction = Fraction(1, 4)
    variables: Tuple[str, str, str] = ("y", "z", "x")

    def inverted(self) -> "SeidelConfig":
        """The configuration with the spin markers moved by half a period (flips marker parities)."""
        return replace(self, marker=self.marker + 3, target_marker=self.target_marker + 3)

    def to_json(self):
        return {"marker": str(self.marker), "target_marker": str(self.target_marker),
                "tip_a": str(self.tip_a), "tip_b": str(self.tip_b),
                "target_orientation": self.target_orientation,
                "branch_orientation": self.branch_orientation,
                "output_point": str(self.output_point), "variables": "".join(self.variables)}


def _n_marks(lo, hi, off) -> int:
    """Number of points off + 6k strictly between lo and hi."""
    lo, hi = min(lo, hi), max(lo, hi)
    return max(0, math.floor((hi - off) / 6) - math.ceil((lo - off) / 6) + 1)


def _lifts(t0, lo, hi) -> List[Fraction]:
    """Lifts t0 + 6k strictly inside (lo, hi)."""
    lo, hi = min(lo, hi), max(lo, hi)
    k = math.floor((lo - t0) / 6) + 1
    out = []
    while t0 + 6 * k < hi:
        out.append(t0 + 6 * k)
        k += 1
    return out


# ---------------------------------------------------------------------------
# count containers

def _mono_key(mono: Tuple[int, int, int]) -> str:
    s = "".join(v * k for v, k in zip("xyz", mono))
    return s or "1"


@dataclass
class CountSeries:
    """Output generator (and decoration monomial) -> NovikovSeries."""

    cutoff: Fraction
    series: Dict[Tuple[str, str], NovikovSeries] = field(default_factory=dict)

    def add(self, gen: str, mono: str, exponent, coeff) -> None:
        key = (gen, mono)
        cur = self.series.get(key, NovikovSeries.zero(self.cutoff))
        self.series[key] = cur + NovikovSeries({exponent: coeff}, self.cutoff)

    def get(self, gen: str, mono: str = "1") -> NovikovSeries:
        return self.series.get((gen, mono), NovikovSeries.zero(self.cutoff))

    def generators(self) -> List[str]:
        return sorted({g for g, _ in self.series})

    def to_json(self):
        out: Dict[str, Dict[str, object]] = {}
        for (g, m) in sorted(self.series):
            s = self.series[(g, m)]
            if s:
                out.setdefault(g, {})[m] = s.to_json()
        return {"cutoff": str(self.cutoff), "counts": out}


# ---------------------------------------------------------------------------
# triangles for lines (theta functions)

def _count_markers(L: LinearLagrangian, s0: Fraction, s1: Fraction) -> int:
    if L.spin_marker is None:
        return 0
    return len(_lifts_unit(L.spin_marker, s0, s1))


def _lifts_unit(t0, lo, hi):
    lo, hi = min(lo, hi), max(lo, hi)
    k = math.floor(lo - t0) + 1
    out = []
    while t0 + k < hi:
        out.append(t0 + k)
        k += 1
    return out


def enumerate_triangles(L0: LinearLagrangian, L1: LinearLagrangian, L2: LinearLagrangian,
                        p1: IntersectionPoint, p2: IntersectionPoint, area_cutoff) -> CountSeries:
    """m2(p1, p2) for p1 in CF(L0, L1), p2 in CF(L1, L2), as series per output of CF(L0, L2).

    Triangles are enumerated in the universal cover with the corner p1 fixed at
    a lift: the second corner runs over the lifts of p2 on the L1-edge and the
    third corner is forced.  Corners p1, p2, output are counterclockwise; the
    area is measured in fundamental-domain units.  The constant triangle is
    counted (with coefficient 1) when p1 = p2 is also an output.  Signs are
    (-1) to the number of spin markers on the boundary.
    """
    cut = qexp(area_cutoff)
    v0, v1, v2 = L0.direction, L1.direction, L2.direction
    if 0 in (_det(v0, v1), _det(v1, v2), _det(v0, v2)):
        raise ParallelLinesError("triangles need pairwise transverse lines")
    outs = intersect(L0, L2)
    names = {o.location: f"q{o.index}" for o in outs}
    res = CountSeries(cut)
    for o in outs:
        res.series[(f"q{o.index}", "1")] = NovikovSeries.zero(cut)
    P = p1.location
    t0 = (L1.param(p2.location) - L1.param(P)) % 1
    ratio = Fraction(_det(v2, v1), _det(v2, v0))
    orient = ratio * _det(v1, v0)  # det(A - P, B - P) = t^2 * orient
    if orient < 0:
        # clockwise for every t: only the constant triangle can contribute
        if t0 == 0 and P in names:
            res.add(names[P], "1", 0, 1)
        return res
    c = abs(orient) / 2
    bound = math.isqrt(int(cut / c) + 1) + 2 if c else 0
    for n in range(-bound - 1, bound + 2):
        t = t0 + n
        area = c * t * t
        if area >= cut:
            continue
        w = t * ratio
        B = _mod1((P[0] + w * v0[0], P[1] + w * v0[1]))
        if B not in names:
            raise AssertionError("triangle corner is not an intersection point")
        A = (P[0] + t * v1[0], P[1] + t * v1[1])
        step = (w * v0[0] - t * v1[0], w * v0[1] - t * v1[1])  # B - A along v2
        u = step[0] / v2[0] if v2[0] else step[1] / v2[1]
        s1, s2, s0 = L1.param(P), L2.param(_mod1(A)), L0.param(P)
        marks = (_count_markers(L1, s1, s1 + t) + _count_markers(L2, s2, s2 + u)
                 + _count_markers(L0, s0, s0 + w))
        res.add(names[B], "1", area, -1 if marks % 2 else 1)
    return res


def pz_lagrangian(a: int, b: int, c=0, name: str = "") -> LinearLagrangian:
    """L_(a,b) through (c, 0), graded with winding 0."""
    return LinearLagrangian.line(a, b, c, name=name or f"L({a},{b})")


# ---------------------------------------------------------------------------
# theta functions

def theta_function(c, cutoff, w_power: int = 1, level: int = 1) -> Dict[Fraction, NovikovSeries]:
    """theta[c](w^w_power) at modulus level*tau: {exponent of w: q-series}.

    theta[c](u) = sum_m q^{level (m+c)^2 / 2} u^{m+c}.
    """
    c = Fraction(c)
    cut = qexp(cutoff)
    out: Dict[Fraction, NovikovSeries] = {}
    bound = math.isqrt(int(2 * cut / level) + 1) + 2
    for m in range(-bound - 1, bound + 2):
        e = Fraction(level) * (m + c) ** 2 / 2
        if e < cut:
            out[w_power * (m + c)] = NovikovSeries({e: 1}, cut)
    return out


def theta_series(c, cutoff, level: int = 1) -> NovikovSeries:
    """theta[c](1)."""
    cut = qexp(cutoff)
    acc = NovikovSeries.zero(cut)
    for s in theta_function(c, cut, 1, level).values():
        acc = acc + s
    return acc


def _theta_mul(f, g, cut):
    out: Dict[Fraction, NovikovSeries] = {}
    for a, s in f.items():
        for b, t in g.items():
            p = (s * t).truncate(cut)
            if p:
                out[a + b] = out.get(a + b, NovikovSeries.zero(cut)) + p
    return {k: v for k, v in out.items() if v}


def addition_formula_check(cutoff) -> bool:
    """theta[0](w)^2 = theta[0](1) theta[0](w^2) + theta[1/2](1) theta[1/2](w^2).

    The right-hand factors are taken at the doubled modulus 2 tau; coefficients
    of every power of w are compared up to the cutoff.
    """
    cut = qexp(cutoff)
    lhs = _theta_mul(theta_function(0, cut), theta_function(0, cut), cut)
    rhs: Dict[Fraction, NovikovSeries] = {}
    for c in (Fraction(0), Fraction(1, 2)):
        const = {Fraction(0): theta_series(c, cut, level=2)}
        for k, v in _theta_mul(const, theta_function(c, cut, 2, level=2), cut).items():
            rhs[k] = rhs.get(k, NovikovSeries.zero(cut)) + v
    rhs = {k: v for k, v in rhs.items() if v}
    return set(lhs) == set(rhs) and all(lhs[k].agrees(rhs[k], cut) for k in lhs)


# ---------------------------------------------------------------------------
# symplectomorphisms

@dataclass(frozen=True)
class SymplectomorphismImage:
    """Image of a Lagrangian under S_i, with the data of its construction.

    ``lagrangian`` carries the grading shift 2j that makes the localized mirror
    functor match the i = 0 computation twisted by -i; ``formal_shift`` is -j.
    """

    i: int
    d: int
    j: int
    rotated: LinearLagrangian
    lagrangian: LinearLagrangian

    @property
    def formal_shift(self) -> int:
        return -self.j

    def to_json(self):
        return {"i": self.i, "d": self.d, "j": self.j, "formal_shift": self.formal_shift,
                "lagrangian": self.lagrangian.to_json()}


def _transform(L: LinearLagrangian, f) -> LinearLagrangian:
    v = f(L.direction)
    p = f(L.point)
    w = _continued_winding(L.direction, v, L.winding)
    return replace(L, direction=(int(v[0]), int(v[1])), point=_mod1(p), winding=w)


def apply_symplectomorphism(i: int, L: LinearLagrangian) -> SymplectomorphismImage:
    """S_i = tau^d o t_(0,1/2) o (1 0; -3i+2 1) with j = floor(-i/3), d = -i - 3j.

    The shear acts on (a, b) as (a, (-3i+2) a + b); phases follow by
    continuity.  Each tau lowers the phase by 2/3.
    """
    j = (-i) // 3
    d = -i - 3 * j
    M = _transform(L, lambda v: _shear(i, v))
    M = replace(M, point=_mod1((M.point[0], M.point[1] + Fraction(1, 2))))
    for _ in range(d):
        M = _transform(M, _rotate_tau)
    if M.frac_phase is None and any(M.same_line(seidel_branch(r)) for r in range(3)):
        M = replace(M, frac_phase=Fraction(-1, 2))
    return SymplectomorphismImage(i, d, j, M, M.shifted(2 * j))


def transform_point(i: int, p) -> Vec:
    """Image of a torus point under S_i."""
    j = (-i) // 3
    d = -i - 3 * j
    q = _shear(i, _vec(p))
    q = (q[0], q[1] + Fraction(1, 2))
    for _ in range(d):
        q = _rotate_tau(q)
    return _mod1(q)


# ---------------------------------------------------------------------------
# the potential

def enumerate_decorated_polygons(S: SeidelConfig, output: int, area_cutoff) -> CountSeries:
    """Signed count of b-decorated polygons with output at the point class of branch ``output``.

    Rigid polygons with boundary on the Seidel Lagrangian and all corners at
    immersed points are triangles u_r = a_r (a_r odd) containing the output
    point on their edge of the output family.  Each corner contributes its
    variable; the sign is (-1) to the number of spin markers on the boundary
    times (-1) to the number of edges traversed against the branch orientation.
    Keys are ("e<r>", monomial).
    """
    cut = qexp(area_cutoff)
    fam = output % 3
    res = CountSeries(cut)
    maxs = math.isqrt(int(cut)) + 1
    for a1 in range(-2 * maxs - 1, 2 * maxs + 2, 2):
        for a2 in range(-2 * maxs - 1, 2 * maxs + 2, 2):
            a = [0, 0, 0]
            a[fam] = 1
            a[(fam + 1) % 3], a[(fam + 2) % 3] = a1, a2
            s = sum(a)
            if s == 0 or s * s >= cut:
                continue
            increasing = s > 0  # boundary runs with increasing u_{r+1} on every edge
            hit = False
            marks = 0
            for r in range(3):
                r1, r2 = (r + 1) % 3, (r + 2) % 3
                lo, hi = (-a[r] - a[r2], a[r1]) if increasing else (a[r1], -a[r] - a[r2])
                marks += _n_marks(lo, hi, a[r] + S.marker)
                if r == fam:
                    u = a[r] + S.output_point
                    hit = min(lo, hi) < u < max(lo, hi)
            if not hit:
                continue
            against = 3 if (increasing == (S.branch_orientation < 0)) else 0
            sign = (-1) ** (marks + against)
            mono = [0, 0, 0]
            for r in range(3):
                c = _cls(a[r], a[(r + 1) % 3])
                mono["xyz".index(S.variables[c])] += 1
            res.add(f"e{fam}", _mono_key(tuple(mono)), s * s, sign)
    return res


def potential_from_polygons(S: SeidelConfig, output: int, area_cutoff) -> GradedPolynomial:
    """The decorated-polygon count as a polynomial in x, y, z."""
    counts = enumerate_decorated_polygons(S, output, area_cutoff)
    terms = {}
    for (_, mono), s in counts.series.items():
        if s:
            terms[tuple(mono.count(v) for v in "xyz")] = s
    return GradedPolynomial(terms)


# ---------------------------------------------------------------------------
# strips

@dataclass(frozen=True)
class StripData:
    """m1 on CF((L, b), L') as two 4x4 matrices with generator metadata.

    Generators are ordered (a0, a_x, a_y, a_z) and (b0, b_x, b_y, b_z);
    ``branches`` and ``degrees`` give (g, k) for each, g in {0, -1, -2}.
    ``p0`` maps the a's to the b's and ``p1`` the b's to the a's; both are
    ungraded (zero twists) until a grading recipe is applied.
    """

    target: LinearLagrangian
    family: int
    even: Tuple[str, ...]
    odd: Tuple[str, ...]
    branches_even: Tuple[int, ...]
    branches_odd: Tuple[int, ...]
    degrees_even: Tuple[int, ...]
    degrees_odd: Tuple[int, ...]
    p0: GradedMatrix
    p1: GradedMatrix
    cutoff: Fraction

    def generators(self) -> List[Tuple[str, int, int]]:
        return ([(n, g, k) for n, g, k in zip(self.even, self.branches_even, self.degrees_even)]
                + [(n, g, k) for n, g, k in zip(self.odd, self.branches_odd, self.degrees_odd)])

    def to_json(self):
        return {"family": self.family,
                "generators": [{"name": n, "branch": g, "degree": k} for n, g, k in self.generators()],
                "p0": self.p0.to_json(), "p1": self.p1.to_json(), "cutoff": str(self.cutoff)}


class _StripModel:
    """m1 for L' the perturbed line u0 = 1, in the limit of zero perturbation."""

    def __init__(self, S: SeidelConfig, cut: Fraction):
        self.S = S
        self.cut = cut
        self.mus = (S.marker,) * 3

    def hneg(self, t) -> bool:
        # the perturbation is negative between a0 and the next b0
        x = (t - self.S.tip_a) % 6
        y = (self.S.tip_b - self.S.tip_a) % 6
        return 0 < x < y

    def arc_sign(self, arcs) -> int:
        """arcs: (family or 'P' for L' or 'L' for the branch under L', line value, start, end, counted)."""
        sgn = 1
        for kind, c, s, e, rel in arcs:
            if kind == "P":
                spins = _n_marks(s, e, 1 + self.S.target_marker)
                agree = (e > s) == (self.S.target_orientation > 0)
            else:
                r = 0 if kind == "L" else kind
                spins = _n_marks(s, e, c + self.mus[r])
                agree = (e > s) == (self.S.branch_orientation > 0)
            if rel and not agree:
                sgn = -sgn
            if spins % 2:
                sgn = -sgn
        return sgn

    def entries(self):
        """{(output, input): {corner classes: {area: coefficient}}}.

        Generators: ('b', t), t in {0, 2, 4} on the first neighbouring branch,
        ('a', t), t in {1, 3, 5} on the second, and 'a0', 'b0'.
        """
        S, cut = self.S, self.cut
        res = defaultdict(lambda: defaultdict(lambda: defaultdict(int)))
        R = math.isqrt(int(cut)) + 8
        eps = Fraction(1, 1000)  # stands for an infinitesimal arc

        def add(out, inp, classes, area, s):
            if area < cut:
                res[(out, inp)][tuple(sorted(classes))][area] += s

        # triangles with one side on u0 = 1
        for a1 in range(-4 * R - 1, 4 * R + 2, 2):
            for a2 in range(-4 * R - 1, 4 * R + 2, 2):
                s_ = 1 + a1 + a2
                if s_ == 0 or s_ * s_ >= cut:
                    continue
                t01, t20 = a1 - 1, -2 - a2
                u01, u20 = a1, -1 - a2
                c12, c01, c20 = _cls(a1, a2), _cls(1, a1), _cls(a2, 1)
                f2 = (2, a2, 1, -a1 - a2)
                f1 = (1, a1, a2, -1 - a1)
                area = s_ * s_
                if 0 <= t01 < 6:
                    inp = ("b", t01)
                    arcs = [(*f2, False), (*f1, True), ("P", 1, u01, u20, True)]
                    add(("a", t20 % 6), inp, [c12], area, self.arc_sign(arcs))
                    for ta in _lifts(S.tip_a, t01, t20):
                        u = ta + 1
                        arcs = [("L", 1, u, u20, False), (*f2, True), (*f1, True), ("P", 1, u01, u, True)]
                        add("a0", inp, [c20, c12], area, self.arc_sign(arcs))
                for tb in _lifts(S.tip_b, t01, t20):
                    if not 0 <= tb < 6:
                        continue
                    u = tb + 1
                    arcs = [(*f2, False), (*f1, True), ("L", 1, u01, u, True), ("P", 1, u, u20, True)]
                    add(("a", t20 % 6), "b0", [c12, c01], area, self.arc_sign(arcs))
                    for ta in _lifts(S.tip_a, tb, t20):
                        v = ta + 1
                        arcs = [("L", 1, v, u20, False), (*f2, True), (*f1, True),
                                ("L", 1, u01, u, True), ("P", 1, u, v, True)]
                        add("a0", "b0", [c20, c12, c01], area, self.arc_sign(arcs))

        # trapezoids from a_t to b_t'
        for tg in (1, 3, 5):
            a2 = -2 - tg
            ug = -1 - a2
            for a1 in range(-4 * R - 1, 4 * R + 2, 2):
                ub, tbeta = a1, a1 - 1
                if ub > ug:
                    far = range(1, 4 * R + 2, 2)
                    sp = a1 + a2 + 1
                else:
                    far = range(1, -4 * R - 2, -2)
                    sp = -1 - a1 - a2
                for a0 in far:
                    s_ = a0 + a1 + a2
                    area = s_ * s_ - sp * sp
                    if area >= cut:
                        break
                    if a0 == 1:
                        # a sliver between the two lines: no tips inside, perturbation of the right sign
                        if _lifts(S.tip_a, tg, tbeta) or _lifts(S.tip_b, tg, tbeta):
                            continue
                        if self.hneg(Fraction(tg + tbeta, 2)) != (ub > ug):
                            continue
                    end = (1 if a0 > 1 else 1 - eps) if ub > ug else (1 if a0 < 1 else 1 + eps)
                    arcs = [(1, a1, -1 - a1, -a0 - a1, False),
                            (0, a0, a1, -a0 - a2, True),
                            (2, a2, a0, end, True),
                            ("P", 1, ug, ub, True)]
                    add(("b", tbeta % 6), ("a", tg), [_cls(a0, a1), _cls(a2, a0)], area, self.arc_sign(arcs))
            # slivers a_t -> b0
            for tb in (S.tip_b + 6 * k for k in range(-2, 3)):
                if _lifts(S.tip_a, tg, tb):
                    continue
                if tg < tb:
                    if not self.hneg((tg + tb) / 2):
                        continue
                    end = 1 - eps
                else:
                    if self.hneg((tg + tb) / 2):
                        continue
                    end = 1 + eps
                arcs = [("L", 1, tb + 1, ug, False), (2, a2, 1, end, True), ("P", 1, ug, tb + 1, True)]
                add("b0", ("a", tg), [_cls(a2, 1)], 0, self.arc_sign(arcs))
        # slivers a0 -> b_t and a0 -> b0
        base = math.floor(S.tip_a)
        for tbeta in range(base - 12, base + 13):
            if tbeta % 2 or _lifts(S.tip_b, S.tip_a, tbeta):
                continue
            ub = tbeta + 1
            arcs = [(1, ub, -1 - ub, -1 - ub, False), ("L", 1, ub, S.tip_a + 1, True),
                    ("P", 1, S.tip_a + 1, ub, True)]
            add(("b", tbeta % 6), "a0", [_cls(1, ub)], 0, self.arc_sign(arcs))
        tbn = S.tip_a + (S.tip_b - S.tip_a) % 6
        for tb in (tbn, tbn - 6):
            arcs = [("L", 1, tb + 1, S.tip_a + 1, False), ("P", 1, S.tip_a + 1, tb + 1, True)]
            add("b0", "a0", [], 0, self.arc_sign(arcs))
        return res


def _gen_class(g) -> Optional[int]:
    if g in ("a0", "b0"):
        return None
    kind, t = g
    return (-t // 2) % 3 if kind == "b" else ((-3 - t) // 2) % 3


@lru_cache(maxsize=16)
def _strip_entries(S: SeidelConfig, cut: Fraction):
    model = _StripModel(S, cut)
    raw = model.entries()
    zero = GradedPolynomial.zero()
    P = [[zero] * 4 for _ in range(4)]
    Q = [[zero] * 4 for _ in range(4)]

    def index(g):
        c = _gen_class(g)
        return 0 if c is None else 1 + "xyz".index(S.variables[c])

    for (out, inp), d in sorted(raw.items(), key=lambda kv: str(kv[0])):
        terms = {}
        for classes, ser in d.items():
            mono = [0, 0, 0]
            for c in classes:
                mono["xyz".index(S.variables[c])] += 1
            s = NovikovSeries({e: c for e, c in ser.items() if c}, cut)
            if s:
                terms[tuple(mono)] = terms.get(tuple(mono), NovikovSeries.zero(cut)) + s
        poly = GradedPolynomial({m: s for m, s in terms.items() if s})
        is_a = inp == "a0" or (isinstance(inp, tuple) and inp[0] == "a")
        o, i = index(out), index(inp)
        if is_a:
            P[o][i] = P[o][i] + poly
        else:
            Q[o][i] = Q[o][i] + poly
    return P, Q


def strip_matrix(S: SeidelConfig, target: LinearLagrangian, area_cutoff) -> StripData:
    """m1 on CF((L, b), L') for L' a branch of the Seidel Lagrangian (any phase and shift).

    L' is perturbed along its branch; in the limit the two new intersections
    a0 (degree theta' - theta) and b0 (one more) stay, and the remaining
    generators sit at the immersed points on L'.  For L' = tau^k(L) the count
    is the k = 0 count carried over by the rotation, which preserves corner
    classes; branch labels and degrees are computed for the actual target.
    """
    cut = qexp(area_cutoff)
    k = branch_index(target)
    P, Q = _strip_entries(S, cut)
    zero4 = (0, 0, 0, 0)
    p0 = GradedMatrix(P, zero4, zero4)
    p1 = GradedMatrix(Q, zero4, zero4)
    own, first, second = k, (k + 1) % 3, (k + 2) % 3
    base_deg = _parallel_degree(seidel_branch(own), target)
    deg_a = [base_deg]
    deg_b = [base_deg + 1]
    names_a, names_b = ["a0"], ["b0"]
    for v in "xyz":
        deg_a.append(_corner_degree(S, second, target, v))
        deg_b.append(_corner_degree(S, first, target, v))
        names_a.append(f"a_{v}")
        names_b.append(f"b_{v}")
    g = lambda r: -r if r else 0
    return StripData(target, k, tuple(names_a), tuple(names_b),
                     (g(own),) + (g(second),) * 3, (g(own),) + (g(first),) * 3,
                     tuple(deg_a), tuple(deg_b), p0, p1, cut)


def _parallel_degree(branch: LinearLagrangian, target: LinearLagrangian) -> int:
    # theta' - theta for two parametrizations of the same line
    if branch.direction == target.direction:
        diff = 2 * (target.winding - branch.winding)
    else:
        diff = 2 * (target.winding - branch.winding) + (1 if _arg_less(branch.direction, target.direction) else -1)
    return diff - (target.shift - branch.shift)


def _corner_degree(S: SeidelConfig, r: int, target: LinearLagrangian, var: str) -> int:
    src = seidel_branch(r)
    pts = intersect(src, target)
    return intersection_degree(pts[0], src, target)


def corner_points(S: SeidelConfig, r: int) -> Dict[str, Vec]:
    """The immersed points on branches r and r+1, keyed by their variable."""
    A, B = seidel_branch(r), seidel_branch(r + 1)
    out = {}
    for p in intersect(A, B):
        _, c = _point_class(p.location, r)
        out[S.variables[c]] = p.location
    return out


def _point_class(loc: Vec, r: int) -> Tuple[int, int]:
    # search the lift of loc on which u_r and u_{r+1} are the nearest odd integers
    for da in range(-3, 4):
        for db in range(-3, 4):
            q = (loc[0] + da, loc[1] + db)
            u = trilinear(q)
            if all(x.denominator == 1 and int(x) % 2 for x in (u[r], u[(r + 1) % 3])):
                return r, _cls(int(u[r]), int(u[(r + 1) % 3]))
    raise ValueError("not an immersed point")


def point_variable(S: SeidelConfig, loc: Vec, r: int) -> str:
    """Variable of the immersed point at ``loc`` on branches r, r+1."""
    return S.variables[_point_class(_mod1(loc), r % 3)[1]]


# ---------------------------------------------------------------------------
# morphisms

def morphism_strips(S: SeidelConfig, L1: LinearLagrangian, L2: LinearLagrangian,
                    w: IntersectionPoint, area_cutoff) -> MFMorphism:
    """The area-zero part of m2(., w) : CF((L, b), L1) -> CF((L, b), L2).

    L1 and L2 are adjacent branches (with any phases).  As the perturbations
    shrink, the triangles with corner w collapse to slivers of area zero at w,
    each counted with +1:

    * L2 = tau(L1): a0 -> a'_v and b_v -> b'0, a parity-0 morphism;
    * L2 = tau^{-1}(L1): a'0 -> b_v and a'_v -> b0, a parity-1 morphism
      into the shifted object,

    where v is the variable of w.  The components are returned in the sign
    convention of :mod:`lgcy.mfcat` with zero twists; higher-area entries are
    not produced (see :func:`lgcy.mfcat.complete_morphism`).
    """
    k1, k2 = branch_index(L1), branch_index(L2)
    if (k2 - k1) % 3 == 1:
        r, parity = k1, 0
    elif (k2 - k1) % 3 == 2:
        r, parity = k2, 1
    else:
        raise TransversalityError("morphism strips need two different branches")
    v = point_variable(S, w.location, r)
    idx = 1 + "xyz".index(v)
    z = (0, 0, 0, 0)
    f0 = [[0] * 4 for _ in range(4)]
    f1 = [[0] * 4 for _ in range(4)]
    if parity == 0:
        f0[idx][0] = 1
        f1[0][idx] = 1
    else:
        f0[idx][0] = 1
        f0[0][idx] = 1
    return sign_twist(parity, GradedMatrix(f0, z, z), GradedMatrix(f1, z, z))


def sliver_positions(parity: int):
    """Positions (component, row, column) that :func:`morphism_strips` counts completely.

    These are the entries between a 0-indexed generator (a0, b0) and the
    generators of the other object: for parity 0 the column a0 of f0 and the
    row b'0 of f1, for parity 1 the column a'0 and the row b0 of f0.
    """
    rng = range(4)
    if parity % 2 == 0:
        return frozenset({(0, r, 0) for r in rng} | {(1, 0, c) for c in rng})
    return frozenset({(0, r, 0) for r in rng} | {(0, 0, c) for c in rng})

