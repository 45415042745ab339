"""Graded matrix factorizations of the cubic W and their morphisms.

Conventions
-----------
A map R(s) -> R(t) given by a polynomial f is degree preserving iff
deg f = t - s, so entry (i, j) of a :class:`GradedMatrix` has degree
``target[i] - source[j]``.

An MF is the quasi-periodic sequence K^{2q} = P0(3q), K^{2q+1} = P1(3q) with
k^{2q} = p0, k^{2q+1} = p1.  A morphism of parity j is stored by its two
components f^0 : K^0 -> L^j and f^1 : K^1 -> L^{j+1}; the differential is

    d(f)^i = l^{i+j} f^i + (-1)^j f^{i+1} k^i .

Under this sign rule a closed parity-0 morphism anticommutes with the
differentials, the unit is (id, -id), composition carries the sign
(-1)^{i+j_f} and the cone uses (-1)^{i+1} f^{i+1} in its corner.
``sign_twist`` converts to and from ordinary commuting chain maps.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import math
from math import lcm
from typing import Dict, List, Optional, Sequence, Tuple

from .linalg import LinearSystem
from .qseries import DEFAULT_CUTOFF, NovikovSeries, min_cutoff, qexp
from .ring import GradedPolynomial, build_W, const

D = 3
NOT_FOUND = "not found within bound"
Twists = Tuple[int, ...]

__all__ = [
    "GradedMatrix", "MatrixFactorization", "MFMorphism", "GradingError", "NOT_FOUND",
    "mf_validate", "mf_diagnose", "mf_shift", "mf_twist", "mf_identity", "mf_zero",
    "mf_compose", "hom_diff", "is_closed", "mf_cone", "is_null_homotopic",
    "homotopic", "complete_morphism", "sign_twist", "monomials_of_degree", "potential_W",
]


class GradingError(ValueError):
    pass


def monomials_of_degree(d: int) -> List[Tuple[int, int, int]]:
    """Monomials of total degree d, lex order x > y > z."""
    return [(a, b, d - a - b) for a in range(d, -1, -1) for b in range(d - a, -1, -1)]


def _poly(p) -> GradedPolynomial:
    if isinstance(p, GradedPolynomial):
        return p
    return const(p) if p else GradedPolynomial.zero()


class GradedMatrix:
    """Rectangular matrix of polynomials with source (columns) and target (rows) twists."""

    __slots__ = ("entries", "source", "target")

    def __init__(self, entries: Sequence[Sequence], source: Sequence[int], target: Sequence[int]):
        self.source: Twists = tuple(int(s) for s in source)
        self.target: Twists = tuple(int(t) for t in target)
        rows = tuple(tuple(_poly(e) for e in row) for row in entries)
        if len(rows) != len(self.target) or any(len(r) != len(self.source) for r in rows):
            raise ValueError(f"matrix shape does not match twists {self.target} <- {self.source}")
        self.entries = rows

    @classmethod
    def zero(cls, source, target) -> "GradedMatrix":
        z = GradedPolynomial.zero()
        return cls([[z] * len(source) for _ in target], source, target)

    @classmethod
    def identity(cls, twists, scalar=1) -> "GradedMatrix":
        n = len(twists)
        c = _poly(scalar)
        return cls([[c if i == j else 0 for j in range(n)] for i in range(n)], twists, twists)

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.target), len(self.source)

    def __getitem__(self, ij) -> GradedPolynomial:
        i, j = ij
        return self.entries[i][j]

    def required_degree(self, i: int, j: int) -> int:
        return self.target[i] - self.source[j]

    def degree_violations(self) -> List[Tuple[int, int]]:
        bad = []
        for i, row in enumerate(self.entries):
            for j, e in enumerate(row):
                if e and not e.is_homogeneous(self.required_degree(i, j)):
                    bad.append((i, j))
        return bad

    def is_graded(self) -> bool:
        return not self.degree_violations()

    @property
    def cutoff(self) -> Optional[Fraction]:
        return min_cutoff(*(e.cutoff for row in self.entries for e in row))

    def valuation(self) -> Optional[Fraction]:
        vals = [e.valuation() for row in self.entries for e in row if e]
        return min(vals) if vals else None

    def is_zero(self) -> bool:
        return all(not e for row in self.entries for e in row)

    # algebra
    def compose(self, other: "GradedMatrix") -> "GradedMatrix":
        """self o other; twists must agree up to one global shift."""
        if len(self.source) != len(other.target):
            raise ValueError("incompatible shapes for composition")
        shifts = {s - t for s, t in zip(self.source, other.target)}
        if len(shifts) > 1:
            raise GradingError(f"twists {other.target} and {self.source} differ non-uniformly")
        k = shifts.pop() if shifts else 0
        n, m = len(self.target), len(other.source)
        out = []
        for i in range(n):
            row = []
            for j in range(m):
                acc = GradedPolynomial.zero()
                for t in range(len(self.source)):
                    a, b = self.entries[i][t], other.entries[t][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return GradedMatrix(out, other.source, tuple(t - k for t in self.target))

    __matmul__ = compose

    def _check_same(self, other: "GradedMatrix"):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")

    def __add__(self, other: "GradedMatrix") -> "GradedMatrix":
        self._check_same(other)
        return GradedMatrix([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)],
                            self.source, self.target)

    def __neg__(self) -> "GradedMatrix":
        return GradedMatrix([[-a for a in r] for r in self.entries], self.source, self.target)

    def __sub__(self, other: "GradedMatrix") -> "GradedMatrix":
        return self + (-other)

    def scale(self, c) -> "GradedMatrix":
        return GradedMatrix([[a * c for a in r] for r in self.entries], self.source, self.target)

    def twist(self, n: int) -> "GradedMatrix":
        return GradedMatrix(self.entries, [s + n for s in self.source], [t + n for t in self.target])

    def with_twists(self, source, target) -> "GradedMatrix":
        return GradedMatrix(self.entries, source, target)

    def truncate(self, cutoff) -> "GradedMatrix":
        return GradedMatrix([[a.truncate(cutoff) for a in r] for r in self.entries], self.source, self.target)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "GradedMatrix":
        return GradedMatrix([[self.entries[i][j] for j in cols] for i in rows],
                            [self.source[j] for j in cols], [self.target[i] for i in rows])

    # comparison
    def agrees(self, other: "GradedMatrix", cutoff=None, twists: bool = True) -> bool:
        if self.shape != other.shape:
            return False
        if twists and (self.source != other.source or self.target != other.target):
            return False
        return all(a.agrees(b, cutoff) for r1, r2 in zip(self.entries, other.entries) for a, b in zip(r1, r2))

    def __eq__(self, other):
        if not isinstance(other, GradedMatrix):
            return NotImplemented
        return (self.source, self.target, self.entries) == (other.source, other.target, other.entries)

    def __hash__(self):
        return hash((self.source, self.target, self.entries))

    def constant_entries(self) -> Dict[Tuple[int, int], Fraction]:
        """T^0 scalar parts of the entries whose required degree is 0."""
        out = {}
        for i in range(len(self.target)):
            for j in range(len(self.source)):
                if self.required_degree(i, j) == 0:
                    out[(i, j)] = self.entries[i][j].constant_part().get((0, 0, 0), Fraction(0))
        return out

    def constant_pattern(self) -> List[List[object]]:
        """Readable pattern: scalars at degree-0 positions, 0 where the degree is negative, ``"*"`` elsewhere."""
        ce = self.constant_entries()
        return [[_frac_str(ce[(i, j)]) if (i, j) in ce else ("*" if self.required_degree(i, j) > 0 else 0)
                 for j in range(len(self.source))]
                for i in range(len(self.target))]

    def render(self) -> List[List[str]]:
        return [[e.render() for e in row] for row in self.entries]

    def to_json(self):
        return {"source": list(self.source), "target": list(self.target), "entries": self.render()}

    def __repr__(self):
        return f"GradedMatrix({self.target} <- {self.source}, {self.render()})"


def _frac_str(c: Fraction):
    return int(c) if c.denominator == 1 else str(c)


def block(rows: Sequence[Sequence[GradedMatrix]]) -> GradedMatrix:
    """Assemble a block matrix; twists are read from the diagonal-compatible blocks."""
    target = [t for r in rows for t in r[0].target]
    source = [s for blk in rows[0] for s in blk.source]
    entries = []
    for r in rows:
        for i in range(len(r[0].target)):
            entries.append([e for blk in r for e in blk.entries[i]])
    return GradedMatrix(entries, source, target)


@lru_cache(maxsize=16)
def potential_W(cutoff) -> GradedPolynomial:
    return build_W(cutoff).W


@dataclass(frozen=True)
class MatrixFactorization:
    P0: Twists
    P1: Twists
    p0: GradedMatrix
    p1: GradedMatrix
    cutoff: Optional[Fraction] = DEFAULT_CUTOFF
    d: int = D

    def __post_init__(self):
        object.__setattr__(self, "P0", tuple(self.P0))
        object.__setattr__(self, "P1", tuple(self.P1))
        if self.cutoff is not None:
            object.__setattr__(self, "cutoff", qexp(self.cutoff))

    def term(self, n: int) -> Twists:
        q, r = divmod(n, 2)
        base = self.P0 if r == 0 else self.P1
        return tuple(t + self.d * q for t in base)

    def diff(self, n: int) -> GradedMatrix:
        """k^n : K^n -> K^{n+1}."""
        q, r = divmod(n, 2)
        m = self.p0 if r == 0 else self.p1
        return m.twist(self.d * q)

    @property
    def rank(self) -> Tuple[int, int]:
        return len(self.P0), len(self.P1)

    def agrees(self, other: "MatrixFactorization", cutoff=None) -> bool:
        return (self.P0 == other.P0 and self.P1 == other.P1 and self.d == other.d
                and self.p0.agrees(other.p0, cutoff) and self.p1.agrees(other.p1, cutoff))

    def to_json(self):
        return {
            "d": self.d,
            "cutoff": None if self.cutoff is None else str(self.cutoff),
            "P0": list(self.P0),
            "P1": list(self.P1),
            "p0": self.p0.to_json(),
            "p1": self.p1.to_json(),
        }


def mf_diagnose(M: MatrixFactorization, W: Optional[GradedPolynomial] = None) -> List[str]:
    """Reasons why M fails to be a graded MF of W (empty list if valid)."""
    problems = []
    if W is None:
        if M.cutoff is None:
            raise ValueError("an exact MF needs an explicit potential")
        W = potential_W(M.cutoff)
    elif W.cutoff is not None and M.cutoff is not None and W.cutoff != M.cutoff:
        raise ValueError(f"cutoff mismatch: MF at {M.cutoff}, W at {W.cutoff}")
    cut = M.cutoff
    n0, n1 = M.rank
    if M.p0.shape != (n1, n0) or M.p1.shape != (n0, n1):
        return ["shape mismatch"]
    if M.p0.source != M.P0 or M.p0.target != M.P1:
        problems.append("p0 twists do not match P0 -> P1")
    if M.p1.source != M.P1 or M.p1.target != tuple(t + M.d for t in M.P0):
        problems.append("p1 twists do not match P1 -> P0(d)")
    for name, m in (("p0", M.p0), ("p1", M.p1)):
        for ij in m.degree_violations():
            problems.append(f"{name}{ij} has the wrong degree")
        v = m.valuation()
        if v is not None and v < 0:
            problems.append(f"{name} has an entry of negative valuation")
    if problems:
        return problems
    for name, comp, tw in (("p1 p0", M.p1 @ M.p0, M.P0), ("p0 p1", M.p0.twist(M.d) @ M.p1, M.P1)):
        target = GradedMatrix.identity(tw, W)
        for i in range(len(tw)):
            for j in range(len(tw)):
                if not comp[i, j].agrees(target[i, j], cut):
                    problems.append(f"{name} differs from W id at {(i, j)}")
    return problems


def mf_validate(M: MatrixFactorization, W: Optional[GradedPolynomial] = None) -> bool:
    return not mf_diagnose(M, W)


def mf_twist(M: MatrixFactorization, n: int) -> MatrixFactorization:
    return MatrixFactorization([t + n for t in M.P0], [t + n for t in M.P1],
                               M.p0.twist(n), M.p1.twist(n), M.cutoff, M.d)


def mf_shift(M: MatrixFactorization) -> MatrixFactorization:
    """K[1]: K[1]^i = K^{i+1}, k[1]^i = -k^{i+1}."""
    return MatrixFactorization(M.P1, [t + M.d for t in M.P0], -M.p1, -M.p0.twist(M.d), M.cutoff, M.d)


@dataclass(frozen=True)
class MFMorphism:
    """Parity-j morphism given by f^0 : K^0 -> L^j and f^1 : K^1 -> L^{j+1}."""

    parity: int
    f0: GradedMatrix
    f1: GradedMatrix

    def component(self, i: int, d: int = D) -> GradedMatrix:
        q, r = divmod(i, 2)
        return (self.f0 if r == 0 else self.f1).twist(d * q)

    def __add__(self, other: "MFMorphism") -> "MFMorphism":
        if self.parity != other.parity:
            raise ValueError("parity mismatch")
        return MFMorphism(self.parity, self.f0 + other.f0, self.f1 + other.f1)

    def __neg__(self) -> "MFMorphism":
        return MFMorphism(self.parity, -self.f0, -self.f1)

    def __sub__(self, other: "MFMorphism") -> "MFMorphism":
        return self + (-other)

    def scale(self, c) -> "MFMorphism":
        return MFMorphism(self.parity, self.f0.scale(c), self.f1.scale(c))

    def is_zero(self, cutoff=None) -> bool:
        if cutoff is None:
            return self.f0.is_zero() and self.f1.is_zero()
        return all(not e.truncate(cutoff) for m in (self.f0, self.f1) for row in m.entries for e in row)

    def agrees(self, other: "MFMorphism", cutoff=None) -> bool:
        return (self.parity == other.parity and self.f0.agrees(other.f0, cutoff)
                and self.f1.agrees(other.f1, cutoff))

    def constant_entries(self):
        return self.f0.constant_entries(), self.f1.constant_entries()

    def to_json(self):
        return {"parity": self.parity, "f0": self.f0.to_json(), "f1": self.f1.to_json()}


def _check_morphism(f: MFMorphism, K: MatrixFactorization, L: MatrixFactorization):
    for i, comp in ((0, f.f0), (1, f.f1)):
        if comp.source != K.term(i) or comp.target != L.term(i + f.parity):
            raise GradingError(f"component {i} is not a map K^{i} -> L^{i + f.parity}")
        if not comp.is_graded():
            raise GradingError(f"component {i} has entries of the wrong degree")


def mf_zero(K: MatrixFactorization, L: MatrixFactorization, parity: int = 0) -> MFMorphism:
    return MFMorphism(parity, GradedMatrix.zero(K.term(0), L.term(parity)),
                      GradedMatrix.zero(K.term(1), L.term(1 + parity)))


def mf_identity(K: MatrixFactorization) -> MFMorphism:
    """The unit of K, which is (id, -id) under the sign rule of this module."""
    return MFMorphism(0, GradedMatrix.identity(K.P0), -GradedMatrix.identity(K.P1))


def sign_twist(parity: int, f0: GradedMatrix, f1: GradedMatrix) -> MFMorphism:
    """Morphism with components (-1)^i g^i from an ordinary chain map g of the same parity.

    Ordinary chain maps commute with both differentials (for odd parity: with
    the unshifted target differential); they are closed for the usual
    differential l g - (-1)^j g k.
    """
    if parity % 2:
        return MFMorphism(parity, f0, f1)
    return MFMorphism(parity, f0, -f1)


def hom_diff(f: MFMorphism, K: MatrixFactorization, L: MatrixFactorization) -> MFMorphism:
    _check_morphism(f, K, L)
    j = f.parity
    s = -1 if j % 2 else 1
    comps = []
    for i in (0, 1):
        a = L.diff(i + j) @ f.component(i)
        b = f.component(i + 1) @ K.diff(i)
        comps.append(a + b.scale(s))
    return MFMorphism(j + 1, comps[0], comps[1])


def is_closed(f: MFMorphism, K: MatrixFactorization, L: MatrixFactorization) -> bool:
    cut = min_cutoff(K.cutoff, L.cutoff, f.f0.cutoff, f.f1.cutoff)
    return hom_diff(f, K, L).is_zero(cut)


def mf_compose(g: MFMorphism, f: MFMorphism) -> MFMorphism:
    """g o f with (g o f)^i = (-1)^{i + j_f} g^{i + j_f} f^i."""
    jf = f.parity
    comps = []
    for i in (0, 1):
        c = g.component(i + jf) @ f.component(i)
        comps.append(c if (i + jf) % 2 == 0 else -c)
    return MFMorphism(g.parity + jf, comps[0], comps[1])


def mf_cone(f: MFMorphism, K: MatrixFactorization, L: MatrixFactorization) -> MatrixFactorization:
    """Cone on L^i + K^{i+1} with c^i = [[l^i, (-1)^{i+1} f^{i+1}], [0, -k^{i+1}]]."""
    if f.parity != 0:
        raise ValueError("the cone needs a parity-0 morphism")
    if not is_closed(f, K, L):
        raise ValueError("the morphism is not closed")
    d = K.d
    P0 = L.P0 + K.P1
    P1 = L.P1 + tuple(t + d for t in K.P0)
    c0 = block([[L.p0, -f.f1],
                [GradedMatrix.zero(L.P0, tuple(t + d for t in K.P0)), -K.p1]])
    c0 = GradedMatrix(c0.entries, P0, P1)
    c1 = block([[L.p1, f.f0.twist(d)],
                [GradedMatrix.zero(L.P1, tuple(t + d for t in K.P1)), -K.p0.twist(d)]])
    c1 = GradedMatrix(c1.entries, P1, tuple(t + d for t in P0))
    cut = min_cutoff(K.cutoff, L.cutoff)
    return MatrixFactorization(P0, P1, c0, c1, cut, d)


# ---------------------------------------------------------------------------
# null-homotopy search

def _exponent_step(mats: Sequence[GradedMatrix]) -> Fraction:
    den = 1
    for m in mats:
        for row in m.entries:
            for e in row:
                for _, s in e.items():
                    for x in s.exponents():
                        den = lcm(den, x.denominator)
    return Fraction(1, den)


def _data_cutoff(mats: Sequence[GradedMatrix]) -> Fraction:
    cut = min_cutoff(*(m.cutoff for m in mats))
    if cut is not None:
        return cut
    top = Fraction(0)
    for m in mats:
        for row in m.entries:
            for e in row:
                for _, s in e.items():
                    if s:
                        top = max(top, max(s.exponents()))
    return top + 1


def solve_homotopy(targets: Sequence[GradedMatrix], unknowns: Sequence[Tuple],
                   terms, degree_bound: int, cutoff=None, min_degree: int = 0,
                   valuation_floor=0):
    """Solve a linear system for polynomial matrices h_s.

    ``terms`` lists, for each equation index i, products ``(s, left, right, sign)``
    meaning ``sign * left @ h_s @ right`` (left/right may be None for identity).
    The equations are ``sum of terms = targets[i]`` up to the cutoff.  An
    unknown is ``(source, target)``, ``(source, target, lo, hi)`` or
    ``(source, target, lo, hi, fixed)``; entries of degree outside ``[lo, hi]``
    (default ``[min_degree, degree_bound]``) and entries (a, b) in ``fixed``
    are forced to 0.  Coefficients of the unknowns have valuation at least
    ``valuation_floor``; the equations are imposed on every exponent in
    ``[valuation_floor, cutoff)``, so the certificate is exact to the cutoff.
    Returns the list of solved matrices or None if the system is inconsistent.
    """
    mats = list(targets) + [m for eq in terms for (_, l, r, _) in eq for m in (l, r) if m is not None]
    cut = qexp(cutoff) if cutoff is not None else _data_cutoff(mats)
    step = _exponent_step(mats)
    grid = [step * k for k in range(int(cut / step) + (0 if (cut / step).denominator == 1 else 1))]
    grid = [e for e in grid if e < cut]
    ngrid = len(grid)
    kmin = min(0, math.floor(Fraction(valuation_floor) / step))
    sysm = LinearSystem()

    def _idx(e):
        k = e / step
        return k.numerator if k.denominator == 1 else None

    def _num(c):
        c = Fraction(c)
        return c.numerator if c.denominator == 1 else c

    # register unknown columns in a fixed order
    ent_deg = {}
    for s, spec in enumerate(unknowns):
        src, tgt = spec[0], spec[1]
        lo, hi = (spec[2], spec[3]) if len(spec) > 2 else (min_degree, degree_bound)
        fixed = spec[4] if len(spec) > 4 else ()
        for a in range(len(tgt)):
            for b in range(len(src)):
                dd = tgt[a] - src[b]
                if lo <= dd <= hi and (a, b) not in fixed:
                    ent_deg[(s, a, b)] = dd
                    for mono in monomials_of_degree(dd):
                        for k in range(kmin, ngrid):
                            sysm.column((s, a, b, mono, k))

    def poly_terms(p: GradedPolynomial):
        return [(m, _idx(e), _num(c)) for m, ser in p.items() for e, c in ser.items() if e < cut]

    for i, eq_terms in enumerate(terms):
        for (s, left, right, sign) in eq_terms:
            src, tgt = unknowns[s][0], unknowns[s][1]
            nrow = len(tgt) if left is None else len(left.target)
            ncol = len(src) if right is None else len(right.source)
            for (s_, a, b), dd in ent_deg.items():
                if s_ != s:
                    continue
                lefts = [(a, [((0, 0, 0), 0, sign)])] if left is None else \
                    [(r, [(m, e, c * sign) for m, e, c in poly_terms(left[r, a])]) for r in range(nrow) if left[r, a]]
                rights = [(b, [((0, 0, 0), 0, 1)])] if right is None else \
                    [(c_, poly_terms(right[b, c_])) for c_ in range(ncol) if right[b, c_]]
                for r, lt in lefts:
                    for c_, rt in rights:
                        combo = {}
                        for m1, e1, c1 in lt:
                            for m2, e2, c2 in rt:
                                key = ((m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2]), e1 + e2)
                                combo[key] = combo.get(key, 0) + c1 * c2
                        for (mm, ee), cc in combo.items():
                            if not cc:
                                continue
                            for mono in monomials_of_degree(dd):
                                tm = (mono[0] + mm[0], mono[1] + mm[1], mono[2] + mm[2])
                                for k in range(kmin, ngrid - ee):
                                    sysm.add_term((i, r, c_, tm, k + ee), (s, a, b, mono, k), cc)
    for i, t in enumerate(targets):
        for r in range(len(t.target)):
            for c_ in range(len(t.source)):
                for m, ser in t[r, c_].items():
                    for e, c in ser.items():
                        if e < cut:
                            sysm.add_rhs((i, r, c_, m, _idx(e)), _num(c))
    sol = sysm.solve()
    if sol is None:
        return None
    out = []
    for s, spec in enumerate(unknowns):
        src, tgt = spec[0], spec[1]
        acc = [[{} for _ in src] for _ in tgt]
        for key, v in sol.items():
            if key[0] == s:
                _, a, b, mono, k = key
                acc[a][b].setdefault(mono, {})[step * k] = Fraction(v)
        ents = [[GradedPolynomial({m: NovikovSeries(t, cut) for m, t in acc[a][b].items()})
                 for b in range(len(src))] for a in range(len(tgt))]
        out.append(GradedMatrix(ents, src, tgt))
    return out, cut


def is_null_homotopic(f: MFMorphism, K: MatrixFactorization, L: MatrixFactorization,
                      degree_bound: int = 6, cutoff=None, valuation_floor=0):
    """Find h of parity j-1 with d(h) = f up to the cutoff.

    Returns the homotopy (an :class:`MFMorphism`) or :data:`NOT_FOUND`.  h has
    coefficients of valuation at least ``valuation_floor`` and entry degrees
    at most ``degree_bound``.
    """
    if not is_closed(f, K, L):
        raise ValueError("is_null_homotopic needs a closed morphism")
    j = f.parity
    sgn = -1 if (j - 1) % 2 else 1
    unknowns = [(K.term(0), L.term(j - 1)), (K.term(1), L.term(j))]
    # f^0 = l^{j-1} h^0 + s h^1 k^0 ;  f^1 = l^{j} h^1 + s h^2 k^1
    terms = [
        [(0, L.diff(j - 1), None, 1), (1, None, K.diff(0), sgn)],
        [(1, L.diff(j), None, 1), (0, None, K.diff(1), sgn)],
    ]
    cut = cutoff if cutoff is not None else min_cutoff(K.cutoff, L.cutoff, f.f0.cutoff, f.f1.cutoff)
    res = solve_homotopy([f.f0, f.f1], unknowns, terms, degree_bound, cut,
                         valuation_floor=valuation_floor)
    if res is None:
        return NOT_FOUND
    (h0, h1), cut = res
    h = MFMorphism(j - 1, h0, h1)
    if not hom_diff(h, K, L).agrees(f, cut):
        raise AssertionError("homotopy solver produced an invalid certificate")
    return h


def homotopic(f: MFMorphism, g: MFMorphism, K: MatrixFactorization, L: MatrixFactorization,
              degree_bound: int = 6, cutoff=None, valuation_floor=0) -> bool:
    return not isinstance(is_null_homotopic(f - g, K, L, degree_bound, cutoff, valuation_floor), str)


def complete_morphism(constants: MFMorphism, K: MatrixFactorization, L: MatrixFactorization,
                      degree_bound: int = 6, cutoff=None, valuation_floor=0, pinned=None):
    """A closed morphism extending ``constants``.

    ``pinned`` lists positions (component, row, column); those of degree 0
    are taken from ``constants`` as they are, and every other entry of degree
    between 0 and ``degree_bound`` is solved for (free choices are set to 0).
    Without ``pinned`` all degree-0 entries are kept.  Returns the morphism or
    :data:`NOT_FOUND`.
    """
    j = constants.parity
    sgn = -1 if j % 2 else 1
    comps = (constants.f0, constants.f1)
    degree0 = {(c, a, b) for c, m in enumerate(comps) for a in range(m.shape[0])
               for b in range(m.shape[1]) if m.required_degree(a, b) == 0}
    pinned = degree0 if pinned is None else degree0 & set(pinned)
    fixed = [frozenset((a, b) for c_, a, b in pinned if c_ == c) for c in (0, 1)]
    unknowns = [(K.term(0), L.term(j), 0, degree_bound, fixed[0]),
                (K.term(1), L.term(j + 1), 0, degree_bound, fixed[1])]
    terms = [
        [(0, L.diff(j), None, 1), (1, None, K.diff(0), sgn)],
        [(1, L.diff(j + 1), None, 1), (0, None, K.diff(1), sgn)],
    ]
    cut = cutoff if cutoff is not None else min_cutoff(K.cutoff, L.cutoff)
    base = MFMorphism(j, _keep(constants.f0, fixed[0]), _keep(constants.f1, fixed[1]))
    dc = hom_diff(base, K, L)
    res = solve_homotopy([-dc.f0, -dc.f1], unknowns, terms, degree_bound, cut,
                         valuation_floor=valuation_floor)
    if res is None:
        return NOT_FOUND
    (h0, h1), cut = res
    f = MFMorphism(j, (base.f0 + h0).truncate(cut), (base.f1 + h1).truncate(cut))
    if not is_closed(f, K, L):
        raise AssertionError("completed morphism is not closed")
    return f


def _keep(m: GradedMatrix, positions) -> GradedMatrix:
    z = GradedPolynomial.zero()
    return GradedMatrix([[e if (a, b) in positions else z for b, e in enumerate(row)]
                         for a, row in enumerate(m.entries)], m.source, m.target)
