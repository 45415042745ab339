"""Graded polynomials over truncated Novikov series and the cubic potential W.

R = Λ[x, y, z] with every variable of degree 1.  Coefficients are
:class:`~lgcy.qseries.NovikovSeries`; exponents of T are in q_α units, so the
smallest xyz triangle has area 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Tuple, Union

from .qseries import DEFAULT_CUTOFF, NovikovSeries, min_cutoff, qexp

Monomial = Tuple[int, int, int]
VARS = ("x", "y", "z")
INHOMOGENEOUS = "inhomogeneous"

__all__ = [
    "Monomial", "GradedPolynomial", "NamedSeriesBundle", "SignPatternError",
    "X", "Y", "Z", "var", "const",
    "poly_add", "poly_mul", "poly_scale", "poly_degree",
    "series_phi", "series_psi", "series_alpha", "series_wx", "series_wy", "series_wz",
    "cross_series_a", "cross_series_b", "build_W", "divide_by_alpha",
]


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def _mono_str(m: Monomial) -> str:
    parts = []
    for v, k in zip(VARS, m):
        if k == 1:
            parts.append(v)
        elif k > 1:
            parts.append(f"{v}^{k}")
    return "*".join(parts) if parts else "1"


def _as_series(c) -> NovikovSeries:
    if isinstance(c, NovikovSeries):
        return c
    return NovikovSeries({0: c}, None)


class GradedPolynomial:
    """Sparse map from monomials to nonzero Novikov series."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, object] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: Dict[Monomial, NovikovSeries] = {}
        for m, c in items:
            m = tuple(int(k) for k in m)
            if len(m) != 3 or min(m) < 0:
                raise ValueError(f"bad monomial {m}")
            s = _as_series(c)
            acc[m] = acc[m] + s if m in acc else s
        self._terms = {m: acc[m] for m in sorted(acc, reverse=True) if not acc[m].is_zero()}

    @classmethod
    def _raw(cls, terms: Dict[Monomial, NovikovSeries]) -> "GradedPolynomial":
        obj = cls.__new__(cls)
        obj._terms = {m: terms[m] for m in sorted(terms, reverse=True) if not terms[m].is_zero()}
        return obj

    @classmethod
    def zero(cls) -> "GradedPolynomial":
        return cls._raw({})

    @property
    def terms(self) -> Dict[Monomial, NovikovSeries]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def monomials(self):
        return list(self._terms)

    def coefficient(self, mono: Monomial) -> NovikovSeries:
        return self._terms.get(tuple(mono), NovikovSeries.zero())

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    @property
    def cutoff(self) -> Optional[Fraction]:
        return min_cutoff(*(s.cutoff for s in self._terms.values()))

    def degree(self) -> Union[int, str, None]:
        """Common total degree, ``"inhomogeneous"``, or None for zero."""
        degs = {sum(m) for m in self._terms}
        if not degs:
            return None
        return degs.pop() if len(degs) == 1 else INHOMOGENEOUS

    def is_homogeneous(self, n: Optional[int] = None) -> bool:
        d = self.degree()
        if d is None:
            return True
        if d == INHOMOGENEOUS:
            return False
        return n is None or d == n

    def valuation(self) -> Optional[Fraction]:
        vals = [s.valuation() for s in self._terms.values()]
        return min(vals) if vals else None

    def truncate(self, cutoff) -> "GradedPolynomial":
        return GradedPolynomial._raw({m: s.truncate(cutoff) for m, s in self._terms.items()})

    def constant_part(self) -> Dict[Monomial, Fraction]:
        """Coefficients of T^0, the part that survives at area zero."""
        out = {}
        for m, s in self._terms.items():
            c = s.terms.get(Fraction(0), Fraction(0))
            if c:
                out[m] = c
        return out

    # arithmetic
    def __neg__(self):
        return GradedPolynomial._raw({m: -s for m, s in self._terms.items()})

    def __add__(self, other):
        other = _coerce_poly(other)
        acc = dict(self._terms)
        for m, s in other._terms.items():
            acc[m] = acc[m] + s if m in acc else s
        return GradedPolynomial._raw(acc)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_coerce_poly(other))

    def __rsub__(self, other):
        return _coerce_poly(other) - self

    def __mul__(self, other):
        if isinstance(other, GradedPolynomial):
            acc: Dict[Monomial, NovikovSeries] = {}
            for m1, s1 in self._terms.items():
                for m2, s2 in other._terms.items():
                    m = _mono_mul(m1, m2)
                    p = s1 * s2
                    acc[m] = acc[m] + p if m in acc else p
            return GradedPolynomial._raw(acc)
        s = _as_series(other)
        return GradedPolynomial._raw({m: c * s for m, c in self._terms.items()})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, GradedPolynomial):
            try:
                other = _coerce_poly(other)
            except TypeError:
                return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(tuple(self._terms.items()))

    def agrees(self, other: "GradedPolynomial", cutoff=None) -> bool:
        """Coefficientwise equality below the common cutoff."""
        cut = None if cutoff is None else qexp(cutoff)
        keys = set(self._terms) | set(other._terms)
        zero = NovikovSeries.zero()
        for m in keys:
            if not self._terms.get(m, zero).agrees(other._terms.get(m, zero), cut):
                return False
        return True

    # output
    def render(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m, s in self._terms.items():
            mono = _mono_str(m)
            if len(s) == 1:
                e, c = s.leading()
                coef = NovikovSeries._raw({e: abs(c)}, None).render()
                sign = "-" if c < 0 else "+"
                body = mono if coef == "1" else (coef if mono == "1" else f"{coef}*{mono}")
            else:
                sign = "+"
                body = f"({s.render()})" + ("" if mono == "1" else f"*{mono}")
            parts.append((sign, body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def to_json(self):
        return [[list(m), s.to_json()] for m, s in self._terms.items()]

    @classmethod
    def from_json(cls, data, cutoff=DEFAULT_CUTOFF):
        return cls({tuple(m): NovikovSeries.from_json(s, cutoff) for m, s in data})

    def __repr__(self):
        return f"GradedPolynomial({self.render()})"


def _coerce_poly(p) -> GradedPolynomial:
    if isinstance(p, GradedPolynomial):
        return p
    if isinstance(p, (int, Fraction, NovikovSeries)):
        return const(p)
    raise TypeError(f"cannot coerce {type(p).__name__} to GradedPolynomial")


def const(c) -> GradedPolynomial:
    return GradedPolynomial({(0, 0, 0): c})


def var(name: str) -> GradedPolynomial:
    i = VARS.index(name)
    m = [0, 0, 0]
    m[i] = 1
    return GradedPolynomial({tuple(m): 1})


X, Y, Z = var("x"), var("y"), var("z")


def poly_add(a: GradedPolynomial, b: GradedPolynomial) -> GradedPolynomial:
    return a + b


def poly_mul(a: GradedPolynomial, b: GradedPolynomial) -> GradedPolynomial:
    return a * b


def poly_scale(a: GradedPolynomial, c) -> GradedPolynomial:
    return a * c


def poly_degree(a: GradedPolynomial):
    return a.degree()


# ---------------------------------------------------------------------------
# named series (exponents in q_α units)

def series_phi(cutoff=DEFAULT_CUTOFF) -> NovikovSeries:
    """sum_{k>=0} (-1)^{k+1} (2k+1) q^{(6k+3)^2}"""
    cut = qexp(cutoff)
    if cut <= 0:
        raise ValueError("cutoff must be positive")
    terms = {}
    k = 0
    while (6 * k + 3) ** 2 < cut:
        terms[(6 * k + 3) ** 2] = (-1) ** (k + 1) * (2 * k + 1)
        k += 1
    return NovikovSeries(terms, cut)


def _pair_sum(cut: Fraction, plus, minus) -> NovikovSeries:
    # sum_{k>=1} (-1)^{k+1} (plus(k) q^{(6k+1)^2} - minus(k) q^{(6k-1)^2})
    terms = {}
    k = 1
    while (6 * k - 1) ** 2 < cut:
        s = (-1) ** (k + 1)
        terms[(6 * k - 1) ** 2] = terms.get((6 * k - 1) ** 2, 0) - s * minus(k)
        if (6 * k + 1) ** 2 < cut:
            terms[(6 * k + 1) ** 2] = terms.get((6 * k + 1) ** 2, 0) + s * plus(k)
        k += 1
    return NovikovSeries(terms, cut)


def cross_series_a(cutoff=DEFAULT_CUTOFF) -> NovikovSeries:
    """The yz-coefficient of w_x: sum_{k>=1} (-1)^{k+1}(2k q^{(6k+1)^2} - 2k q^{(6k-1)^2})."""
    cut = qexp(cutoff)
    return _pair_sum(cut, lambda k: 2 * k, lambda k: 2 * k)


def cross_series_b(cutoff=DEFAULT_CUTOFF) -> NovikovSeries:
    """The xy-coefficient of w_z: -q + sum_{k>=1} (-1)^{k+1}((2k+1)q^{(6k+1)^2} - (2k-1)q^{(6k-1)^2})."""
    cut = qexp(cutoff)
    return _pair_sum(cut, lambda k: 2 * k + 1, lambda k: 2 * k - 1) + NovikovSeries({1: -1}, cut)


def series_psi(cutoff=DEFAULT_CUTOFF) -> NovikovSeries:
    """-q + sum_{k>=1} (-1)^{k+1}((6k+1) q^{(6k+1)^2} - (6k-1) q^{(6k-1)^2})"""
    cut = qexp(cutoff)
    if cut <= 0:
        raise ValueError("cutoff must be positive")
    return _pair_sum(cut, lambda k: 6 * k + 1, lambda k: 6 * k - 1) + NovikovSeries({1: -1}, cut)


def series_alpha(cutoff=DEFAULT_CUTOFF) -> NovikovSeries:
    """sum_{k>=0} ((-1)^k T^{(1+6k)^2} + (-1)^{k+1} T^{(5+6k)^2})"""
    cut = qexp(cutoff)
    if cut <= 0:
        raise ValueError("cutoff must be positive")
    terms = {}
    k = 0
    while (1 + 6 * k) ** 2 < cut:
        terms[(1 + 6 * k) ** 2] = (-1) ** k
        if (5 + 6 * k) ** 2 < cut:
            terms[(5 + 6 * k) ** 2] = (-1) ** (k + 1)
        k += 1
    return NovikovSeries(terms, cut)


def series_wx(cutoff=DEFAULT_CUTOFF) -> GradedPolynomial:
    return GradedPolynomial({(2, 0, 0): series_phi(cutoff), (0, 1, 1): cross_series_a(cutoff)})


def series_wy(cutoff=DEFAULT_CUTOFF) -> GradedPolynomial:
    # zx carries +a, not the printed -a: only this sign assembles the xyz
    # coefficient of W into a multiple of psi (and it is what the strip count gives)
    return GradedPolynomial({(0, 2, 0): -series_phi(cutoff), (1, 0, 1): cross_series_a(cutoff)})


def series_wz(cutoff=DEFAULT_CUTOFF) -> GradedPolynomial:
    return GradedPolynomial({(0, 0, 2): series_phi(cutoff), (1, 1, 0): cross_series_b(cutoff)})


def divide_by_alpha(p: GradedPolynomial, cutoff=DEFAULT_CUTOFF, sign: int = 1) -> GradedPolynomial:
    """sign * p / alpha, evaluated with guard precision and truncated to ``cutoff``.

    ``p`` must be known at least up to cutoff + 2.
    """
    cut = qexp(cutoff)
    inv = series_alpha(cut + 4).inv()
    return GradedPolynomial._raw({m: (s * inv).truncate(cut).scale(sign) for m, s in p.items()})


class SignPatternError(ValueError):
    """No (s1, s2) makes W = phi(x^3 + s1 y^3 + z^3) + s2 psi xyz."""


@dataclass(frozen=True)
class NamedSeriesBundle:
    cutoff: Fraction
    phi: NovikovSeries
    psi: NovikovSeries
    alpha: NovikovSeries
    wx: GradedPolynomial
    wy: GradedPolynomial
    wz: GradedPolynomial
    W: GradedPolynomial
    s1: int
    s2: int

    @property
    def signs(self) -> Tuple[int, int]:
        return (self.s1, self.s2)

    sign_s = signs

    def to_json(self):
        return {
            "cutoff": str(self.cutoff),
            "phi": self.phi.to_json(),
            "psi": self.psi.to_json(),
            "alpha": self.alpha.to_json(),
            "wx": self.wx.to_json(),
            "wy": self.wy.to_json(),
            "wz": self.wz.to_json(),
            "W": self.W.to_json(),
            "signs": {"s1": self.s1, "s2": self.s2},
        }


def build_W(cutoff=DEFAULT_CUTOFF) -> NamedSeriesBundle:
    """W = x w_x + y w_y + z w_z with its sign pattern against phi and psi."""
    cut = qexp(cutoff)
    if cut <= 0:
        raise ValueError("cutoff must be positive")
    phi, psi, alpha = series_phi(cut), series_psi(cut), series_alpha(cut)
    wx, wy, wz = series_wx(cut), series_wy(cut), series_wz(cut)
    W = X * wx + Y * wy + Z * wz
    W = W.truncate(cut)
    allowed = {(3, 0, 0), (0, 3, 0), (0, 0, 3), (1, 1, 1)}
    if any(m not in allowed for m in W.monomials()):
        raise SignPatternError(f"unexpected monomials in W: {W.render()}")
    zero = NovikovSeries.zero(cut)

    def matches(mono, target):
        return W.coefficient(mono).agrees(target, cut) if W.coefficient(mono) else target.agrees(zero, cut)

    found = []
    for s1 in (1, -1):
        for s2 in (1, -1):
            if (matches((3, 0, 0), phi) and matches((0, 0, 3), phi)
                    and matches((0, 3, 0), phi.scale(s1)) and matches((1, 1, 1), psi.scale(s2))):
                found.append((s1, s2))
    if len(found) != 1:
        # zero phi or psi (tiny cutoff) leaves a sign undetermined; take +1 there
        if found and (phi.is_zero() or psi.is_zero()):
            found = [max(found)]
        else:
            raise SignPatternError(f"no unique sign pattern for W = {W.render()}")
    s1, s2 = found[0]
    return NamedSeriesBundle(cut, phi, psi, alpha, wx, wy, wz, W, s1, s2)
