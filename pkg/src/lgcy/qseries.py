"""Truncated Novikov series with exact rational exponents and coefficients.

A series is a finite sparse map ``exponent -> coefficient`` together with a
cutoff: every exponent at or above the cutoff is unknown and is never stored.
A cutoff of ``None`` marks an exact (finite) series such as a monomial.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple

DEFAULT_CUTOFF = Fraction(200)

__all__ = [
    "DEFAULT_CUTOFF",
    "NovikovSeries",
    "qexp",
    "qs_add",
    "qs_mul",
    "qs_inv",
    "qs_valuation",
    "min_cutoff",
]


def qexp(value) -> Fraction:
    """Coerce an int, Fraction or exact decimal string to a Fraction."""
    if isinstance(value, float):
        raise TypeError("floating point exponents are not allowed")
    return Fraction(value)


def min_cutoff(*cuts: Optional[Fraction]) -> Optional[Fraction]:
    known = [c for c in cuts if c is not None]
    return min(known) if known else None


def _add_cut(cut: Optional[Fraction], shift: Fraction) -> Optional[Fraction]:
    return None if cut is None else cut + shift


class NovikovSeries:
    """Immutable truncated series sum c_i T^{e_i}."""

    __slots__ = ("_terms", "_cutoff", "_dropped", "_hash")

    def __init__(self, terms: Mapping | Iterable[Tuple] = (), cutoff=DEFAULT_CUTOFF):
        cut = None if cutoff is None else qexp(cutoff)
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: Dict[Fraction, Fraction] = {}
        dropped = False
        for e, c in items:
            e = qexp(e)
            c = Fraction(c)
            if cut is not None and e >= cut:
                dropped = dropped or c != 0
                continue
            acc[e] = acc.get(e, 0) + c
        self._terms = {e: acc[e] for e in sorted(acc) if acc[e] != 0}
        self._cutoff = cut
        self._dropped = dropped
        self._hash = None

    # construction helpers
    @classmethod
    def _raw(cls, terms: Dict[Fraction, Fraction], cutoff: Optional[Fraction]) -> "NovikovSeries":
        obj = cls.__new__(cls)
        obj._terms = {e: terms[e] for e in sorted(terms) if terms[e] != 0}
        obj._cutoff = cutoff
        obj._dropped = False
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, exponent=0, coeff=1, cutoff=None) -> "NovikovSeries":
        return cls({exponent: coeff}, cutoff)

    @classmethod
    def one(cls, cutoff=None) -> "NovikovSeries":
        return cls({0: 1}, cutoff)

    @classmethod
    def zero(cls, cutoff=None) -> "NovikovSeries":
        return cls({}, cutoff)

    # accessors
    @property
    def terms(self) -> Dict[Fraction, Fraction]:
        return dict(self._terms)

    @property
    def cutoff(self) -> Optional[Fraction]:
        return self._cutoff

    @property
    def dropped(self) -> bool:
        """True if construction discarded nonzero terms at or above the cutoff."""
        return self._dropped

    def items(self) -> Iterator[Tuple[Fraction, Fraction]]:
        return iter(self._terms.items())

    def exponents(self):
        return list(self._terms)

    def coeff(self, exponent) -> Fraction:
        e = qexp(exponent)
        if self._cutoff is not None and e >= self._cutoff:
            raise ValueError(f"exponent {e} is beyond the cutoff {self._cutoff}")
        return self._terms.get(e, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def valuation(self) -> Fraction:
        if not self._terms:
            raise ValueError("valuation of the zero series")
        return next(iter(self._terms))

    def leading(self) -> Tuple[Fraction, Fraction]:
        e = self.valuation()
        return e, self._terms[e]

    # arithmetic
    def truncate(self, cutoff) -> "NovikovSeries":
        cut = None if cutoff is None else qexp(cutoff)
        if cut is not None and self._cutoff is not None and cut > self._cutoff:
            raise ValueError(f"cannot raise cutoff from {self._cutoff} to {cut}")
        if cut is None:
            return self
        return NovikovSeries._raw({e: c for e, c in self._terms.items() if e < cut}, cut)

    def __neg__(self) -> "NovikovSeries":
        return NovikovSeries._raw({e: -c for e, c in self._terms.items()}, self._cutoff)

    def __add__(self, other) -> "NovikovSeries":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        cut = min_cutoff(self._cutoff, other._cutoff)
        acc = {}
        for src in (self._terms, other._terms):
            for e, c in src.items():
                if cut is None or e < cut:
                    acc[e] = acc.get(e, 0) + c
        return NovikovSeries._raw(acc, cut)

    __radd__ = __add__

    def __sub__(self, other) -> "NovikovSeries":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "NovikovSeries":
        return _coerce(other) - self

    def scale(self, c) -> "NovikovSeries":
        c = Fraction(c)
        if c == 0:
            return NovikovSeries._raw({}, self._cutoff)
        return NovikovSeries._raw({e: c * v for e, v in self._terms.items()}, self._cutoff)

    def shift(self, exponent) -> "NovikovSeries":
        """Multiply by T^exponent."""
        s = qexp(exponent)
        return NovikovSeries._raw({e + s: c for e, c in self._terms.items()},
                                  _add_cut(self._cutoff, s))

    def __mul__(self, other) -> "NovikovSeries":
        if isinstance(other, (int, Rational)) and not isinstance(other, bool):
            return self.scale(other)
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return _mul(self, other)

    __rmul__ = __mul__

    def inv(self, cutoff=None) -> "NovikovSeries":
        return qs_inv(self, cutoff)

    def __pow__(self, n: int) -> "NovikovSeries":
        if n < 0:
            return self.inv() ** (-n)
        out = NovikovSeries.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # comparison and output
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Rational)) and not isinstance(other, bool):
            other = NovikovSeries({0: other}, self._cutoff)
        if not isinstance(other, NovikovSeries):
            return NotImplemented
        return self._cutoff == other._cutoff and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((tuple(self._terms.items()), self._cutoff))
        return self._hash

    def agrees(self, other: "NovikovSeries", cutoff=None) -> bool:
        """Equality of the terms below a common cutoff (default: the smaller one)."""
        cut = min_cutoff(self._cutoff, other._cutoff, None if cutoff is None else qexp(cutoff))
        a = {e: c for e, c in self._terms.items() if cut is None or e < cut}
        b = {e: c for e, c in other._terms.items() if cut is None or e < cut}
        return a == b

    def to_json(self):
        return [[e.numerator, e.denominator, c.numerator, c.denominator]
                for e, c in self._terms.items()]

    @classmethod
    def from_json(cls, data, cutoff=DEFAULT_CUTOFF) -> "NovikovSeries":
        return cls({Fraction(en, ed): Fraction(cn, cd) for en, ed, cn, cd in data}, cutoff)

    def render(self, var: str = "T") -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self._terms.items():
            mag = abs(c)
            sign = "-" if c < 0 else "+"
            if e == 0:
                body = str(mag)
            else:
                body = f"{var}^{e}" if mag == 1 else f"{mag}*{var}^{e}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        cut = "exact" if self._cutoff is None else f"O(T^{self._cutoff})"
        return f"NovikovSeries({self.render()}; {cut})"


def _coerce(x):
    if isinstance(x, NovikovSeries):
        return x
    if isinstance(x, (int, Rational)) and not isinstance(x, bool):
        return NovikovSeries({0: x}, None)
    return NotImplemented


def _mul(a: NovikovSeries, b: NovikovSeries) -> NovikovSeries:
    if not a._terms or not b._terms:
        # the product vanishes; its error term is the smallest error exponent
        if not a._terms and not b._terms:
            if a._cutoff is None or b._cutoff is None:
                return NovikovSeries._raw({}, None)
            return NovikovSeries._raw({}, a._cutoff + b._cutoff)
        z, nz = (a, b) if not a._terms else (b, a)
        if z._cutoff is None:
            return NovikovSeries._raw({}, None)
        return NovikovSeries._raw({}, z._cutoff + nz.valuation())
    va, vb = a.valuation(), b.valuation()
    cut = min_cutoff(_add_cut(a._cutoff, vb), _add_cut(b._cutoff, va))
    acc: Dict[Fraction, Fraction] = {}
    for e1, c1 in a._terms.items():
        if cut is not None and e1 + vb >= cut:
            break
        for e2, c2 in b._terms.items():
            e = e1 + e2
            if cut is not None and e >= cut:
                break
            acc[e] = acc.get(e, 0) + c1 * c2
    return NovikovSeries._raw(acc, cut)


def qs_add(a: NovikovSeries, b: NovikovSeries) -> NovikovSeries:
    return a + b


def qs_mul(a: NovikovSeries, b: NovikovSeries) -> NovikovSeries:
    return _mul(a, b)


def qs_valuation(a: NovikovSeries) -> Fraction:
    return a.valuation()


def qs_inv(a: NovikovSeries, cutoff=None) -> NovikovSeries:
    """Inverse via a = c T^v (1 + u), 1/a = c^-1 T^-v sum (-u)^n.

    For a truncated input the result is known below cutoff(a) - 2v.  An exact
    input that is not a monomial needs an explicit ``cutoff`` (default 200)
    since its inverse is an infinite series.
    """
    if a.is_zero():
        raise ZeroDivisionError("inversion of the zero series")
    v, c = a.leading()
    if a.cutoff is None:
        if len(a) == 1:
            return NovikovSeries._raw({-v: 1 / c}, None)
        target = qexp(cutoff) if cutoff is not None else DEFAULT_CUTOFF
    else:
        target = a.cutoff - 2 * v
        if cutoff is not None:
            target = min(target, qexp(cutoff))
    # u has positive valuation and is needed below target + v
    ucut = target + v
    u = NovikovSeries._raw({e - v: x / c for e, x in a.items() if e != v and e - v < ucut}, ucut)
    minus_u = -u
    total = {Fraction(0): Fraction(1)}
    power = NovikovSeries._raw({Fraction(0): Fraction(1)}, ucut)
    while True:
        power = _mul(power, minus_u).truncate(ucut)
        if power.is_zero():
            break
        for e, x in power.items():
            total[e] = total.get(e, 0) + x
    inv_c = 1 / c
    return NovikovSeries._raw({e - v: x * inv_c for e, x in total.items() if e - v < target}, target)
