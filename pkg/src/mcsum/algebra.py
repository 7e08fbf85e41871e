"""Exact univariate algebra over the rationals.

``Poly`` and ``RatFunc`` are immutable.  Coefficients are ``Fraction`` (ints are
promoted on construction); ``float`` coefficients are tolerated so the same
types can carry irrational parameters numerically, but gcd reduction is only
performed when every coefficient is exact.

``SeriesInvX`` is a truncated Laurent expansion at infinity,
``sum_j c_j x^(-j)`` for ``lead_exp <= j <= order``.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from numbers import Rational
from typing import Iterable, Sequence, Union

from .errors import ZeroDenominator

Number = Union[Fraction, float]

INF = math.inf


def as_rat(value) -> Number:
    """Promote ints/Rationals to ``Fraction``; leave floats alone."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        return Fraction(int(value))
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        return value
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot use {value!r} as a coefficient")


def _is_exact(value) -> bool:
    return isinstance(value, Fraction)


class Poly:
    """Polynomial in one variable, coefficients stored low to high degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple = tuple(cs)

    @classmethod
    def const(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def monomial(cls, degree: int, c=1) -> "Poly":
        return cls([0] * degree + [c])

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    @property
    def is_exact(self) -> bool:
        return all(_is_exact(c) for c in self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, float, Fraction)):
            return self == Poly.const(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        return format_poly(self)

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __add__(self, other) -> "Poly":
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly([ai + (b[i] if i < len(b) else 0) for i, ai in enumerate(a)])

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, float, Fraction)):
            c = as_rat(other)
            return Poly(ci * c for ci in self.coeffs)
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        out = Poly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __call__(self, x):
        acc = Fraction(0) if not isinstance(x, float) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDenominator("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        lb = other.lc
        if len(rem) - 1 < db:
            return Poly(), self
        quot = [Fraction(0)] * (len(rem) - db)
        for k in range(len(rem) - 1 - db, -1, -1):
            q = rem[k + db] / lb
            quot[k] = q
            if q:
                for i, bi in enumerate(other.coeffs):
                    rem[k + i] -= q * bi
        return Poly(quot), Poly(rem[:db])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def shift(self, c) -> "Poly":
        """Return p(x + c) (Taylor shift via Horner)."""
        c = as_rat(c)
        if c == 0 or self.degree < 1:
            return self
        out = Poly()
        step = Poly([c, 1])
        for coeff in reversed(self.coeffs):
            out = out * step + coeff
        return out

    def monic(self) -> "Poly":
        return self * (1 / self.lc) if self.coeffs else self

    def derivative(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self.coeffs) if i)


def _coerce_poly(other):
    if isinstance(other, Poly):
        return other
    if isinstance(other, (int, float, Fraction)):
        return Poly.const(other)
    return NotImplemented


X = Poly.x()
ONE = Poly.const(1)
ZERO = Poly()


def format_poly(p: Poly, var: str = "x") -> str:
    if p.is_zero():
        return "0"
    parts = []
    for i in range(p.degree, -1, -1):
        c = p.coeffs[i]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = -c if c < 0 else c
        if i == 0:
            body = str(mag)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# -- gcd over Q via the primitive polynomial remainder sequence ---------------


def _primitive_ints(coeffs: Sequence[Fraction]) -> list[int]:
    den = reduce(math.lcm, (c.denominator for c in coeffs), 1)
    ints = [int(c * den) for c in coeffs]
    g = reduce(math.gcd, ints, 0)
    return [i // g for i in ints] if g > 1 else ints


def _int_prem(a: list[int], b: list[int]) -> list[int]:
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(a) - 1 >= db and a:
        la = a[-1]
        off = len(a) - 1 - db
        a = [lb * ai for ai in a]
        for i, bi in enumerate(b):
            a[i + off] -= la * bi
        while a and a[-1] == 0:
            a.pop()
    return a


def _int_primitive(a: list[int]) -> list[int]:
    g = reduce(math.gcd, a, 0)
    if g > 1:
        a = [ai // g for ai in a]
    if a and a[-1] < 0:
        a = [-ai for ai in a]
    return a


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd of two exact polynomials (fraction-free internally)."""
    if p.is_zero():
        return q.monic()
    if q.is_zero():
        return p.monic()
    a = _int_primitive(_primitive_ints(p.coeffs))
    b = _int_primitive(_primitive_ints(q.coeffs))
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _int_prem(a, b)
        a, b = b, _int_primitive(r)
    return Poly(a).monic()


# -- rational functions -------------------------------------------------------


class RatFunc:
    """Reduced quotient num/den; exact instances have a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, reduce: bool = True):
        num = _as_poly(num)
        den = ONE if den is None else _as_poly(den)
        if den.is_zero():
            raise ZeroDenominator("rational function with zero denominator")
        if reduce:
            num, den = _reduce(num, den)
        self.num: Poly = num
        self.den: Poly = den

    @classmethod
    def const(cls, c) -> "RatFunc":
        return cls(Poly.const(c))

    @classmethod
    def x(cls) -> "RatFunc":
        return cls(X)

    @property
    def is_exact(self) -> bool:
        return self.num.is_exact and self.den.is_exact

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, float, Fraction, Poly)):
            other = RatFunc(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"RatFunc({self.num!r}, {self.den!r})"

    def __str__(self) -> str:
        return format_ratfunc(self)

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, reduce=False)

    def __add__(self, other) -> "RatFunc":
        other = _as_ratfunc(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other) -> "RatFunc":
        other = _as_ratfunc(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RatFunc":
        return (-self) + other

    def __mul__(self, other) -> "RatFunc":
        other = _as_ratfunc(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFunc":
        other = _as_ratfunc(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDenominator("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "RatFunc":
        return _as_ratfunc(other) / self

    def __call__(self, x):
        d = self.den(x)
        if d == 0:
            raise ZeroDenominator(f"pole at x = {x}")
        return self.num(x) / d

    def shift(self, c) -> "RatFunc":
        return shift(self, c)


def _as_poly(value) -> Poly:
    if isinstance(value, Poly):
        return value
    if isinstance(value, (list, tuple)):
        return Poly(value)
    return Poly.const(value)


def _as_ratfunc(value):
    if isinstance(value, RatFunc):
        return value
    if isinstance(value, (Poly, int, float, Fraction)):
        return RatFunc(value)
    return NotImplemented


def _reduce(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    if num.is_zero():
        return ZERO, ONE
    if not (num.is_exact and den.is_exact):
        return num, den
    g = poly_gcd(num, den)
    if g.degree > 0:
        num, den = num // g, den // g
    lc = den.lc
    if lc != 1:
        num, den = num * (1 / lc), den * (1 / lc)
    return num, den


def ratfunc_normalize(num, den) -> RatFunc:
    """Reduced form of num/den: coprime, monic (hence positive-leading) denominator."""
    return RatFunc(num, den)


def shift(f: RatFunc, c) -> RatFunc:
    """f(x + c)."""
    return RatFunc(f.num.shift(c), f.den.shift(c))


def rate_R(f) -> float | int:
    """Decay exponent at infinity: deg(den) - deg(num); ``INF`` for the zero function."""
    if isinstance(f, Poly):
        f = RatFunc(f)
    if f.num.is_zero():
        return INF
    return f.den.degree - f.num.degree


def format_ratfunc(f: RatFunc, var: str = "x") -> str:
    """Human form with integer coefficients where possible."""
    num, den = f.num, f.den
    if num.is_exact and den.is_exact and not num.is_zero():
        scale = reduce(math.lcm, (c.denominator for c in num.coeffs + den.coeffs), 1)
        num, den = num * scale, den * scale
        g = reduce(math.gcd, (int(c) for c in num.coeffs + den.coeffs), 0)
        if g > 1:
            num, den = num * Fraction(1, g), den * Fraction(1, g)
    if den == ONE:
        return format_poly(num, var)
    return f"({format_poly(num, var)})/({format_poly(den, var)})"


# -- Laurent series at infinity ----------------------------------------------


class SeriesInvX:
    """Truncated expansion sum_{j=lead_exp}^{order} c_j x^(-j).

    ``coeffs[i]`` is the coefficient of x^-(lead_exp + i).  Coefficients past
    ``order`` are never reported; asking for them raises ``ValueError``.
    """

    __slots__ = ("lead_exp", "coeffs", "order")

    def __init__(self, lead_exp: int, coeffs: Sequence, order: int):
        cs = [as_rat(c) for c in coeffs]
        cs = cs[: max(0, order - lead_exp + 1)]
        while cs and cs[0] == 0:
            cs.pop(0)
            lead_exp += 1
        while cs and cs[-1] == 0:
            cs.pop()
        if not cs:
            lead_exp = order + 1
        self.lead_exp = lead_exp
        self.coeffs = tuple(cs)
        self.order = order

    @classmethod
    def zero(cls, order: int) -> "SeriesInvX":
        return cls(order + 1, (), order)

    def is_zero(self) -> bool:
        """True when every coefficient through ``order`` vanishes."""
        return not self.coeffs

    @property
    def valuation(self) -> int | float:
        """Exponent j of the first nonzero coefficient, or INF when zero to ``order``."""
        return INF if not self.coeffs else self.lead_exp

    def coeff(self, j: int):
        if j > self.order:
            raise ValueError(f"x^-{j} is beyond the series order {self.order}")
        i = j - self.lead_exp
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def terms(self) -> list[tuple[int, Fraction]]:
        return [(self.lead_exp + i, c) for i, c in enumerate(self.coeffs) if c != 0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, SeriesInvX):
            return NotImplemented
        return (self.order, self.terms()) == (other.order, other.terms())

    def __repr__(self) -> str:
        body = " + ".join(f"({c})x^-{j}" for j, c in self.terms()) or "0"
        return f"SeriesInvX({body} + O(x^-{self.order + 1}))"

    def __neg__(self) -> "SeriesInvX":
        return SeriesInvX(self.lead_exp, [-c for c in self.coeffs], self.order)

    def __add__(self, other: "SeriesInvX") -> "SeriesInvX":
        order = min(self.order, other.order)
        lo = min(self.lead_exp, other.lead_exp)
        if lo > order:
            return SeriesInvX.zero(order)
        return SeriesInvX(lo, [self.coeff(j) + other.coeff(j) for j in range(lo, order + 1)], order)

    def __sub__(self, other: "SeriesInvX") -> "SeriesInvX":
        return self + (-other)

    def __mul__(self, other) -> "SeriesInvX":
        if not isinstance(other, SeriesInvX):
            c = as_rat(other)
            return SeriesInvX(self.lead_exp, [ci * c for ci in self.coeffs], self.order)
        if self.is_zero() or other.is_zero():
            # valid through the smaller guaranteed order of the product
            order = min(self.order + other.lead_exp, other.order + self.lead_exp)
            return SeriesInvX.zero(order)
        order = min(self.order + other.lead_exp, other.order + self.lead_exp)
        lead = self.lead_exp + other.lead_exp
        n = order - lead + 1
        out = [Fraction(0)] * max(n, 0)
        for i, a in enumerate(self.coeffs):
            if i >= n:
                break
            if a == 0:
                continue
            for k, b in enumerate(other.coeffs):
                if i + k >= n:
                    break
                out[i + k] += a * b
        return SeriesInvX(lead, out, order)

    __rmul__ = __mul__

    def shift(self, c) -> "SeriesInvX":
        """Expansion of f(x + c) from the expansion of f, same order."""
        c = as_rat(c)
        order = self.order
        acc: dict[int, Fraction] = {}
        for j, cj in self.terms():
            if j <= 0:
                # (x + c)^m with m = -j: finitely many terms x^(m-t)
                m = -j
                for t in range(m + 1):
                    e = -(m - t)
                    if e <= order:
                        acc[e] = acc.get(e, Fraction(0)) + cj * math.comb(m, t) * c**t
            else:
                # (x + c)^-j = sum_t binom(-j, t) c^t x^-(j+t)
                for t in range(0, order - j + 1):
                    coef = (-1) ** t * math.comb(j + t - 1, t)
                    acc[j + t] = acc.get(j + t, Fraction(0)) + cj * coef * c**t
        if not acc:
            return SeriesInvX.zero(order)
        lo = min(acc)
        return SeriesInvX(lo, [acc.get(j, 0) for j in range(lo, order + 1)], order)

    def to_ratfunc(self) -> RatFunc:
        """Recompose the finite Laurent sum as a rational function."""
        if self.is_zero():
            return RatFunc(ZERO)
        top = max(self.order, 0)
        cs = [Fraction(0)] * (top - self.lead_exp + 1)
        for j, c in self.terms():
            cs[top - j] = c
        num = Poly(cs)
        return RatFunc(num, Poly.monomial(top))


def laurent_coeffs(num: Poly, den: Poly, order: int) -> tuple[int, list]:
    """Coefficients of num/den at infinity from x^-(deg den - deg num) through x^-order.

    Long division on the reversed polynomials.  Returns ``(lead_exp, coeffs)``.
    """
    if den.is_zero():
        raise ZeroDenominator("series of a function with zero denominator")
    if num.is_zero():
        return order + 1, []
    lead = den.degree - num.degree
    n = order - lead + 1
    if n <= 0:
        return lead, []
    nr = num.coeffs[::-1]
    dr = den.coeffs[::-1]
    inv = 1 / dr[0]
    out = []
    for i in range(n):
        s = nr[i] if i < len(nr) else 0
        for k in range(1, min(i, len(dr) - 1) + 1):
            s -= dr[k] * out[i - k]
        out.append(s * inv)
    return lead, out


def series_at_infinity(f: RatFunc, L: int) -> SeriesInvX:
    """Exact Laurent expansion of f at x = infinity through x^-L."""
    lead, cs = laurent_coeffs(f.num, f.den, L)
    if not cs:
        return SeriesInvX.zero(L)
    return SeriesInvX(lead, cs, L)
