"""Catalog of continued-fraction solutions of y(x) - y(x+1) = V(x).

Every family has the shape

    scale / (xh^d + lam_0 + K_{n>=1} kappa_n / (xh^d + lam_n)),   xh = x + omega,

with d = 1 (``F``) or d = 2 (``G1``, ``G2``, ``H1``, ``H2``).  In generalized
form: b0 = 0, a_1 = scale, b_1 = xh^d + lam_0, a_{n+1} = kappa_n,
b_{n+1} = xh^d + lam_n.

Parameters may be exact (int/Fraction) or floats.  If any parameter is a
float the whole family is evaluated in floating point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from types import SimpleNamespace
from typing import Callable

import numpy as np

from .algebra import ONE, Poly, RatFunc
from .cfrac import MAX_DEPTH, CFrac, CFTerm, DivisionByZero, approximant, evaluate_adaptive
from .errors import DomainError, InvalidParams, NotConverged, NotTerminating, PoleInRange
from .multicorrection import DiffEq

PARAM_NAMES = {
    "F": ("a", "b"),
    "G1": ("a", "b"),
    "G2": ("u", "v"),
    "H1": ("a", "b1", "b2"),
    "H2": ("p", "q", "r", "s"),
}


def _num(v):
    if isinstance(v, bool):
        raise InvalidParams("boolean is not a parameter value")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, (Fraction, float)):
        return v
    raise InvalidParams(f"unsupported parameter value {v!r}")


@dataclass(frozen=True)
class FormulaParams:
    kind: str
    params: tuple

    def __post_init__(self):
        if self.kind not in PARAM_NAMES:
            raise InvalidParams(f"unknown family {self.kind!r}")
        names = PARAM_NAMES[self.kind]
        if len(self.params) != len(names):
            raise InvalidParams(f"{self.kind} takes parameters {names}")
        vals = tuple(_num(v) for v in self.params)
        if any(isinstance(v, float) for v in vals):
            vals = tuple(float(v) for v in vals)
            if not all(math.isfinite(v) for v in vals):
                raise InvalidParams("parameters must be finite")
        object.__setattr__(self, "params", vals)
        if self.kind == "H2" and not self.params[0] > 0:
            raise InvalidParams("H2 needs p > 0")

    @property
    def is_exact(self) -> bool:
        return all(isinstance(v, Fraction) for v in self.params)

    def ns(self, as_float: bool = False) -> SimpleNamespace:
        vals = (float(v) for v in self.params) if as_float else self.params
        return SimpleNamespace(**dict(zip(PARAM_NAMES[self.kind], vals)))

    # keyword constructors; H2 in particular is easy to mix up positionally
    @classmethod
    def F(cls, a, b):
        return cls("F", (a, b))

    @classmethod
    def G1(cls, a, b):
        return cls("G1", (a, b))

    @classmethod
    def G2(cls, u, v):
        return cls("G2", (u, v))

    @classmethod
    def H1(cls, a, b1, b2):
        return cls("H1", (a, b1, b2))

    @classmethod
    def H2(cls, p, q, r, s):
        return cls("H2", (p, q, r, s))


@dataclass(frozen=True)
class _Family:
    degree: int
    scale: Callable
    omega: Callable
    lam0: Callable
    lam: Callable  # (n, P)
    kappa: Callable  # (n, P)
    rhs: Callable  # P -> (num Poly, den Poly)
    n2_roots: Callable  # P -> candidate values of n^2 where kappa_n vanishes


def _quad_roots(b, c) -> list:
    """Real roots of t^2 + b t + c."""
    disc = b * b - 4 * c
    if disc < 0:
        return []
    r = math.sqrt(disc)
    return [(-b - r) / 2, (-b + r) / 2]


def _g1_c(P):
    return (-2 * P.a**3 + 9 * P.a * P.b) / 27


_F = _Family(
    degree=1,
    scale=lambda P: 1,
    omega=lambda P: (P.a - 1) / 2,
    lam0=lambda P: 0,
    lam=lambda n, P: 0 * n,
    kappa=lambda n, P: n * n * (n * n + 4 * P.b - P.a**2) / (4 * (2 * n - 1) * (2 * n + 1)),
    rhs=lambda P: (ONE, Poly([P.b, P.a, 1])),
    n2_roots=lambda P: [P.a**2 - 4 * P.b],
)

_G1 = _Family(
    degree=2,
    scale=lambda P: Fraction(1, 2),
    omega=lambda P: (2 * P.a - 3) / 6,
    lam0=lambda P: (3 - 2 * P.a**2 + 6 * P.b) / 12,
    lam=lambda n, P: (3 - 2 * P.a**2 + 6 * P.b) / 12 + (n + n * n) / 2,
    kappa=lambda n, P: -(n * n) * (-3 * n * n + P.a**2 - 3 * P.b) ** 2 / (36 * (2 * n - 1) * (2 * n + 1)),
    rhs=lambda P: (ONE, Poly([_g1_c(P), P.b, P.a, 1])),
    n2_roots=lambda P: [(P.a**2 - 3 * P.b) / 3],
)

# G2 is the G1 family at a = 3(u+v)/2, b = uv + (u+v)^2/2
_G2 = _Family(
    degree=2,
    scale=lambda P: Fraction(1, 2),
    omega=lambda P: (P.u + P.v - 1) / 2,
    lam0=lambda P: Fraction(1, 4) - (P.u - P.v) ** 2 / 8,
    lam=lambda n, P: (2 * n * n + 2 * n + 1) / 4 - (P.u - P.v) ** 2 / 8,
    kappa=lambda n, P: -(n * n) * (-(n * n) + ((P.u - P.v) / 2) ** 2) ** 2 / (4 * (2 * n - 1) * (2 * n + 1)),
    rhs=lambda P: (ONE, Poly([P.u, 1]) * Poly([(P.u + P.v) / 2, 1]) * Poly([P.v, 1])),
    n2_roots=lambda P: [((P.u - P.v) / 2) ** 2],
)


def _h1_rhs(P):
    q1 = Poly([P.b1, P.a, 1])
    q2 = Poly([P.b2, P.a, 1])
    return Poly([P.a, 2]), q1 * q2


_H1 = _Family(
    degree=2,
    scale=lambda P: 1,
    omega=lambda P: (P.a - 1) / 2,
    lam0=lambda P: (1 + 2 * P.b1 + 2 * P.b2 - P.a**2) / 4,
    lam=lambda n, P: (2 * n * n + 2 * n + 1 + 2 * P.b1 + 2 * P.b2 - P.a**2) / 4,
    kappa=lambda n, P: n
    * n
    * (-((P.b1 - P.b2) ** 2) + (P.a**2 - 2 * (P.b1 + P.b2)) * n * n - n**4)
    / (4 * (2 * n - 1) * (2 * n + 1)),
    rhs=_h1_rhs,
    n2_roots=lambda P: _quad_roots(-float(P.a**2 - 2 * (P.b1 + P.b2)), float((P.b1 - P.b2) ** 2)),
)


def _h2_rhs(P):
    t = Poly([P.q, P.p])
    return t * 2, t**4 + t * t * P.s + Poly.const(P.r)


_H2 = _Family(
    degree=2,
    scale=lambda P: 1 / P.p**3,
    omega=lambda P: Fraction(-1, 2) + P.q / P.p,
    lam0=lambda P: Fraction(1, 4) + P.s / (2 * P.p**2),
    lam=lambda n, P: (2 * n * n + 2 * n + 1) / 4 + P.s / (2 * P.p**2),
    kappa=lambda n, P: n
    * n
    * (-(n**4) - 2 * P.s * n * n / P.p**2 + (4 * P.r - P.s**2) / P.p**4)
    / (4 * (2 * n - 1) * (2 * n + 1)),
    rhs=_h2_rhs,
    n2_roots=lambda P: _quad_roots(float(2 * P.s / P.p**2), -float((4 * P.r - P.s**2) / P.p**4)),
)

FAMILIES = {"F": _F, "G1": _G1, "G2": _G2, "H1": _H1, "H2": _H2}


def _family(fp: FormulaParams) -> _Family:
    return FAMILIES[fp.kind]


def mc_point(fp: FormulaParams):
    return _family(fp).omega(fp.ns())


def kappa(fp: FormulaParams, n: int):
    return _family(fp).kappa(Fraction(n) if fp.is_exact else float(n), fp.ns())


def lam(fp: FormulaParams, n: int):
    """lambda_n, with lambda_0 the constant of the first partial denominator."""
    fam = _family(fp)
    if n == 0:
        return fam.lam0(fp.ns())
    return fam.lam(Fraction(n) if fp.is_exact else float(n), fp.ns())


def _partial_denominator(fam: _Family, omega, lam_value) -> Poly:
    xh = Poly([omega, 1])
    return (xh if fam.degree == 1 else xh * xh) + Poly.const(lam_value)


def terminates_at(fp: FormulaParams) -> int | None:
    """Smallest n >= 1 with kappa_n = 0 (the fraction is then finite)."""
    fam = _family(fp)
    P = fp.ns()
    hits = []
    for t in fam.n2_roots(P):
        t = float(t)
        if t < 0.5:
            continue
        n = round(math.sqrt(t))
        if n < 1:
            continue
        k = kappa(fp, n)
        if (k == 0) if fp.is_exact else abs(k) <= 1e-9 * max(1.0, n**6):
            hits.append(n)
    return min(hits) if hits else None


def build_cf(fp: FormulaParams) -> CFrac:
    """The family's continued fraction with terms as functions of x."""
    fam = _family(fp)
    P = fp.ns()
    exact = fp.is_exact
    omega = fam.omega(P)
    scale = fam.scale(P)
    if exact:
        scale = Fraction(scale)

    def rule(k: int) -> CFTerm:
        if k == 1:
            return CFTerm(scale, RatFunc(_partial_denominator(fam, omega, fam.lam0(P))))
        n = Fraction(k - 1) if exact else float(k - 1)
        return CFTerm(fam.kappa(n, P), RatFunc(_partial_denominator(fam, omega, fam.lam(n, P))))

    Pf = fp.ns(as_float=True)
    omega_f = float(omega)
    scale_f = float(scale)
    lam0_f = float(fam.lam0(Pf))

    def vectorized(x: float, first: int, last: int):
        ks = np.arange(first, last + 1, dtype=float)
        n = ks - 1.0
        xh = x + omega_f
        base = xh if fam.degree == 1 else xh * xh
        with np.errstate(divide="ignore", invalid="ignore"):
            a = np.asarray(fam.kappa(n, Pf), dtype=float)
            b = base + np.asarray(fam.lam(n, Pf), dtype=float) * np.ones_like(n)
        if first == 1:
            a[0] = scale_f
            b[0] = base + lam0_f
        return a, b

    return CFrac(Fraction(0), rule=rule, mc_point=omega, vectorized=vectorized)


def difference_equation(fp: FormulaParams) -> DiffEq:
    """The equation y(x) - y(x+1) = V(x) solved by the family (exact parameters)."""
    if not fp.is_exact:
        raise InvalidParams("exact equations need rational parameters")
    num, den = _family(fp).rhs(fp.ns())
    return DiffEq(RatFunc(1), RatFunc(num, den))


def rhs_float(fp: FormulaParams) -> tuple[Poly, Poly]:
    num, den = _family(fp).rhs(fp.ns(as_float=True))
    return num, den


def _real_roots(den: Poly) -> list[float]:
    cs = [float(c) for c in den.coeffs]
    if len(cs) <= 1:
        return []
    roots = np.roots(cs[::-1])
    return [float(r.real) for r in roots if abs(r.imag) <= 1e-9 * max(1.0, abs(r))]


def check_poles(den: Poly, x, *, tol: float = 1e-9) -> None:
    """PoleInRange if den vanishes at x, x+1, x+2, ..."""
    exact = isinstance(x, (int, Fraction)) and den.is_exact
    for alpha in _real_roots(den):
        d = alpha - float(x)
        k = round(d)
        if k >= 0 and abs(d - k) <= tol * max(1.0, abs(alpha)):
            if exact and den(Fraction(x) + k) != 0:
                continue
            raise PoleInRange(f"the right-hand side has a pole at x + {k} = {alpha:g}")


def evaluate(fp: FormulaParams, x, tol: float = 1e-12, max_depth: int = 1 << 22):
    """Numeric value of the family's fraction at real x (with domain guards)."""
    fam = _family(fp)
    _, den = rhs_float(fp)
    check_poles(den, x)
    if terminates_at(fp) is None and not float(x) > -float(fam.omega(fp.ns())):
        raise DomainError("x must exceed -omega unless the fraction terminates")
    return evaluate_adaptive(build_cf(fp), float(x), tol=tol, max_depth=max_depth)


def finite_cf_sum(fp: FormulaParams, k: int, n0: int):
    """Sum_{n >= n0} V(n) from the k-level terminating fraction at x = n0.

    Exact for rational parameters, float otherwise.
    """
    if k < 1:
        raise NotTerminating("k must be a positive integer")
    if kappa(fp, k) != 0 if fp.is_exact else abs(kappa(fp, k)) > 1e-9:
        raise NotTerminating(f"kappa_{k} does not vanish for these parameters")
    num, den = _family(fp).rhs(fp.ns())
    if n0 < 0:
        raise PoleInRange("n0 must be non-negative")
    check_poles(den, Fraction(n0) if fp.is_exact else float(n0))
    cf = build_cf(fp).explicit(k)
    x = Fraction(n0) if fp.is_exact else float(n0)
    try:
        return approximant(cf, k, x).value
    except (DivisionByZero, ZeroDivisionError) as exc:
        raise PoleInRange(f"a partial denominator vanishes at x = {n0}") from exc


# -- special series ---------------------------------------------------------------


def _check_tol(tol: float) -> None:
    if not tol > 0:
        raise InvalidParams("tol must be positive")


def _cf_tail(fp: FormulaParams, x: float, tol: float) -> tuple[float, int]:
    res = evaluate(fp, x, tol=tol / 10)
    if res.status == MAX_DEPTH:
        raise NotConverged(f"{fp.kind} tail at x = {x} did not reach tol {tol:g}")
    return res.value, res.depth


def _head_length(r: float) -> int:
    # the tails converge fast once x is well past the parameters' scale
    return 10 + int(math.ceil(2 * r))


def _positive_r(r) -> float:
    if isinstance(r, bool) or not isinstance(r, (int, float, Fraction)) or not r > 0:
        raise InvalidParams("r must be a positive number")
    return float(r)


def mathieu_detail(r, tol: float = 1e-12, l: int | None = None) -> tuple[float, int]:
    """``(value, depth)`` of the Mathieu series; see ``mathieu``."""
    _check_tol(tol)
    r = _positive_r(r)
    l = _head_length(r) if l is None else l
    if l < 1:
        raise InvalidParams("head length must be >= 1")
    head = math.fsum(2 * m / (m * m + r * r) ** 2 for m in range(1, l))
    tail, depth = _cf_tail(FormulaParams.H2(p=1.0, q=0.0, r=r**4, s=2 * r * r), l, tol)
    return head + tail, depth


def mathieu(r, tol: float = 1e-12, l: int | None = None) -> float:
    """S(r) = sum_{m>=1} 2m/(m^2+r^2)^2 as a head sum plus the H2 tail at m = l."""
    return mathieu_detail(r, tol, l)[0]


def alt_mathieu_detail(r, tol: float = 1e-12, k1: int | None = None, k2: int | None = None) -> tuple[float, int]:
    """``(value, depth)`` of the alternating Mathieu series; depth is the larger tail depth."""
    _check_tol(tol)
    r = _positive_r(r)
    k1 = _head_length(r) if k1 is None else k1
    k2 = _head_length(r) if k2 is None else k2
    if k1 < 1 or k2 < 1:
        raise InvalidParams("k1 and k2 must be positive")
    b_odd = (1 + r * r) / 4
    b_even = r * r / 4
    odd = math.fsum((2 * m + 1) / (m * m + m + b_odd) ** 2 for m in range(k1))
    even = math.fsum(2 * m / (m * m + b_even) ** 2 for m in range(k2))
    t_odd, d_odd = _cf_tail(FormulaParams.H1(a=1.0, b1=b_odd, b2=b_odd), k1, tol)
    t_even, d_even = _cf_tail(FormulaParams.H1(a=0.0, b1=b_even, b2=b_even), k2, tol)
    return ((odd + t_odd) - (even + t_even)) / 8, max(d_odd, d_even)


def alt_mathieu(r, tol: float = 1e-12, k1: int | None = None, k2: int | None = None) -> float:
    """sum_{m>=1} (-1)^(m-1) 2m/(m^2+r^2)^2 from two H1 tails at k1 and k2."""
    return alt_mathieu_detail(r, tol, k1, k2)[0]


def szablowski_M2_detail(m: int, j: int, tol: float = 1e-12, l: int | None = None) -> tuple[float, int]:
    """``(value, depth)``; see ``szablowski_M2``."""
    _check_tol(tol)
    if not (isinstance(m, int) and isinstance(j, int)) or not 1 <= j < m or math.gcd(m, j) != 1:
        raise InvalidParams("need integers with 1 <= j < m and gcd(m, j) = 1")
    a = Fraction(j, m) - Fraction(1, 2)
    b = Fraction(j * j, 4 * m * m) - Fraction(j, 4 * m)
    l = 12 if l is None else l
    if l < 1:
        raise InvalidParams("head length must be >= 1")
    af, bf = float(a), float(b)
    head = math.fsum((2 * n + af) / (n * n + af * n + bf) ** 2 for n in range(1, l))
    tail, depth = _cf_tail(FormulaParams.H1(a=a, b1=b, b2=b), l, tol)
    return 1 / j**2 - (head + tail) / (8 * m * m), depth


def szablowski_M2(m: int, j: int, tol: float = 1e-12, l: int | None = None) -> float:
    """sum_{n>=0} (-1)^n/(mn+j)^2 for coprime 1 <= j < m."""
    return szablowski_M2_detail(m, j, tol, l)[0]


# -- gamma-quotient cross-checks ------------------------------------------------------


def _log_gamma_sum(plus: list[float], minus: list[float]) -> float:
    for t in plus + minus:
        if not t > 0:
            raise DomainError(f"gamma argument {t:g} is not positive")
    return math.fsum(math.lgamma(t) for t in plus) - math.fsum(math.lgamma(t) for t in minus)


def entry33_lhs(x: float, m: float, n: float) -> float:
    """(1-Q)/(1+Q) with Q the four-gamma quotient."""
    h = lambda s: (x + s + 1) / 2  # noqa: E731
    logq = _log_gamma_sum([h(m - n), h(-m + n)], [h(m + n), h(-m - n)])
    return -math.tanh(logq / 2)


def entry33_cf(x: float, m: float, n: float) -> CFrac:
    x, m, n = float(x), float(m), float(n)

    def vectorized(_x, first, last):
        j = np.arange(first, last + 1, dtype=float) - 1.0
        a = (m * m - j * j) * (n * n - j * j)
        b = (2 * j + 1) * x
        if first == 1:
            a[0] = m * n
        return a, b

    def rule(k):
        a, b = vectorized(None, k, k)
        return CFTerm(float(a[0]), float(b[0]))

    return CFrac(0.0, rule=rule, vectorized=vectorized)


def entry33_rhs(x: float, m: float, n: float, tol: float = 1e-13) -> float:
    return evaluate_adaptive(entry33_cf(x, m, n), float(x), tol=tol).value


def entry35_lhs(x: float, l: float, m: float, n: float) -> float:
    """(1-P)/(1+P) with P the eight-gamma quotient."""
    h = lambda s: (x + s + 1) / 2  # noqa: E731
    plus = [h(l + m + n), h(l - m - n), h(-l + m - n), h(-l - m + n)]
    minus = [h(-l - m - n), h(-l + m + n), h(l - m + n), h(l + m - n)]
    return -math.tanh(_log_gamma_sum(plus, minus) / 2)


def entry35_cf(x: float, l: float, m: float, n: float) -> CFrac:
    x, l, m, n = float(x), float(l), float(m), float(n)
    base = x * x - l * l - m * m - n * n

    def vectorized(_x, first, last):
        j = np.arange(first, last + 1, dtype=float) - 1.0
        a = 4 * (l * l - j * j) * (m * m - j * j) * (n * n - j * j)
        b = (2 * j + 1) * (base + 2 * j * j + 2 * j + 1)
        if first == 1:
            a[0] = 2 * l * m * n
        return a, b

    def rule(k):
        a, b = vectorized(None, k, k)
        return CFTerm(float(a[0]), float(b[0]))

    return CFrac(0.0, rule=rule, vectorized=vectorized)


def entry35_rhs(x: float, l: float, m: float, n: float, tol: float = 1e-13) -> float:
    return evaluate_adaptive(entry35_cf(x, l, m, n), float(x), tol=tol).value
