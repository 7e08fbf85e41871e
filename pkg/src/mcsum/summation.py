"""Sums of rational series: exact telescoping, certified brute-force brackets,
and claim verification.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .algebra import INF, Poly, RatFunc, rate_R
from .errors import DivergentTail, NonVanishingAtInfinity, PoleInRange

POSITIVE = "positive"
ALTERNATING = "alternating"
CHUNK = 1 << 16
EPS = 2.0**-52
FIRST_TERMS = 1 << 16


def max_terms() -> int:
    """Largest adaptive term count; lower for the slow pure-Python kernels."""
    return 1 << 26 if kernels.BACKEND == "cython" else 1 << 22

PASS, FAIL, INCONCLUSIVE = "Pass", "Fail", "Inconclusive"


@dataclass(frozen=True)
class SeriesSpec:
    """sum_{n >= n0} s_n u(n), with s_n = 1 or (-1)^(n - n0)."""

    term: RatFunc
    n0: int
    sign_pattern: str = POSITIVE

    def __post_init__(self):
        if not isinstance(self.term, RatFunc):
            object.__setattr__(self, "term", RatFunc(self.term))
        if self.sign_pattern not in (POSITIVE, ALTERNATING):
            raise ValueError(f"unknown sign pattern {self.sign_pattern!r}")


@dataclass(frozen=True)
class VerifyReport:
    claimed: float
    oracle_low: float
    oracle_high: float
    n_terms: int
    verdict: str


def cauchy_bound(p: Poly) -> float:
    """Every real root of p has absolute value below this bound."""
    if p.degree <= 0:
        return 0.0
    lc = abs(float(p.lc))
    return 1.0 + max(abs(float(c)) / lc for c in p.coeffs[:-1])


def check_no_poles(den: Poly, n0: int) -> None:
    """PoleInRange if den vanishes at some integer n >= n0."""
    if den.degree <= 0:
        return
    roots = np.roots([float(c) for c in reversed(den.coeffs)])
    for r in roots:
        if abs(r.imag) > 1e-6 * max(1.0, abs(r)):
            continue
        for k in {math.floor(r.real), math.ceil(r.real)}:
            if k < n0:
                continue
            v = den(Fraction(k)) if den.is_exact else den(float(k))
            if v == 0 or (not den.is_exact and abs(v) <= 1e-12 * max(1.0, abs(float(den.lc))) * max(1, abs(k)) ** den.degree):
                raise PoleInRange(f"the term has a pole at n = {k}")


def tail_bound(u: RatFunc, m: int) -> tuple[float, int]:
    """Bound sum_{n >= m} |u(n)| using |u(n)| <= C n^-mu for n >= m.

    Returns ``(bound, sign)`` with sign +1/-1 when u is certified to keep
    that sign for n >= m, else 0.  The bound is ``inf`` when the coefficient
    estimate does not hold yet at m.
    """
    mu = rate_R(u)
    if mu is INF:
        return 0.0, 0
    if mu < 2:
        raise DivergentTail(f"rate {mu} < 2: the positive tail diverges")
    if m < 2:
        return INF, 0
    p, q = u.num, u.den
    dp, dq = p.degree, q.degree
    mf = float(m)
    p_up = sum(abs(float(c)) * mf ** (i - dp) for i, c in enumerate(p.coeffs))
    p_low = abs(float(p.lc)) - sum(abs(float(c)) * mf ** (i - dp) for i, c in enumerate(p.coeffs[:-1]))
    q_low = abs(float(q.lc)) - sum(abs(float(c)) * mf ** (i - dq) for i, c in enumerate(q.coeffs[:-1]))
    if q_low <= 0:
        return INF, 0
    C = p_up / q_low
    # sum_{n >= m} n^-mu <= (m-1)^(1-mu)/(mu-1)
    bound = C * (mf - 1) ** (1 - mu) / (mu - 1)
    bound *= 1 + 64 * EPS
    sign = 0
    if p_low > 0:
        sign = 1 if (float(p.lc) > 0) == (float(q.lc) > 0) else -1
    return bound, sign


def _partial_sum(u: RatFunc, n0: int, count: int, alternating: bool) -> tuple[float, float, float]:
    """Float partial sum over n0 .. n0+count-1 in fixed chunks (bit-stable)."""
    num = np.array([float(c) for c in u.num.coeffs], dtype=float)
    den = np.array([float(c) for c in u.den.coeffs], dtype=float)
    totals, abs_total, last = [], 0.0, 0.0
    start = n0
    remaining = count
    flip = False
    while remaining > 0:
        m = min(CHUNK, remaining)
        s, s_abs, last = kernels.rational_partial_sum(num, den, start, m, alternating)
        totals.append(-s if flip else s)
        if flip:
            last = -last
        abs_total += s_abs
        if alternating and m % 2 == 1:
            flip = not flip
        start += m
        remaining -= m
    return math.fsum(totals), abs_total, last


def _rounding_slack(u: RatFunc, total: float, total_abs: float) -> float:
    per_term = 4 * (u.num.degree + u.den.degree + 4) * EPS
    return per_term * total_abs + 4 * EPS * abs(total) + 1e-300


def _monotone_from(u: RatFunc) -> float:
    """Beyond this point |u| is monotone decreasing (when u -> 0)."""
    p, q = u.num, u.den
    w = p.derivative() * q - p * q.derivative()
    return max(cauchy_bound(p), cauchy_bound(q), cauchy_bound(w))


def brute_force(spec: SeriesSpec, n_terms: int) -> tuple[float, float]:
    """Certified float bracket [low, high] for the series value."""
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    u = spec.term
    check_no_poles(u.den, spec.n0)
    alternating = spec.sign_pattern == ALTERNATING
    mu = rate_R(u)
    if alternating:
        if mu is not INF and mu < 1:
            raise DivergentTail(f"rate {mu} < 1: terms do not tend to zero")
    elif mu is not INF and mu < 2:
        raise DivergentTail(f"rate {mu} < 2: the positive tail diverges")
    s, s_abs, _ = _partial_sum(u, spec.n0, n_terms, alternating)
    slack = _rounding_slack(u, s, s_abs)
    m = spec.n0 + n_terms  # first index not summed
    if mu is INF:
        return s - slack, s + slack
    if alternating:
        if m <= _monotone_from(u):
            return -INF, INF
        nxt = float(u(Fraction(m) if u.is_exact else float(m)))
        nxt = -nxt if n_terms % 2 else nxt
        lo, hi = sorted((s, s + nxt))
        return lo - slack, hi + slack
    bound, sign = tail_bound(u, m)
    if sign > 0:
        return s - slack, s + bound + slack
    if sign < 0:
        return s - bound - slack, s + slack
    return s - bound - slack, s + bound + slack


def verify(spec: SeriesSpec, claimed, tol: float = 1e-8, n_terms: int | None = None) -> VerifyReport:
    """Compare a claimed value with the brute-force bracket.

    With ``n_terms`` None the term count starts at ``FIRST_TERMS`` and grows
    fourfold until the bracket is narrow enough for a Pass/Fail decision or
    ``max_terms()`` is reached.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    c = float(claimed)
    count = FIRST_TERMS if n_terms is None else n_terms
    while True:
        low, high = brute_force(spec, count)
        if c < low - tol or c > high + tol:
            verdict = FAIL
        elif high - low > 10 * tol:
            verdict = INCONCLUSIVE
        else:
            verdict = PASS
        if verdict != INCONCLUSIVE or n_terms is not None or 4 * count > max_terms():
            return VerifyReport(c, low, high, count, verdict)
        count *= 4


def telescope_sum(y: RatFunc, n0: int):
    """sum_{n >= n0} (y(n) - y(n+1)) = y(n0) for y vanishing at infinity."""
    if rate_R(y) < 1:
        raise NonVanishingAtInfinity("the solution does not vanish at infinity")
    return y(Fraction(n0) if y.is_exact else float(n0))


@dataclass(frozen=True)
class AcceleratedSum:
    value: float
    low: float
    high: float
    n_terms: int


def accelerated_sum(spec: SeriesSpec, approx: RatFunc, error: RatFunc, n_terms: int = 64) -> AcceleratedSum:
    """Head sum plus an approximate solution of y(x) - y(x+1) = u(x) at the cut.

    ``approx`` satisfies approx(x) - approx(x+1) = u(x) + error(x); the
    neglected sum of ``error`` over the tail is bounded like a positive tail.
    """
    if spec.sign_pattern != POSITIVE:
        raise ValueError("accelerated sums need the all-positive sign pattern")
    if rate_R(approx) < 1:
        raise NonVanishingAtInfinity("the approximate solution does not vanish at infinity")
    u = spec.term
    check_no_poles(u.den, spec.n0)
    check_no_poles(approx.den, spec.n0 + n_terms)
    s, s_abs, _ = _partial_sum(u, spec.n0, n_terms, False)
    m = spec.n0 + n_terms
    tail = float(approx(Fraction(m)))
    bound, _ = tail_bound(error, m) if not error.is_zero() else (0.0, 0)
    value = s + tail
    slack = _rounding_slack(u, s, s_abs) + 8 * EPS * abs(tail)
    return AcceleratedSum(value, value - bound - slack, value + bound + slack, n_terms)
