"""Generalized continued fractions b0 + K(a_n / b_n).

A ``CFrac`` holds either an explicit tuple of ``CFTerm`` (a finite fraction;
a missing term counts as a_n = 0) or a ``rule`` ``n -> (a_n, b_n)``.  Term
values may be numbers (``Fraction``/``float``) or ``RatFunc``/``Poly`` in x.

Approximants follow the forward recurrence

    A_n = b_n A_{n-1} + a_n A_{n-2},   B_n = b_n B_{n-1} + a_n B_{n-2}

with A_{-1} = 1, A_0 = b0, B_{-1} = 0, B_0 = 1.  If a_N = 0 the fraction
terminates and its value is A_{N-1}/B_{N-1}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterator, NamedTuple, Sequence

import numpy as np

from . import kernels
from .algebra import Poly, RatFunc
from .errors import InvalidScaling, McsumError, NonFinite


class DivisionByZero(McsumError, ZeroDivisionError):
    """B_n vanished at a numeric evaluation point."""


@dataclass(frozen=True)
class CFTerm:
    a: Any
    b: Any


TermRule = Callable[[int], "CFTerm | tuple"]
VectorRule = Callable[[float, int, int], "tuple[np.ndarray, np.ndarray]"]


@dataclass(frozen=True, eq=False)
class CFrac:
    b0: Any = Fraction(0)
    terms: tuple[CFTerm, ...] | None = None
    rule: TermRule | None = None
    mc_point: Fraction | None = None
    # optional fast path: (x, first, last) -> float arrays of a_n, b_n
    vectorized: VectorRule | None = field(default=None, repr=False)

    def __post_init__(self):
        if (self.terms is None) == (self.rule is None):
            if self.terms is None:
                object.__setattr__(self, "terms", ())
            else:
                raise ValueError("give either explicit terms or a rule, not both")
        if self.terms is not None:
            object.__setattr__(
                self, "terms", tuple(t if isinstance(t, CFTerm) else CFTerm(*t) for t in self.terms)
            )

    @property
    def is_explicit(self) -> bool:
        return self.terms is not None

    def __len__(self) -> int:
        if self.terms is None:
            raise TypeError("rule-generated continued fraction has no length")
        return len(self.terms)

    def term(self, n: int) -> CFTerm:
        """The n-th partial numerator/denominator pair, n >= 1."""
        if n < 1:
            raise ValueError("terms are indexed from 1")
        if self.terms is not None:
            if n > len(self.terms):
                return CFTerm(Fraction(0), Fraction(1))
            return self.terms[n - 1]
        t = self.rule(n)
        return t if isinstance(t, CFTerm) else CFTerm(*t)

    def explicit(self, depth: int) -> "CFrac":
        """Finite fraction made of the first ``depth`` terms."""
        return CFrac(self.b0, tuple(self.term(n) for n in range(1, depth + 1)), mc_point=self.mc_point)


@dataclass(frozen=True)
class Approximant:
    A: Any
    B: Any
    n: int
    terminated: bool = False

    @property
    def value(self):
        if _is_zero(self.B):
            raise DivisionByZero(f"B_{self.n} = 0")
        if isinstance(self.A, RatFunc) or isinstance(self.B, RatFunc):
            return _as_rf(self.A) / _as_rf(self.B)
        return self.A / self.B


def _is_zero(v) -> bool:
    if isinstance(v, (RatFunc, Poly)):
        return v.is_zero() if isinstance(v, RatFunc) else v.is_zero()
    return v == 0


def _as_rf(v) -> RatFunc:
    return v if isinstance(v, RatFunc) else RatFunc(v)


def _at(v, x):
    """Evaluate a term value at x (None keeps symbolic terms symbolic)."""
    if isinstance(v, Poly):
        v = RatFunc(v)
    if x is None:
        return v
    if isinstance(v, RatFunc):
        return v(x)
    if isinstance(x, float) and isinstance(v, Fraction):
        return float(v)
    return v


def approximants(cf: CFrac, n: int, x=None) -> Iterator[Approximant]:
    """Yield the approximants of depth 0..n (stopping early on termination).

    With ``x`` None, ``RatFunc`` terms are combined symbolically.
    """
    if n < 0:
        raise ValueError("depth must be non-negative")
    b0 = _at(cf.b0, x)
    symbolic = x is None and _has_symbolic(cf, n)
    one, zero = (RatFunc.const(1), RatFunc.const(0)) if symbolic else (1, 0)
    if symbolic:
        b0 = _as_rf(b0)
    A_prev, A, B_prev, B = one, b0, zero, one
    yield Approximant(A, B, 0)
    for k in range(1, n + 1):
        t = cf.term(k)
        a, b = _at(t.a, x), _at(t.b, x)
        if _is_zero(a):
            yield Approximant(A, B, k - 1, terminated=True)
            return
        A_prev, A = A, b * A + a * A_prev
        B_prev, B = B, b * B + a * B_prev
        yield Approximant(A, B, k)


def _has_symbolic(cf: CFrac, n: int) -> bool:
    if isinstance(cf.b0, (RatFunc, Poly)):
        return True
    for k in range(1, n + 1):
        t = cf.term(k)
        if isinstance(t.a, (RatFunc, Poly)) or isinstance(t.b, (RatFunc, Poly)):
            return True
        if _is_zero(t.a):
            return False
    return False


def approximant(cf: CFrac, n: int, x=None) -> Approximant:
    """Depth-n approximant (or the terminating one, flagged)."""
    last = None
    for last in approximants(cf, n, x):
        pass
    return last


def to_ratfunc(cf: CFrac) -> RatFunc:
    """Exact rational function of a finite fraction with RatFunc terms."""
    if not cf.is_explicit:
        raise TypeError("to_ratfunc needs an explicit (finite) continued fraction")
    ap = approximant(cf, len(cf.terms))
    value = ap.value
    return value if isinstance(value, RatFunc) else RatFunc.const(value)


def equiv_transform(cf: CFrac, r: Sequence | Callable[[int], Any]) -> CFrac:
    """Equivalent fraction with c_n = r_{n-1} r_n a_n, d_n = r_n b_n, d_0 = b_0."""
    rn = r if callable(r) else (lambda k, seq=tuple(r): seq[k])
    if rn(0) != 1:
        raise InvalidScaling("r_0 must equal 1")

    def scaled(k: int) -> CFTerm:
        rk, rprev = rn(k), rn(k - 1)
        if rk == 0:
            raise InvalidScaling(f"r_{k} = 0")
        t = cf.term(k)
        return CFTerm(rprev * rk * t.a, rk * t.b)

    if cf.is_explicit:
        if not callable(r) and len(r) < len(cf.terms) + 1:
            raise InvalidScaling("need r_0..r_N for an N-term fraction")
        terms = tuple(scaled(k) for k in range(1, len(cf.terms) + 1))
        return CFrac(cf.b0, terms, mc_point=cf.mc_point)
    return CFrac(cf.b0, rule=scaled, mc_point=cf.mc_point)


# -- numeric evaluation ---------------------------------------------------------


class AdaptiveResult(NamedTuple):
    value: float
    depth: int
    status: str  # "converged" | "max_depth" | "terminated"


CONVERGED = "converged"
MAX_DEPTH = "max_depth"
TERMINATED = "terminated"


def numeric_terms(cf: CFrac, x: float, first: int, last: int) -> tuple[np.ndarray, np.ndarray]:
    """Float arrays of a_n, b_n for first <= n <= last."""
    if cf.vectorized is not None:
        a, b = cf.vectorized(x, first, last)
        return np.ascontiguousarray(a, dtype=float), np.ascontiguousarray(b, dtype=float)
    count = last - first + 1
    a = np.empty(count)
    b = np.empty(count)
    for i, k in enumerate(range(first, last + 1)):
        t = cf.term(k)
        a[i] = float(_at(t.a, x))
        b[i] = float(_at(t.b, x))
    return a, b


def evaluate_adaptive(
    cf: CFrac,
    x: float,
    tol: float = 1e-12,
    max_depth: int = 1 << 22,
    first_chunk: int = 32,
) -> AdaptiveResult:
    """Numeric value of ``cf`` at ``x`` to within ``tol`` (heuristic).

    Each depth N is evaluated backwards from the tail, which stays stable at
    depths where the forward recurrence drifts.  Depth doubles until the
    values at N, N-1, N-2 agree and the value at N agrees with the one at
    N/2, all within ``tol * max(1, |value|)``.  The half-depth comparison
    guards against the slow, one-signed convergence the catalog fractions
    show near their boundary points.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    x = float(x)
    b0 = float(_at(cf.b0, x))
    a_all = np.empty(0)
    b_all = np.empty(0)
    depth = min(first_chunk, max_depth)
    checkpoint = None
    while True:
        if depth > len(a_all):
            a_new, b_new = numeric_terms(cf, x, len(a_all) + 1, depth)
            zeros = np.flatnonzero(a_new == 0.0)
            a_all = np.concatenate([a_all, a_new])
            b_all = np.concatenate([b_all, b_new])
            if zeros.size:
                stop = len(a_all) - len(a_new) + int(zeros[0])
                v0 = _tails(a_all[:stop], b_all[:stop], b0, x)[0]
                return AdaptiveResult(v0, stop, TERMINATED)
        v0, v1, v2 = _tails(a_all[:depth], b_all[:depth], b0, x)
        scale = tol * max(1.0, abs(v0))
        if (
            abs(v0 - v1) <= scale
            and (depth < 2 or abs(v1 - v2) <= scale)
            and checkpoint is not None
            and abs(v0 - checkpoint) <= scale
        ):
            return AdaptiveResult(v0, depth, CONVERGED)
        if depth >= max_depth:
            return AdaptiveResult(v0, depth, MAX_DEPTH)
        checkpoint = v0
        depth = min(2 * depth, max_depth)


def _tails(a: np.ndarray, b: np.ndarray, b0: float, x: float) -> tuple[float, float, float]:
    if len(a) == 0:
        return b0, math.nan, math.nan
    t0, t1, t2, status = kernels.cf_tails(np.ascontiguousarray(a), np.ascontiguousarray(b))
    if status:
        raise NonFinite(f"undefined value at depth {len(a)}, x = {x}")
    if math.isinf(t0):
        raise DivisionByZero(f"B_{len(a)} = 0 at x = {x}")
    return b0 + t0, b0 + t1, b0 + t2
