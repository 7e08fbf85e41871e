import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcsum.kernels import BACKEND
from mcsum.algebra import Poly, RatFunc, rate_R
from mcsum.errors import DivergentTail, NonVanishingAtInfinity, PoleInRange
from mcsum.multicorrection import DiffEq, SolveConfig, candidate, error_function, solve
from mcsum.summation import (
    ALTERNATING,
    FAIL,
    INCONCLUSIVE,
    PASS,
    SeriesSpec,
    accelerated_sum,
    brute_force,
    tail_bound,
    telescope_sum,
    verify,
)

F = Fraction
ONE = RatFunc(1)
inv_square = RatFunc(1, Poly([0, 0, 1]))


def test_telescope_quartic(quartic_v):
    y = solve(DiffEq(ONE, quartic_v)).closed_form
    assert telescope_sum(y, 1) == F(1, 2)


def test_telescope_classic():
    assert telescope_sum(RatFunc(1, Poly([0, 1])), 1) == 1


def test_telescope_sixth_power(sixth_power_v):
    y = solve(DiffEq(ONE, sixth_power_v)).closed_form
    exact = telescope_sum(y, 1)
    low, high = brute_force(SeriesSpec(sixth_power_v, 1), 100_000)
    assert low <= float(exact) <= high


def test_telescope_rejects_growing_solution():
    with pytest.raises(NonVanishingAtInfinity):
        telescope_sum(RatFunc(Poly([0, 1])), 1)


def test_bracket_zeta_two():
    low, high = brute_force(SeriesSpec(inv_square, 1), 10_000)
    assert low <= math.pi**2 / 6 <= high
    assert high - low < 2e-4


def test_bracket_catalan():
    spec = SeriesSpec(RatFunc(1, Poly([1, 4, 4])), 0, ALTERNATING)
    low, high = brute_force(spec, 1001)
    assert low <= float(mpmath.catalan) <= high


def test_bracket_telescoping_one():
    low, high = brute_force(SeriesSpec(RatFunc(1, Poly([0, 1, 1])), 1), 1000)
    assert low <= 1 <= high


def test_divergent_tails_rejected():
    with pytest.raises(DivergentTail):
        brute_force(SeriesSpec(RatFunc(1, Poly([0, 1])), 1), 10)
    with pytest.raises(DivergentTail):
        brute_force(SeriesSpec(RatFunc(Poly([0, 1]), Poly([1])), 1, ALTERNATING), 10)


def test_poles_rejected():
    with pytest.raises(PoleInRange):
        brute_force(SeriesSpec(RatFunc(1, Poly([-3, -2, 1])), 1), 10)  # (n-3)(n+1)
    with pytest.raises(PoleInRange):
        brute_force(SeriesSpec(RatFunc(1, Poly([-9, 0, 1])), 0), 10)


def test_alternating_bracket_shrinks_only_after_monotone_point():
    spec = SeriesSpec(RatFunc(Poly([-40, 1]), Poly([1, 0, 1])), 1, ALTERNATING)
    low, high = brute_force(spec, 5)
    assert low == -math.inf and high == math.inf
    low, high = brute_force(spec, 10_000)
    assert high - low < 1e-3


@settings(max_examples=20)
@given(st.integers(1, 6), st.integers(1, 200))
def test_brackets_are_nested(a, n):
    spec = SeriesSpec(RatFunc(1, Poly([a, 0, 1])), 1)
    l1, h1 = brute_force(spec, n)
    l2, h2 = brute_force(spec, 4 * n)
    assert l1 <= l2 + 1e-15 and h2 <= h1 + 1e-15


def test_tail_bound_is_rigorous():
    u = RatFunc(Poly([1, 3]), Poly([2, 0, 0, 1]))  # (3n+1)/(n^3+2)
    m = 50
    bound, sign = tail_bound(u, m)
    exact = mpmath.nsum(lambda n: (3 * n + 1) / (n**3 + 2), [m, mpmath.inf])
    assert sign == 1 and float(exact) <= bound


def test_verify_quartic(quartic_v):
    assert verify(SeriesSpec(quartic_v, 1), F(1, 2)).verdict == PASS


def test_verify_quartic_H2():
    spec = SeriesSpec(RatFunc(Poly([0, 2]), Poly([4, 0, 0, 0, 1])), 1)
    assert verify(spec, F(3, 4)).verdict == PASS


def test_verify_wrong_claim():
    assert verify(SeriesSpec(inv_square, 1), 1.7).verdict == FAIL


def test_verify_inconclusive_with_pinned_length():
    rep = verify(SeriesSpec(inv_square, 1), math.pi**2 / 6, tol=1e-12, n_terms=100)
    assert rep.verdict == INCONCLUSIVE and rep.n_terms == 100


def test_verify_grows_term_count_for_slow_series():
    spec = SeriesSpec(RatFunc(1, Poly([3, 4, 1])), 0)  # 1/((n+1)(n+3))
    rep = verify(spec, F(3, 4), tol=1e-8)
    assert rep.n_terms > 1 << 16
    assert rep.verdict == (PASS if BACKEND == "cython" else INCONCLUSIVE)


def test_verify_rejects_bad_tol():
    with pytest.raises(ValueError):
        verify(SeriesSpec(inv_square, 1), 1.0, tol=0)


@pytest.mark.parametrize(
    "term",
    [
        RatFunc(Poly([-1, 0, 0, 0, 12]), Poly([1, 0, 0, 0, 4]) ** 2),
        RatFunc(6, Poly([8, 6, 1])),
        RatFunc(1, Poly([0, 1, 1])),
    ],
)
def test_closed_forms_verify(term):
    out = solve(DiffEq(ONE, term))
    assert out.kind == "closed_form"
    verdict = verify(SeriesSpec(term, 1), telescope_sum(out.closed_form, 1)).verdict
    slow_tail = rate_R(term) == 2 and BACKEND != "cython"  # fallback oracle is capped at 2^22 terms
    assert verdict == (INCONCLUSIVE if slow_tail else PASS)


def test_accelerated_sum_zeta_two():
    out = solve(DiffEq(ONE, inv_square), SolveConfig(max_levels=6))
    y = candidate(out.initial, out.chain)
    acc = accelerated_sum(SeriesSpec(inv_square, 1), y, error_function(DiffEq(ONE, inv_square), y))
    assert acc.low <= math.pi**2 / 6 <= acc.high
    assert acc.high - acc.low < 1e-12
