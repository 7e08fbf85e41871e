from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from mcsum.algebra import INF, Poly, RatFunc, ratfunc_normalize, rate_R, series_at_infinity, shift
from mcsum.errors import ZeroDenominator

X = sympy.Symbol("x")

small = st.fractions(min_value=-5, max_value=5, max_denominator=6)
polys = st.lists(small, min_size=1, max_size=5).map(Poly)
nonzero_polys = polys.filter(lambda p: not p.is_zero())


def to_sympy(f) -> sympy.Expr:
    if isinstance(f, Poly):
        return sum(sympy.Rational(c.numerator, c.denominator) * X**i for i, c in enumerate(f.coeffs))
    return to_sympy(f.num) / to_sympy(f.den)


def same(f: RatFunc, expr) -> bool:
    return sympy.cancel(to_sympy(f) - expr) == 0


# -- normalization ---------------------------------------------------------------


def test_normalize_cancels_constant_factor():
    f = ratfunc_normalize(Poly([2, 2]), Poly([4, 4]))
    assert f == RatFunc(Fraction(1, 2))
    assert f.den.degree == 0


def test_normalize_cancels_linear_factor():
    f = ratfunc_normalize(Poly([-1, 0, 1]), Poly([-1, 1]))
    assert f.num == Poly([1, 1]) and f.den == Poly([1])


def test_normalize_keeps_reduced_quartic_term(quartic_v):
    # already reduced: only a constant rescaling (monic denominator) is allowed
    assert quartic_v.num.degree == 4 and quartic_v.den.degree == 8
    assert quartic_v(Fraction(1)) == Fraction(11, 25)
    g = sympy.gcd(to_sympy(quartic_v.num), to_sympy(quartic_v.den))
    assert g == 1
    assert quartic_v.den.lc > 0


def test_normalize_rejects_zero_denominator():
    with pytest.raises(ZeroDenominator):
        ratfunc_normalize(Poly([1]), Poly([]))


def test_normalize_makes_denominator_lead_positive():
    f = RatFunc(Poly([1]), Poly([0, -2]))
    assert f.den.lc > 0
    assert f(Fraction(1)) == Fraction(-1, 2)


@given(nonzero_polys, nonzero_polys, nonzero_polys)
def test_normalized_form_matches_sympy_cancel(p, q, r):
    f = RatFunc(p * r, q * r)
    num, den = sympy.fraction(sympy.cancel(to_sympy(p * r) / to_sympy(q * r)))
    assert sympy.degree(num, X) == max(f.num.degree, 0) or f.num.is_zero()
    assert sympy.degree(den, X) == f.den.degree
    assert same(f, to_sympy(p) / to_sympy(q))


# -- shift -------------------------------------------------------------------------


def test_shift_square():
    assert shift(RatFunc(Poly([0, 0, 1])), 1) == RatFunc(Poly([1, 2, 1]))


def test_shift_reciprocal():
    assert shift(RatFunc(1, Poly([0, 1])), 1) == RatFunc(1, Poly([1, 1]))


def test_shift_rereduces():
    f = RatFunc(1, Poly([0, -1, 1]))
    assert shift(f, 1) == RatFunc(1, Poly([0, 1, 1]))


@given(nonzero_polys, nonzero_polys, small)
def test_shift_round_trip(p, q, c):
    f = RatFunc(p, q)
    assert shift(shift(f, c), -c) == f


@given(nonzero_polys, nonzero_polys, small)
def test_shift_matches_sympy_substitution(p, q, c):
    f = RatFunc(p, q)
    c_s = sympy.Rational(c.numerator, c.denominator)
    assert same(shift(f, c), (to_sympy(p) / to_sympy(q)).subs(X, X + c_s))


# -- series at infinity ------------------------------------------------------------


def laurent_oracle(f: RatFunc, L: int) -> dict[int, Fraction]:
    """Coefficients of x^-j, j <= L, by sympy's expansion at infinity."""
    t = sympy.Symbol("t")
    expr = sympy.together(to_sympy(f).subs(X, 1 / t))
    ser = sympy.expand(sympy.series(expr, t, 0, L + 1).removeO() * t**10)
    out = {}
    for (power,), c in sympy.Poly(ser, t).terms():
        if c != 0 and power - 10 <= L:
            out[power - 10] = Fraction(int(sympy.numer(c)), int(sympy.denom(c)))
    return out


def test_series_mathieu_term():
    s = series_at_infinity(RatFunc(Poly([0, 2]), Poly([1, 0, 1]) ** 2), 7)
    assert s.terms() == [(3, Fraction(2)), (5, Fraction(-4)), (7, Fraction(6))]


def test_series_reciprocal():
    assert series_at_infinity(RatFunc(1, Poly([0, 1])), 3).terms() == [(1, Fraction(1))]


def test_series_quartic_leading(quartic_v):
    assert series_at_infinity(quartic_v, 4).terms() == [(4, Fraction(3, 4))]


def test_series_with_polynomial_part():
    f = RatFunc(Poly([1, 0, 0, 1]), Poly([0, 1]))  # x^2 + 1/x
    assert series_at_infinity(f, 2).terms() == [(-2, Fraction(1)), (1, Fraction(1))]


@given(nonzero_polys, nonzero_polys, st.integers(0, 6))
def test_series_recomposition_has_higher_rate(p, q, extra):
    f = RatFunc(p, q)
    L = max(f.den.degree - f.num.degree, 0) + extra
    s = series_at_infinity(f, L)
    rest = f - s.to_ratfunc()
    assert rate_R(rest) > L


@settings(max_examples=25)
@given(nonzero_polys, nonzero_polys)
def test_series_matches_sympy(p, q):
    f = RatFunc(p, q)
    L = max(f.den.degree - f.num.degree, 0) + 3
    assert dict(series_at_infinity(f, L).terms()) == laurent_oracle(f, L)


# -- rate functional ----------------------------------------------------------------


def test_rate_quartic(quartic_v):
    assert rate_R(quartic_v) == 4


def test_rate_mathieu_term(mathieu_v):
    assert rate_R(mathieu_v) == 3


def test_rate_zero_is_infinite():
    assert rate_R(RatFunc(0)) is INF


@given(nonzero_polys, nonzero_polys, nonzero_polys, nonzero_polys)
def test_rate_is_additive(p, q, r, s):
    f, g = RatFunc(p, q), RatFunc(r, s)
    assert rate_R(f * g) == rate_R(f) + rate_R(g)


@given(nonzero_polys, nonzero_polys)
def test_degree_of_product(p, q):
    assert (p * q).degree == p.degree + q.degree


@given(nonzero_polys, nonzero_polys)
def test_division_with_remainder(p, q):
    quo, rem = p.divmod(q)
    assert quo * q + rem == p
    assert rem.is_zero() or rem.degree < q.degree


def test_poly_zero_has_no_coefficients():
    assert Poly([0, 0]).coeffs == [] or len(Poly([0, 0]).coeffs) == 0


@given(nonzero_polys, nonzero_polys, small)
def test_evaluation_consistent(p, q, x):
    f = RatFunc(p, q)
    assume(q(x) != 0)
    assert f(x) == p(x) / q(x)
