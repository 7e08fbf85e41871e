from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mcsum.algebra import INF, Poly, RatFunc, rate_R
from mcsum.cfrac import to_ratfunc
from mcsum.errors import InvalidEquation, NoImprovement
from mcsum.multicorrection import (
    CorrectionChain,
    DiffEq,
    Level,
    SolveConfig,
    candidate,
    detect_mc_point,
    error_function,
    guess_term_rule,
    initial_correction,
    next_correction,
    solve,
)

F = Fraction
ONE = RatFunc(1)


def quartic_closed_form() -> RatFunc:
    q = Poly([1, -2, 2])
    return RatFunc(Poly([-1, 2]), Poly([2]) * q * q)


def sixth_power_closed_form() -> RatFunc:
    q = Poly([1, -2, 2])
    num = Poly([-1, 2]) * Poly([-1, -2, 2]) * Poly([1, -6, 6])
    return RatFunc(num, Poly([2]) * q**6)


def all_second_differences_vanish(outcome) -> bool:
    return all(p.second_difference == 0 for p in outcome.probes)


# -- error function ----------------------------------------------------------------------


def test_error_of_quartic_solution_is_zero(quartic_v):
    assert error_function(DiffEq(ONE, quartic_v), quartic_closed_form()).is_zero()


def test_error_of_zero_candidate():
    V = RatFunc(1, Poly([0, 0, 1]))
    assert error_function(DiffEq(ONE, V), RatFunc(0)) == -V


def test_initial_error_rate_mathieu(mathieu_v):
    mc0 = RatFunc(1, Poly([F(3, 2), -1, 1]))
    assert rate_R(error_function(DiffEq(ONE, mathieu_v), mc0)) == 7


# -- initial correction ----------------------------------------------------------------


def test_initial_correction_quartic(quartic_v):
    init = initial_correction(DiffEq(ONE, quartic_v))
    assert init.nu == 3 and init.c0 == F(1, 4)
    assert init.phi0 == Poly([F(-3, 8), F(5, 4), F(-3, 2), 1])
    assert init.E0 == error_function(DiffEq(ONE, quartic_v), candidate(init))


def test_initial_correction_mathieu(mathieu_v):
    init = initial_correction(DiffEq(ONE, mathieu_v))
    assert init.c0 == 1 and init.phi0 == Poly([F(3, 2), -1, 1])
    assert init.rate0 == 7


def test_initial_correction_cubic_toy():
    init = initial_correction(DiffEq(ONE, RatFunc(2, Poly([0, 0, 0, 1]))))
    assert (init.nu, init.c0) == (2, 1)
    assert list(init.phi0.coeffs[1:]) == [-1, 1]
    assert init.phi0.coeffs[0] == F(1, 2)


def test_harmonic_term_has_no_improvement():
    with pytest.raises(NoImprovement):
        initial_correction(DiffEq(ONE, RatFunc(1, Poly([0, 1]))))


def test_polynomial_form_for_negative_nu():
    out = solve(DiffEq(RatFunc(2), RatFunc(Poly([0, 1]))))
    assert out.initial.polynomial_form and out.initial.nu == -1
    assert out.closed_form == RatFunc(Poly([2, -1]))


def test_equation_validation():
    with pytest.raises(InvalidEquation):
        DiffEq(ONE, RatFunc(0))
    with pytest.raises(InvalidEquation):
        DiffEq(RatFunc(0), ONE)
    with pytest.raises(InvalidEquation):
        DiffEq(ONE, RatFunc(Poly([0.5])))


# -- corrections --------------------------------------------------------------------------


def test_first_correction_quartic(quartic_v):
    deq = DiffEq(ONE, quartic_v)
    init = initial_correction(deq)
    chain = next_correction(deq, init, CorrectionChain())
    assert chain.levels == (Level(F(1, 16), (F(-1, 2),)),)
    assert chain.rates[-1] is INF
    assert error_function(deq, candidate(init, chain)).is_zero()


def test_first_type_two_level_mathieu(mathieu_v):
    deq = DiffEq(ONE, mathieu_v)
    init = initial_correction(deq)
    chain = next_correction(deq, init, CorrectionChain())
    assert chain.kind == "TypeII"
    assert chain.levels[0].kappa == F(-5, 12)
    assert chain.levels[0].lambdas[0] == -1
    assert chain.levels[0].lambdas[1] - F(1, 4) == F(9, 4)


def test_mc_point_detection():
    same = CorrectionChain(1, (Level(F(1), (F(-1, 2),)), Level(F(2), (F(-1, 2),))), (3, 5))
    assert detect_mc_point(same) == F(-1, 2)
    split = CorrectionChain(1, (Level(F(1), (F(-1, 2),)), Level(F(2), (F(1, 3),))), (3, 5))
    assert detect_mc_point(split) is None
    quad = CorrectionChain(2, (Level(F(1), (F(-1), F(2))), Level(F(3), (F(-1), F(5)))), (3, 7))
    assert detect_mc_point(quad) == F(-1, 2)


# -- full solver runs -----------------------------------------------------------------


def test_solve_quartic(quartic_v):
    out = solve(DiffEq(ONE, quartic_v))
    assert out.kind == "closed_form"
    assert out.closed_form == quartic_closed_form()
    assert to_ratfunc(out.cf) == out.closed_form
    assert out.rates == [8, INF]
    assert all_second_differences_vanish(out)


def test_solve_sixth_power(sixth_power_v):
    out = solve(DiffEq(ONE, sixth_power_v))
    assert out.kind == "closed_form"
    assert out.chain.kappas == [F(41041, 20736), F(-1024, 1353), F(243, 41041), F(-451, 4368), F(1, 48)]
    assert all(lv.lambdas == (F(-1, 2),) for lv in out.chain.levels)
    assert out.chain.mc_point == F(-1, 2)
    assert out.closed_form == sixth_power_closed_form()
    assert all_second_differences_vanish(out)


def test_solve_mathieu_truncated(mathieu_v):
    out = solve(DiffEq(ONE, mathieu_v), SolveConfig(max_levels=7))
    assert out.kind == "truncated" and out.stop_reason == "max_levels"
    assert len(out.chain.levels) == 7 and out.chain.kind == "TypeII"
    assert out.chain.mc_point == F(-1, 2)
    for n, lv in enumerate(out.chain.levels, start=1):
        assert lv.kappa == F(-(n**4) * (n * n + 4), 4 * (2 * n - 1) * (2 * n + 1))
        assert lv.lambdas == (F(-1), F(1, 4) + F(2 * n * n + 2 * n + 5, 4))
    rates = out.rates
    assert rates[0] == 7
    assert all(rates[k] >= 7 + 4 * k for k in range(len(rates)))
    assert all_second_differences_vanish(out)


def test_rates_strictly_increase_on_type_one_chain():
    out = solve(DiffEq(ONE, RatFunc(1, Poly([0, 0, 1]))), SolveConfig(max_levels=6))
    rates = out.rates
    assert all(a < b for a, b in zip(rates, rates[1:]))
    assert all(rates[k] >= rates[0] + 2 * k for k in range(len(rates)))


def test_zero_levels_returns_initial_only(mathieu_v):
    out = solve(DiffEq(ONE, mathieu_v), SolveConfig(max_levels=0))
    assert out.kind == "truncated" and out.chain.levels == ()
    with pytest.raises(ValueError):
        solve(DiffEq(ONE, mathieu_v), SolveConfig(max_levels=-1))


# -- linearity of closed forms ----------------------------------------------------------


@given(
    st.fractions(min_value=-5, max_value=5, max_denominator=9),
    st.fractions(min_value=-5, max_value=5, max_denominator=9),
)
def test_linear_combination_of_closed_forms(c1, c2):
    f1 = RatFunc(Poly([-1, 0, 0, 0, 12]), Poly([1, 0, 0, 0, 4]) ** 2)
    f2 = RatFunc(6, Poly([8, 6, 1]))  # 6/((x+2)(x+4))
    y1 = solve(DiffEq(ONE, f1)).closed_form
    y2 = solve(DiffEq(ONE, f2)).closed_form
    assert y1 is not None and y2 is not None
    rhs = f1 * c1 + f2 * c2
    if rhs.is_zero():
        return
    assert error_function(DiffEq(ONE, rhs), y1 * c1 + y2 * c2).is_zero()


# -- term-rule fitting ----------------------------------------------------------------


def test_fit_constant():
    assert guess_term_rule([3, 3, 3, 3], 0, 0) == (RatFunc(3), 3)


def test_fit_rejects_wrong_holdout():
    assert guess_term_rule([1, 2, 3, 5], 1, 0) is None


def test_fit_needs_a_holdout():
    with pytest.raises(ValueError):
        guess_term_rule([1, 2], 1, 0)


def test_fit_mathieu_rules(mathieu_v):
    out = solve(DiffEq(ONE, mathieu_v), SolveConfig(max_levels=12))
    kappa = guess_term_rule(out.chain.kappas, 6, 2)
    assert kappa is not None
    expected = RatFunc(Poly([0, 0, 0, 0, -4, 0, -1]), Poly([-4, 0, 16]))
    assert kappa[0] == expected
    assert kappa[1] >= 3
    d = guess_term_rule(out.chain.simplified_d, 2, 0)
    assert d == (RatFunc(Poly([F(5, 4), F(1, 2), F(1, 2)])), len(out.chain.levels) - 3)
    assert d[1] >= 3


@given(
    st.lists(st.fractions(min_value=-6, max_value=6, max_denominator=5), min_size=2, max_size=3),
    st.lists(st.fractions(min_value=1, max_value=6, max_denominator=5), min_size=1, max_size=2),
)
def test_fit_recovers_random_rule(num, den):
    N, D = Poly(num), Poly(den + [1])
    rule = RatFunc(N, D)
    values = [rule(F(n)) for n in range(1, 12) if D(F(n)) != 0]
    if len(values) < 11:
        return
    got = guess_term_rule(values, N.degree if not N.is_zero() else 0, D.degree)
    assert got is not None and got[0] == rule
