"""Exact summation of rational series by the multiple-correction method.

The main entry points are ``solve`` (difference-equation solver), the
catalog in ``mcsum.formulas`` and the sum/verify helpers in
``mcsum.summation``.
"""
from .algebra import Poly, RatFunc, SeriesInvX, rate_R, series_at_infinity
from .cfrac import CFrac, CFTerm, approximant, equiv_transform, evaluate_adaptive, to_ratfunc
from .kernels import BACKEND
from .multicorrection import DiffEq, SolveConfig, SolveOutcome, error_function, guess_term_rule, solve

__all__ = [
    "BACKEND",
    "CFTerm",
    "CFrac",
    "DiffEq",
    "Poly",
    "RatFunc",
    "SeriesInvX",
    "SolveConfig",
    "SolveOutcome",
    "approximant",
    "equiv_transform",
    "error_function",
    "evaluate_adaptive",
    "guess_term_rule",
    "rate_R",
    "series_at_infinity",
    "solve",
    "to_ratfunc",
]
