"""Command-line front end: ``mcsum solve | sum | eval | verify``.

Polynomials are comma-separated coefficients from low to high degree, each
an integer or ``int/int`` (decimals are accepted where floats make sense).
Reports are printed as ``key: value`` lines or, with ``--json``, as a JSON
document with ``"schema": 1``.  Exit codes: 0 success, 2 invalid input or
domain error, 3 the solver or an evaluation could not finish.
"""
from __future__ import annotations

import argparse
import json
import math
import re
import sys
import time
from fractions import Fraction

from . import formulas, summation
from .algebra import INF, Poly, RatFunc, format_ratfunc, rate_R
from .errors import (
    DivergentTail,
    DomainError,
    InvalidEquation,
    InvalidParams,
    McsumError,
    NonVanishingAtInfinity,
    NotTerminating,
    PoleInRange,
)
from .multicorrection import DiffEq, SolveConfig, candidate, error_function, solve

SCHEMA = 1
EXIT_OK, EXIT_INVALID, EXIT_STOPPED = 0, 2, 3
INVALID_ERRORS = (
    InvalidParams,
    InvalidEquation,
    PoleInRange,
    DomainError,
    NotTerminating,
    DivergentTail,
    NonVanishingAtInfinity,
)


class UsageError(Exception):
    pass


# -- parsing -------------------------------------------------------------------


def parse_number(text: str):
    """``int`` or ``int/int`` -> Fraction; anything else float() accepts -> float."""
    text = text.strip()
    try:
        return Fraction(int(text))
    except ValueError:
        pass
    if "/" in text:
        n, _, d = text.partition("/")
        try:
            num, den = int(n), int(d)
        except ValueError as exc:
            raise UsageError(f"bad rational {text!r}") from exc
        if den == 0:
            raise UsageError(f"zero denominator in {text!r}")
        return Fraction(num, den)
    try:
        value = float(text)
    except ValueError as exc:
        raise UsageError(f"bad number {text!r}") from exc
    if not math.isfinite(value):
        raise UsageError(f"non-finite number {text!r}")
    return value


def parse_rational(text: str) -> Fraction:
    v = parse_number(text)
    if not isinstance(v, Fraction):
        raise UsageError(f"{text!r} must be an integer or int/int")
    return v


def parse_poly(text: str, *, exact: bool = True) -> Poly:
    parts = [p for p in text.split(",")]
    if not parts or any(not p.strip() for p in parts):
        raise UsageError(f"bad coefficient list {text!r}")
    coeffs = [parse_rational(p) if exact else parse_number(p) for p in parts]
    return Poly(coeffs)


def _ratfunc(num: str, den: str, *, exact: bool = True) -> RatFunc:
    n = parse_poly(num, exact=exact)
    d = parse_poly(den, exact=exact)
    if d.is_zero():
        raise UsageError("denominator polynomial is zero")
    return RatFunc(n, d)


# -- serialization -----------------------------------------------------------------


def rat(v) -> dict:
    v = Fraction(v)
    return {"num": str(v.numerator), "den": str(v.denominator)}


def num_json(v):
    if isinstance(v, Fraction):
        return rat(v)
    return float(v)


def poly_json(p: Poly) -> list:
    return [num_json(c) for c in p.coeffs]


def ratfunc_json(f: RatFunc) -> dict:
    return {"num": poly_json(f.num), "den": poly_json(f.den), "display": format_ratfunc(f)}


def rate_json(r):
    return "inf" if r is INF else int(r)


def _human(report: dict, prefix: str = "") -> list[str]:
    lines = []
    for key, value in report.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict) and set(value) == {"num", "den"} and isinstance(value["num"], str):
            lines.append(f"{name}: {_rat_text(value)}")
        elif isinstance(value, dict):
            lines.extend(_human(value, name + "."))
        elif isinstance(value, list):
            lines.append(f"{name}: [{', '.join(_item_text(v) for v in value)}]")
        else:
            lines.append(f"{name}: {_item_text(value)}")
    return lines


def _rat_text(v: dict) -> str:
    return v["num"] if v["den"] == "1" else f"{v['num']}/{v['den']}"


def _item_text(v) -> str:
    if isinstance(v, dict):
        if set(v) == {"num", "den"} and isinstance(v["num"], str):
            return _rat_text(v)
        return "{" + ", ".join(f"{k}: {_item_text(x)}" for k, x in v.items()) + "}"
    if isinstance(v, list):
        return "[" + ", ".join(_item_text(x) for x in v) + "]"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def emit(report: dict, as_json: bool, out=None) -> None:
    out = out or sys.stdout
    if as_json:
        out.write(json.dumps(report, indent=2) + "\n")
    else:
        out.write("\n".join(_human(report)) + "\n")


def _report(command: str, status: str) -> dict:
    return {"schema": SCHEMA, "command": command, "status": status}


# -- commands ----------------------------------------------------------------------


def _deq_from_args(args) -> DiffEq:
    V = _ratfunc(args.v_num, args.v_den)
    U = _ratfunc(args.u_num, args.u_den)
    return DiffEq(U, V)


def _config(args) -> SolveConfig:
    fit = None
    if args.fit:
        fit = []
        for item in args.fit:
            a, _, b = item.partition(",")
            try:
                fit.append((int(a), int(b)))
            except ValueError as exc:
                raise UsageError(f"--fit expects NUM_DEG,DEN_DEG, got {item!r}") from exc
    if args.max_levels < 0:
        raise UsageError("--max-levels must be >= 0")
    return SolveConfig(max_levels=args.max_levels, nu_search_max=args.nu_max, fit_degrees=fit)


def _outcome_json(out) -> dict:
    init, chain = out.initial, out.chain
    data = {
        "initial": {
            "nu": init.nu,
            "c0": rat(init.c0),
            "phi0": poly_json(init.phi0),
            "polynomial_form": init.polynomial_form,
        },
    }
    if chain.levels:
        data["chain"] = {
            "kind": chain.kind,
            "levels": [{"kappa": rat(lv.kappa), "lambdas": [rat(x) for x in lv.lambdas]} for lv in chain.levels],
        }
        data["mc_point"] = rat(chain.mc_point) if chain.mc_point is not None else None
        d = chain.simplified_d
        if d is not None:
            data["simplified_d"] = [rat(v) for v in d]
    data["rates"] = [rate_json(r) for r in out.rates]
    return data


def cmd_solve(args) -> tuple[dict, int]:
    deq = _deq_from_args(args)
    t = time.perf_counter()
    out = solve(deq, _config(args))
    elapsed = time.perf_counter() - t
    rep = _report("solve", out.kind)
    if out.kind == "closed_form":
        rep["closed_form"] = ratfunc_json(out.closed_form)
        if out.chain.levels:
            rep["finite_cf"] = _outcome_json(out)
        else:
            rep["rates"] = [rate_json(r) for r in out.rates]
    else:
        rep.update(_outcome_json(out))
        rep["stop_reason"] = out.stop_reason
        rep["rules"] = {
            name: {"rule": ratfunc_json(rule), "held_out": held} for name, (rule, held) in out.rules.items()
        }
    rep["probes"] = len(out.probes)
    if args.timings:
        rep["timings"] = {"solve_seconds": elapsed}
    return rep, EXIT_OK


def _series_from_args(args, *, exact: bool = True) -> summation.SeriesSpec:
    if args.num is None or args.den is None:
        raise UsageError("--num and --den are required")
    u = _ratfunc(args.num, args.den, exact=exact)
    return summation.SeriesSpec(u, args.n0, summation.ALTERNATING if args.alternating else summation.POSITIVE)


def _special(args) -> tuple[float, int]:
    kind = args.formula
    if kind == "mathieu":
        return formulas.mathieu_detail(_need(args, "r"), args.tol)
    if kind == "alt-mathieu":
        return formulas.alt_mathieu_detail(_need(args, "r"), args.tol)
    if kind == "szablowski-m2":
        m, j = _need(args, "m"), _need(args, "j")
        if not (isinstance(m, Fraction) and m.denominator == 1 and isinstance(j, Fraction) and j.denominator == 1):
            raise InvalidParams("--m and --j must be integers")
        return formulas.szablowski_M2_detail(int(m), int(j), args.tol)
    raise UsageError(f"unknown formula {kind!r}")


def _special_series(args) -> summation.SeriesSpec:
    """The defining rational series of a special formula (for oracle brackets)."""
    kind = args.formula
    if kind in ("mathieu", "alt-mathieu"):
        r = _need(args, "r")
        r2 = r * r
        u = RatFunc(Poly([0, 2]), Poly([r2, 0, 1]) ** 2)
        pattern = summation.POSITIVE if kind == "mathieu" else summation.ALTERNATING
        return summation.SeriesSpec(u, 1, pattern)
    m, j = int(_need(args, "m")), int(_need(args, "j"))
    return summation.SeriesSpec(RatFunc(Poly([1]), Poly([j, m]) ** 2), 0, summation.ALTERNATING)


def _need(args, name):
    v = getattr(args, name, None)
    if v is None:
        raise UsageError(f"--{name} is required for --formula {args.formula}")
    return parse_number(v)


DEFAULT_TERMS = 1 << 20
SPECIAL = ("mathieu", "alt-mathieu", "szablowski-m2")


def cmd_sum(args) -> tuple[dict, int]:
    rep = _report("sum", "value")
    if args.formula:
        if args.formula not in SPECIAL:
            raise UsageError(f"sum --formula supports {', '.join(SPECIAL)}")
        value, depth = _special(args)
        low, high = summation.brute_force(_special_series(args), args.n_terms or DEFAULT_TERMS)
        rep.update({"value": value, "depth": depth, "bracket": [low, high]})
        return rep, EXIT_OK
    spec = _series_from_args(args)
    if spec.sign_pattern == summation.POSITIVE:
        summation.check_no_poles(spec.term.den, spec.n0)
        try:
            out = solve(DiffEq(RatFunc(1), spec.term), SolveConfig(max_levels=args.max_levels))
        except McsumError:
            out = None
        if out is not None and out.kind == "closed_form" and rate_R(out.closed_form) >= 1:
            y = out.closed_form
            summation.check_no_poles(y.den, spec.n0)
            exact = summation.telescope_sum(y, spec.n0)
            report = summation.verify(spec, exact, args.tol, args.n_terms)
            rep.update({"exact": rat(exact), "value": float(exact), "verdict": report.verdict})
            rep["bracket"] = [report.oracle_low, report.oracle_high]
            rep["closed_form"] = ratfunc_json(y)
            return rep, EXIT_OK
        if out is not None and rate_R(candidate(out.initial, out.chain)) >= 1:
            y = candidate(out.initial, out.chain)
            err = error_function(DiffEq(RatFunc(1), spec.term), y)
            acc = summation.accelerated_sum(spec, y, err)
            rep.update({"value": acc.value, "bracket": [acc.low, acc.high], "method": "continued_fraction"})
            rep["levels"] = len(out.chain.levels)
            return rep, EXIT_OK
    low, high = summation.brute_force(spec, args.n_terms or DEFAULT_TERMS)
    rep.update({"value": (low + high) / 2, "bracket": [low, high], "method": "brute_force"})
    return rep, EXIT_OK


FAMILY_FLAGS = {"F": ("a", "b"), "G1": ("a", "b"), "G2": ("u", "v"), "H1": ("a", "b1", "b2"), "H2": ("p", "q", "r", "s")}


def cmd_eval(args) -> tuple[dict, int]:
    rep = _report("eval", "value")
    if args.formula in SPECIAL:
        value, depth = _special(args)
        rep.update({"formula": args.formula, "value": value, "depth": depth})
        return rep, EXIT_OK
    if args.formula not in FAMILY_FLAGS:
        raise UsageError(f"unknown formula {args.formula!r}")
    params = {k: _need(args, k) for k in FAMILY_FLAGS[args.formula]}
    fp = formulas.FormulaParams(args.formula, tuple(params[k] for k in FAMILY_FLAGS[args.formula]))
    x = _need(args, "x")
    res = formulas.evaluate(fp, x, tol=args.tol, max_depth=args.max_depth)
    rep.update({"formula": args.formula, "x": float(x), "value": res.value, "depth": res.depth, "cf_status": res.status})
    om = formulas.mc_point(fp)
    rep["mc_point"] = num_json(om)
    return rep, EXIT_OK


def cmd_verify(args) -> tuple[dict, int]:
    rep = _report("verify", "value")
    claimed = parse_number(args.claimed)
    spec = _special_series(args) if args.formula else _series_from_args(args, exact=False)
    if args.formula and args.formula not in SPECIAL:
        raise UsageError(f"verify --formula supports {', '.join(SPECIAL)}")
    report = summation.verify(spec, claimed, args.tol, args.n_terms)
    rep.update(
        {
            "claimed": num_json(claimed),
            "bracket": [report.oracle_low, report.oracle_high],
            "n_terms": report.n_terms,
            "verdict": report.verdict,
        }
    )
    return rep, EXIT_OK


# -- argument parser -----------------------------------------------------------------


def _series_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--num", help="term numerator coefficients, low to high")
    p.add_argument("--den", help="term denominator coefficients, low to high")
    p.add_argument("--n0", type=int, default=1, help="first index (default 1)")
    p.add_argument("--alternating", action="store_true", help="terms carry (-1)^(n-n0)")
    p.add_argument("--n-terms", type=int, default=None, help="brute-force oracle length (default: grow until decisive)")


def _formula_args(p: argparse.ArgumentParser, choices) -> None:
    p.add_argument("--formula", choices=choices)
    for name in ("a", "b", "b1", "b2", "u", "v", "p", "q", "r", "s", "m", "j", "x"):
        p.add_argument(f"--{name}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mcsum", description="Rational series via multiple corrections.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve y(x) - U(x) y(x+1) = V(x)")
    p.add_argument("--v-num", required=True)
    p.add_argument("--v-den", default="1")
    p.add_argument("--u-num", default="1")
    p.add_argument("--u-den", default="1")
    p.add_argument("--max-levels", type=int, default=8)
    p.add_argument("--nu-max", type=int, default=None)
    p.add_argument("--fit", action="append", metavar="NUM_DEG,DEN_DEG")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sum", help="sum a rational series (or a special series)")
    _series_args(p)
    _formula_args(p, SPECIAL)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--max-levels", type=int, default=8)
    p.set_defaults(func=cmd_sum)

    p = sub.add_parser("eval", help="evaluate a catalog continued fraction")
    _formula_args(p, tuple(FAMILY_FLAGS) + SPECIAL)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--max-depth", type=int, default=1 << 22)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verify", help="check a claimed series value against the oracle")
    _series_args(p)
    _formula_args(p, SPECIAL)
    p.add_argument("--claimed", required=True)
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_verify)

    for sp in sub.choices.values():
        sp.add_argument("--json", action="store_true", help="JSON output")
    return parser


def _error_report(command: str, kind: str, message: str) -> dict:
    rep = _report(command, "error")
    rep["error"] = {"type": kind, "message": message}
    return rep


_NEGATIVE_VALUE = re.compile(r"^-[0-9.][0-9./,eE+-]*$")


def _join_negative_values(argv: list[str]) -> list[str]:
    """Turn ``--opt -1,2`` into ``--opt=-1,2`` so argparse accepts it."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok.startswith("--") and "=" not in tok and i + 1 < len(argv) and _NEGATIVE_VALUE.match(argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(_join_negative_values(argv))
    except UsageError as exc:
        command = next((a for a in argv if a in ("solve", "sum", "eval", "verify")), None)
        emit(_error_report(command, "UsageError", str(exc)), "--json" in argv)
        return EXIT_INVALID
    if hasattr(args, "tol") and not args.tol > 0:
        emit(_error_report(args.command, "UsageError", "--tol must be positive"), args.json)
        return EXIT_INVALID
    try:
        rep, code = args.func(args)
    except (UsageError, *INVALID_ERRORS) as exc:
        emit(_error_report(args.command, type(exc).__name__, str(exc)), args.json)
        return EXIT_INVALID
    except McsumError as exc:
        emit(_error_report(args.command, type(exc).__name__, str(exc)), args.json)
        return EXIT_STOPPED
    emit(rep, args.json)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
