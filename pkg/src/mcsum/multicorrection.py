"""Multiple-correction solver for y(x) - U(x) y(x+1) = V(x).

The solver builds the candidate

    Y(x) = c0 / (Phi0(x) + kappa_1/(D_1(x) + kappa_2/(D_2(x) + ...)))

(or ``c0 * (Phi0 + ...)`` when the initial correction is polynomial), with
monic partial denominators D_j of a fixed degree (1: Type-I, 2: Type-II,
>= 3: Phi(j0) fallback).  Every unknown is fixed by annihilating the lowest
non-vanishing coefficient of the error E = Y - U Y(x+1) - V expanded at
infinity.  That coefficient is affine in the unknown; it is sampled at
u = 0, 1 and verified at u = 2 ("affine probing").
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .algebra import (
    INF,
    ONE,
    X,
    Poly,
    RatFunc,
    SeriesInvX,
    laurent_coeffs,
    rate_R,
)
from .cfrac import CFrac, CFTerm
from .errors import InvalidEquation, NoDependence, NoImprovement, NonAffine, Stopped

PROBE_POINTS = (Fraction(0), Fraction(1), Fraction(2))


@dataclass(frozen=True)
class DiffEq:
    U: RatFunc
    V: RatFunc

    def __post_init__(self):
        U = self.U if isinstance(self.U, RatFunc) else RatFunc(self.U)
        V = self.V if isinstance(self.V, RatFunc) else RatFunc(self.V)
        if U.is_zero():
            raise InvalidEquation("U must be nonzero")
        if V.is_zero():
            raise InvalidEquation("V = 0 is the trivial equation")
        if not (U.is_exact and V.is_exact):
            raise InvalidEquation("the solver needs exact rational coefficients")
        object.__setattr__(self, "U", U)
        object.__setattr__(self, "V", V)

    @property
    def unit_U(self) -> bool:
        return self.U.num == ONE and self.U.den == ONE


@dataclass(frozen=True)
class ProbeRecord:
    unknown: str
    order: int
    values: tuple[Fraction, Fraction, Fraction]
    solution: Fraction

    @property
    def second_difference(self) -> Fraction:
        c0, c1, c2 = self.values
        return c2 - 2 * c1 + c0


@dataclass(frozen=True)
class InitialCorrection:
    c0: Fraction
    phi0: Poly
    nu: int
    E0: RatFunc
    rate0: int | float
    polynomial_form: bool = False


@dataclass(frozen=True)
class Level:
    kappa: Fraction
    lambdas: tuple[Fraction, ...]

    @property
    def degree(self) -> int:
        return len(self.lambdas)

    def denominator(self) -> Poly:
        d = self.degree
        return Poly([self.lambdas[d - 1 - i] for i in range(d)] + [1])


@dataclass(frozen=True)
class CorrectionChain:
    degree: int = 0
    levels: tuple[Level, ...] = ()
    rates: tuple = ()

    @property
    def kind(self) -> str | None:
        if not self.levels:
            return None
        return {1: "TypeI", 2: "TypeII"}.get(self.degree, f"PhiJ({self.degree})")

    @property
    def kappas(self) -> list[Fraction]:
        return [lv.kappa for lv in self.levels]

    @property
    def mc_point(self) -> Fraction | None:
        return detect_mc_point(self)

    @property
    def simplified_d(self) -> list[Fraction] | None:
        """d_n = lambda_{n,2} - b^2/4 for Type-II chains with an MC-point."""
        if self.degree != 2 or self.mc_point is None:
            return None
        b = self.levels[0].lambdas[0]
        return [lv.lambdas[1] - b * b / 4 for lv in self.levels]


@dataclass(frozen=True)
class SolveConfig:
    max_levels: int = 8
    nu_search_max: int | None = None
    fit_degrees: Sequence[tuple[int, int]] | None = None
    probe_window: int = 6
    phi_max: int = 4
    min_holdout: int = 1


@dataclass
class SolveOutcome:
    kind: str  # "closed_form" | "truncated"
    initial: InitialCorrection
    chain: CorrectionChain
    closed_form: RatFunc | None = None
    cf: CFrac | None = None
    rules: dict = field(default_factory=dict)
    probes: list[ProbeRecord] = field(default_factory=list)
    stop_reason: str | None = None

    @property
    def rates(self) -> list:
        return [self.initial.rate0, *self.chain.rates]


# -- error function and series ------------------------------------------------


def error_function(deq: DiffEq, candidate: RatFunc) -> RatFunc:
    """E(x) = y(x) - U(x) y(x+1) - V(x), reduced."""
    if not isinstance(candidate, RatFunc):
        candidate = RatFunc(candidate)
    return candidate - deq.U * candidate.shift(1) - deq.V


def _error_parts(deq: DiffEq, yn: Poly, yd: Poly) -> tuple[Poly, Poly]:
    """Unreduced numerator/denominator of the error of yn/yd."""
    yn1, yd1 = yn.shift(1), yd.shift(1)
    Un, Ud = deq.U.num, deq.U.den
    Vn, Vd = deq.V.num, deq.V.den
    den = yd * yd1 * Ud * Vd
    num = yn * yd1 * Ud * Vd - Un * yn1 * yd * Vd - Vn * yd * Ud * yd1
    return num, den


def _exact_rate(deq: DiffEq, yn: Poly, yd: Poly):
    num, den = _error_parts(deq, yn, yd)
    return INF if num.is_zero() else den.degree - num.degree


def _series(num: Poly, den: Poly, order: int) -> SeriesInvX:
    lead, cs = laurent_coeffs(num, den, order)
    return SeriesInvX(lead, cs, order) if cs else SeriesInvX.zero(order)


def _error_series(deq: DiffEq, yn: Poly, yd: Poly, order: int) -> SeriesInvX:
    y = _series(yn, yd, order)
    v = _series(deq.V.num, deq.V.den, order)
    yn1, yd1 = yn.shift(1), yd.shift(1)
    if deq.unit_U:
        y1 = _series(yn1, yd1, order)
        return y - y1 - v
    u_lead = deq.U.den.degree - deq.U.num.degree
    y_lead = yd.degree - yn.degree if not yn.is_zero() else order
    y1 = _series(yn1, yd1, order + max(0, -u_lead))
    u = _series(deq.U.num, deq.U.den, order + max(0, -y_lead))
    return y - u * y1 - v


# -- affine probing --------------------------------------------------------------


def _probe(
    deq: DiffEq,
    name: str,
    make: Callable[[Fraction], tuple[Poly, Poly]],
    order: int,
    window: int,
    log: list | None,
) -> Fraction:
    """Solve one unknown from the lowest-order coefficient it controls."""
    order = max(order, 4)
    cands = [make(u) for u in PROBE_POINTS]
    for _ in range(3):
        ser = [_error_series(deq, yn, yd, order) for yn, yd in cands]
        low = min(s.valuation for s in ser)
        if low is INF:
            order *= 2
            continue
        top = low + window - 1
        if top > order:
            order = top
            ser = [_error_series(deq, yn, yd, order) for yn, yd in cands]
        for j in range(low, top + 1):
            c = tuple(s.coeff(j) for s in ser)
            d2 = c[2] - 2 * c[1] + c[0]
            if d2 != 0:
                raise NonAffine(name, j, d2)
            if c[1] != c[0]:
                u = -c[0] / (c[1] - c[0])
                if log is not None:
                    log.append(ProbeRecord(name, j, c, u))
                return u
        raise NoDependence(name, low, window)
    # every probe vanishes far beyond the working order: the unknown is immaterial
    if log is not None:
        log.append(ProbeRecord(name, order, (Fraction(0),) * 3, Fraction(0)))
    return Fraction(0)


# -- candidates ------------------------------------------------------------------


def _tail(levels: Iterable[Level]) -> tuple[Poly, Poly]:
    """kappa_1/(D_1 + kappa_2/(D_2 + ...)) as an (unreduced) polynomial pair."""
    tn, td = Poly(), ONE
    for lv in reversed(tuple(levels)):
        tn, td = td * lv.kappa, lv.denominator() * td + tn
    return tn, td


def _candidate(c0, phi0: Poly, polynomial_form: bool, levels=()) -> tuple[Poly, Poly]:
    tn, td = _tail(levels)
    inner_n = phi0 * td + tn
    if polynomial_form:
        return inner_n * c0, td
    return td * c0, inner_n


def candidate(init: InitialCorrection, chain: CorrectionChain | None = None) -> RatFunc:
    """The current approximate solution as a reduced rational function."""
    levels = chain.levels if chain else ()
    yn, yd = _candidate(init.c0, init.phi0, init.polynomial_form, levels)
    return RatFunc(yn, yd)


def _default_nu_max(deq: DiffEq) -> int:
    return max(1, abs(rate_R(deq.V)) + 2)


def initial_correction(
    deq: DiffEq,
    nu_search_max: int | None = None,
    *,
    window: int = 6,
    log: list | None = None,
) -> InitialCorrection:
    """Pick (nu, c0) over the power family c/x^l, then fit the monic Phi0."""
    if nu_search_max is None:
        nu_search_max = _default_nu_max(deq)
    if nu_search_max < 1:
        raise ValueError("nu_search_max must be >= 1")
    rV = rate_R(deq.V)
    base_order = rV + window + 2
    best = None
    ls = [l for k in range(1, nu_search_max + 1) for l in (k, -k)]
    for l in ls:
        poly_form = l < 0
        xl = Poly.monomial(abs(l))

        def make(u, xl=xl, poly_form=poly_form):
            return (xl * u, ONE) if poly_form else (Poly.const(u), xl)

        trial: list = []
        try:
            c = _probe(deq, f"c0[l={l}]", make, base_order, window, trial)
        except (NoDependence, NonAffine):
            continue
        if c == 0:
            continue
        rate = _exact_rate(deq, *make(c))
        if rate > rV and (best is None or rate > best[0]):
            best = (rate, l, c, trial)
    if best is None:
        raise NoImprovement(
            f"no c/x^l with |l| <= {nu_search_max} raises the rate above R(V) = {rV}"
        )
    _, nu, c0, trial = best
    if log is not None:
        log.extend(trial)
    poly_form = nu < 0
    deg = abs(nu)
    bs: list[Fraction] = []
    order = base_order + deg
    for i in range(1, deg + 1):

        def make(u, bs=tuple(bs), i=i):
            phi = Poly(list(reversed([Fraction(1), *bs, u] + [Fraction(0)] * (deg - i))))
            return _candidate(c0, phi, poly_form)

        try:
            b = _probe(deq, f"phi0_{i}", make, order + i, window, log)
        except NoDependence:
            if not poly_form:
                raise
            b = Fraction(0)  # free constant of the homogeneous solution
        bs.append(b)
    phi0 = Poly(list(reversed([Fraction(1), *bs])))
    yn, yd = _candidate(c0, phi0, poly_form)
    y = RatFunc(yn, yd)
    E0 = error_function(deq, y)
    return InitialCorrection(c0, phi0, nu, E0, rate_R(E0), poly_form)


def next_correction(
    deq: DiffEq,
    init: InitialCorrection,
    chain: CorrectionChain,
    *,
    window: int = 6,
    phi_max: int = 4,
    log: list | None = None,
) -> CorrectionChain:
    """Append one level to ``chain``; raises ``Stopped`` when none improves the rate."""
    k = len(chain.levels) + 1
    prev = chain.rates[-1] if chain.levels else init.rate0
    if prev is INF:
        raise Stopped("closed_form", k)
    established = bool(chain.levels)
    degrees = [chain.degree] if established else list(range(1, phi_max + 1))
    for deg in degrees:
        zeros = (Fraction(0),) * deg

        def build(level: Level):
            return _candidate(init.c0, init.phi0, init.polynomial_form, chain.levels + (level,))

        order = int(prev) + window + 2 * deg + 2
        trial: list = []
        try:
            kappa = _probe(deq, f"kappa_{k}", lambda u: build(Level(u, zeros)), order, window, trial)
        except (NoDependence, NonAffine):
            if established:
                raise
            continue
        if kappa == 0:
            if established:
                raise Stopped("kappa_zero", k)
            continue
        improved = _error_series(deq, *build(Level(kappa, zeros)), order).valuation > prev
        if not improved:
            if established:
                raise Stopped("no_improvement", k)
            continue
        lambdas: list[Fraction] = []
        for i in range(deg):

            def make(u, i=i, lam=tuple(lambdas)):
                return build(Level(kappa, lam + (u,) + zeros[i + 1 :]))

            lambdas.append(_probe(deq, f"lambda_{k},{i + 1}", make, order + i + 1, window, trial))
        level = Level(kappa, tuple(lambdas))
        rate = _exact_rate(deq, *build(level))
        if rate <= prev:
            if established:
                raise Stopped("no_improvement", k)
            continue
        if log is not None:
            log.extend(trial)
        return CorrectionChain(deg, chain.levels + (level,), chain.rates + (rate,))
    raise Stopped("no_structure" if not established else "kappa_zero", k)


def detect_mc_point(chain: CorrectionChain) -> Fraction | None:
    """Common shift omega of the partial denominators, if the chain has one."""
    if len(chain.levels) < 2 or chain.degree not in (1, 2):
        return None
    firsts = {lv.lambdas[0] for lv in chain.levels}
    if len(firsts) != 1:
        return None
    b = firsts.pop()
    return b if chain.degree == 1 else b / 2


def solution_cfrac(init: InitialCorrection, chain: CorrectionChain) -> CFrac:
    """The candidate written as an explicit continued fraction in x."""
    phi = RatFunc(init.phi0)
    levels = chain.levels
    if init.polynomial_form:
        b0 = phi * init.c0
        terms = [CFTerm(lv.kappa * (init.c0 if i == 0 else 1), RatFunc(lv.denominator())) for i, lv in enumerate(levels)]
    else:
        b0 = RatFunc.const(0)
        terms = [CFTerm(init.c0, phi)] + [CFTerm(lv.kappa, RatFunc(lv.denominator())) for lv in levels]
    return CFrac(b0, tuple(terms), mc_point=chain.mc_point)


# -- term-rule fitting ----------------------------------------------------------------


def _nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -m[i][fc]
        basis.append(vec)
    return basis


def guess_term_rule(
    values: Sequence, num_deg: int, den_deg: int, *, start: int = 1
) -> tuple[RatFunc, int] | None:
    """Fit values[i] = N(n)/D(n), n = start + i, with deg N <= num_deg, deg D <= den_deg.

    The first num_deg + den_deg + 1 values determine the fit; the rest are
    held out and must all match.  Returns ``(rule, held_out_count)`` or None.
    """
    values = [Fraction(v) for v in values]
    need = num_deg + den_deg + 1
    if len(values) < need + 1:
        raise ValueError(f"need at least {need + 1} values for degrees ({num_deg}, {den_deg})")
    rows = []
    for i, v in enumerate(values[:need]):
        n = Fraction(start + i)
        rows.append([n**e for e in range(num_deg + 1)] + [-v * n**e for e in range(den_deg + 1)])
    for vec in _nullspace(rows, num_deg + den_deg + 2):
        N = Poly(vec[: num_deg + 1])
        D = Poly(vec[num_deg + 1 :])
        if D.is_zero():
            continue
        rule = RatFunc(N, D)
        ok = True
        for i, v in enumerate(values):
            n = Fraction(start + i)
            if rule.den(n) == 0 or rule(n) != v:
                ok = False
                break
        if ok:
            return rule, len(values) - need
    return None


def _auto_degrees(count: int, min_holdout: int, max_total: int = 8):
    for total in range(0, max_total + 1):
        for den in range(0, total + 1):
            if total + 1 + min_holdout <= count:
                yield total - den, den


def fit_rules(chain: CorrectionChain, config: SolveConfig) -> dict:
    seqs: dict[str, list[Fraction]] = {"kappa": chain.kappas}
    for i in range(chain.degree):
        key = "lambda" if chain.degree == 1 else f"lambda{i + 1}"
        seqs[key] = [lv.lambdas[i] for lv in chain.levels]
    d = chain.simplified_d
    if d is not None:
        seqs["d"] = d
    rules = {}
    for name, vals in seqs.items():
        degs = config.fit_degrees or list(_auto_degrees(len(vals), config.min_holdout))
        for nd, dd in degs:
            if len(vals) < nd + dd + 1 + max(1, config.min_holdout):
                continue
            hit = guess_term_rule(vals, nd, dd)
            if hit is not None:
                rules[name] = hit
                break
    return rules


# -- driver ----------------------------------------------------------------------


def solve(deq: DiffEq, config: SolveConfig | None = None) -> SolveOutcome:
    """Run corrections until the error vanishes, a kappa is zero, or max_levels."""
    config = config or SolveConfig()
    if config.max_levels < 0:
        raise ValueError("max_levels must be >= 0")
    log: list[ProbeRecord] = []
    init = initial_correction(deq, config.nu_search_max, window=config.probe_window, log=log)
    chain = CorrectionChain()
    stop = None
    if init.rate0 is not INF:
        while len(chain.levels) < config.max_levels:
            try:
                chain = next_correction(
                    deq, init, chain, window=config.probe_window, phi_max=config.phi_max, log=log
                )
            except Stopped as exc:
                stop = exc.reason
                break
            if chain.rates[-1] is INF:
                break
        else:
            stop = "max_levels"
    final_rate = chain.rates[-1] if chain.levels else init.rate0
    if final_rate is INF:
        y = candidate(init, chain)
        if not error_function(deq, y).is_zero():  # pragma: no cover - exactness guard
            raise AssertionError("closed form failed exact verification")
        cf = solution_cfrac(init, chain) if chain.levels else None
        return SolveOutcome("closed_form", init, chain, y, cf, {}, log, None)
    rules = fit_rules(chain, config) if chain.levels else {}
    return SolveOutcome("truncated", init, chain, None, solution_cfrac(init, chain), rules, log, stop)
