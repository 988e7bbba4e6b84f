"""Relative entropy (Kullback-Leibler divergence) between the two path laws.

The lambda->1 limit of the power divergence turns every Hellinger-integral
statement into an entropy statement: exact closed forms on NI/SP1, a closed
-form upper bound E^U elsewhere, and a lower-bound family built from
tangent, secant and horizontal majorants of phi whose supremum is reported.
All formulas carry two branches, beta_a != 1 and beta_a = 1 (the former has
a removable singularity at beta_a = 1, so near-1 inputs evaluate both).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .params import CaseError, CaseTag, GWIError, ParamSet, classify

__all__ = [
    "EntropyReport",
    "exact_entropy",
    "entropy_upper",
    "entropy_lower",
    "entropy_report",
    "tangent_component",
    "tangent_component_limit",
    "tangent_component_dy",
    "secant_component",
    "horizontal_component",
    "tangent_derivative_at_ystar",
]

_ONE_TOL = 1e-12
_NEAR_ONE = 1e-6


def _near_one_branch(beta_a: float) -> bool:
    return abs(beta_a - 1.0) < _ONE_TOL


def _weight_geo(params: ParamSet, omega0: int, n: int) -> float:
    """(1 - beta_a^n)/(1 - beta_a) * [omega0 - alpha_a/(1 - beta_a)] (beta_a != 1)."""
    ba = params.beta_a
    return (1.0 - ba**n) / (1.0 - ba) * (omega0 - params.alpha_a / (1.0 - ba))


def _weight_quad(params: ParamSet, omega0: int, n: int) -> float:
    """alpha_a/2 * n^2 + (omega0 + alpha_a/2) * n (beta_a = 1)."""
    aa = params.alpha_a
    return 0.5 * aa * n * n + (omega0 + 0.5 * aa) * n


def _entropy_drift(params: ParamSet) -> float:
    """beta_a*(log(beta_a/beta_h) - 1) + beta_h; >= 0, zero iff beta_a == beta_h."""
    return params.beta_a * (math.log(params.beta_a / params.beta_h) - 1.0) + params.beta_h


def _exact_value(params: ParamSet, omega0: int, n: int, force_one: bool) -> float:
    if force_one:
        return (params.beta_h - math.log(params.beta_h) - 1.0) * _weight_quad(
            params, omega0, n
        )
    t = _entropy_drift(params)
    ba = params.beta_a
    return t / (1.0 - ba) * (omega0 - params.alpha_a / (1.0 - ba)) * (
        1.0 - ba**n
    ) + params.alpha_a * t / (ba * (1.0 - ba)) * n


def _dual_branch(params: ParamSet, omega0: int, n: int, fn) -> float:
    """Evaluate with the beta_a = 1 branch when applicable.

    In the band 1e-12 < |beta_a - 1| < 1e-6 both branches are computed and
    their near-agreement asserted, guarding the removable singularity.
    """
    if _near_one_branch(params.beta_a):
        return fn(params, omega0, n, True)
    value = fn(params, omega0, n, False)
    if abs(params.beta_a - 1.0) < _NEAR_ONE:
        other = fn(params, omega0, n, True)
        scale = max(abs(value), abs(other), 1e-12)
        if abs(value - other) > 1e-3 * scale:
            raise GWIError(
                f"entropy branches disagree near beta_a = 1: {value} vs {other}"
            )
    return value


def exact_entropy(params: ParamSet, omega0: int, n: int) -> float:
    """Exact relative entropy I(P_A,n || P_H,n) on NI u SP1."""
    case = classify(params, 0.5)
    if not case.exactly_computable:
        raise CaseError(
            f"exact entropy only exists on NI/SP1 (got {case.value}); use the bounds"
        )
    if omega0 < 1 or n < 1:
        raise GWIError("need omega0 >= 1 and n >= 1")
    return _dual_branch(params, omega0, n, _exact_value)


def _upper_value(params: ParamSet, omega0: int, n: int, force_one: bool) -> float:
    aa, ah = params.alpha_a, params.alpha_h
    ba, bh = params.beta_a, params.beta_h
    if force_one:
        lin = aa * (math.log(aa * bh / ah) - bh) + ah
        return (bh - math.log(bh) - 1.0) * _weight_quad(params, omega0, n) + lin * n
    t = _entropy_drift(params)
    lin = aa * t / (ba * (1.0 - ba)) + aa * (math.log(aa * bh / (ah * ba)) - bh / ba) + ah
    return t / (1.0 - ba) * (omega0 - aa / (1.0 - ba)) * (1.0 - ba**n) + lin * n


def entropy_upper(params: ParamSet, omega0: int, n: int) -> float:
    """Closed-form upper bound E^U_n for the relative entropy on SP2..SP4."""
    case = classify(params, 0.5)
    if case.exactly_computable:
        raise CaseError(
            f"case {case.value} has exact entropy; use exact_entropy"
        )
    if omega0 < 1 or n < 1:
        raise GWIError("need omega0 >= 1 and n >= 1")
    return _dual_branch(params, omega0, n, _upper_value)


def _rate_ratio(params: ParamSet, y: float) -> float:
    return params.rate_a(y) / params.rate_h(y)


def tangent_component(params: ParamSet, omega0: int, n: int, y: float) -> float:
    """Lower-bound component from the tangent of phi at the point y >= 0."""
    if y < 0.0:
        raise GWIError("tangent point y must be >= 0")

    def value(p: ParamSet, w0: int, nn: int, force_one: bool) -> float:
        ratio = _rate_ratio(p, y)
        b_term = 1.0 - ratio
        if force_one:
            a_term = math.log(ratio) + p.beta_h * b_term
            return a_term * _weight_quad(p, w0, nn) + (
                p.alpha_h - p.alpha_a * p.beta_h
            ) * b_term * nn
        a_term = p.beta_a * math.log(ratio) + p.beta_h * b_term
        lin = p.alpha_a / (p.beta_a * (1.0 - p.beta_a)) * a_term + (
            p.alpha_h - p.alpha_a * p.beta_h / p.beta_a
        ) * b_term
        return a_term * _weight_geo(p, w0, nn) + lin * nn

    return _dual_branch(params, omega0, n, value)


def tangent_component_limit(params: ParamSet, omega0: int, n: int) -> float:
    """The y -> infinity limit of the tangent component (closed form)."""

    def value(p: ParamSet, w0: int, nn: int, force_one: bool) -> float:
        if force_one:
            lin = p.alpha_a * (1.0 - p.beta_h) + p.alpha_h * (1.0 - 1.0 / p.beta_h)
            return (p.beta_h - math.log(p.beta_h) - 1.0) * _weight_quad(p, w0, nn) + lin * nn
        t = _entropy_drift(p)
        lin = (
            p.alpha_a * t / (p.beta_a * (1.0 - p.beta_a))
            + p.alpha_a * (1.0 - p.beta_h / p.beta_a)
            + p.alpha_h * (1.0 - p.beta_a / p.beta_h)
        )
        return t * _weight_geo(p, w0, nn) + lin * nn

    return _dual_branch(params, omega0, n, value)


def tangent_component_dy(params: ParamSet, omega0: int, n: int, y: float) -> float:
    """d/dy of the tangent component; used to confirm stationarity of maximizers."""
    gbar = params.alpha_a * params.beta_h - params.alpha_h * params.beta_a
    fa, fh = params.rate_a(y), params.rate_h(y)

    def value(p: ParamSet, w0: int, nn: int, force_one: bool) -> float:
        if force_one:
            return gbar**2 / (fa * fh * fh) * _weight_quad(p, w0, nn) - gbar**2 / (
                fh * fh
            ) * nn
        lead = gbar**2 / (fa * fh * fh) * _weight_geo(p, w0, nn)
        lin = gbar / (fh * fh) * (
            p.alpha_a * gbar / (p.beta_a * (1.0 - p.beta_a) * fa) - gbar / p.beta_a
        )
        return lead + lin * nn

    return _dual_branch(params, omega0, n, value)


def secant_component(params: ParamSet, omega0: int, n: int, k: int) -> float:
    """Lower-bound component from the secant of phi through k and k + 1."""
    if k < 0:
        raise GWIError("secant index k must be >= 0")

    def xlogr(p: ParamSet, x: float) -> float:
        fa = p.rate_a(x)
        return fa * math.log(fa / p.rate_h(x))

    def value(p: ParamSet, w0: int, nn: int, force_one: bool) -> float:
        l_k = xlogr(p, float(k))
        diff = xlogr(p, float(k + 1)) - l_k
        if force_one:
            lead = (diff + p.beta_h - 1.0) * _weight_quad(p, w0, nn)
            lin = diff * (k + p.alpha_a) - l_k + p.alpha_a * p.beta_h - p.alpha_h
            return lead - lin * nn
        lead = (diff + p.beta_h - p.beta_a) * _weight_geo(p, w0, nn)
        lin = (
            p.alpha_a / (p.beta_a * (1.0 - p.beta_a)) * (diff + p.beta_h - p.beta_a)
            - diff * (k + p.alpha_a / p.beta_a)
            + l_k
            - p.alpha_a * p.beta_h / p.beta_a
            + p.alpha_h
        )
        return lead + lin * nn

    return _dual_branch(params, omega0, n, value)


def _horizontal_argmax(params: ParamSet) -> int:
    """argmax over the integers of f_A(x)[1 - log(f_A/f_H)(x)] - f_H(x).

    Ties break toward the smaller integer; the scan stops after the value
    has decreased for 10 consecutive integers past the zero-of-phi region.
    """
    def g(x: int) -> float:
        fa, fh = params.rate_a(x), params.rate_h(x)
        return fa * (1.0 - math.log(fa / fh)) - fh

    guard = 0
    if params.beta_a != params.beta_h:
        x_star = (params.alpha_h - params.alpha_a) / (params.beta_a - params.beta_h)
        guard = max(0, math.ceil(x_star))
    best_x, best = 0, g(0)
    drops = 0
    x = 0
    while drops < 10 or x <= guard:
        x += 1
        val = g(x)
        if val > best:
            best_x, best = x, val
            drops = 0
        else:
            drops += 1
        if x > 10**6:
            raise GWIError("horizontal argmax scan did not terminate")
    return best_x


def horizontal_component(params: ParamSet, omega0: int, n: int) -> tuple[float, int]:
    """Lower-bound component from the horizontal majorant; returns (value, z*).

    On SP4 the horizontal majorant is trivial, so the component is 0.
    """
    if classify(params, 0.5) is CaseTag.SP4:
        return 0.0, 0
    z = _horizontal_argmax(params)
    fa, fh = params.rate_a(z), params.rate_h(z)
    return (fa * (math.log(fa / fh) - 1.0) + fh) * n, z


def tangent_derivative_at_ystar(params: ParamSet, omega0: int, n: int) -> float:
    """Closed form of d/dy tangent-component at y* = (alpha_a-alpha_h)/(beta_h-beta_a).

    y* is the positive integer where the two conditional rates coincide on
    SP3d; a vanishing derivative there means the tangent family is flat at
    its zero and strict positivity of the entropy lower bound is not
    guaranteed by the construction.
    """
    gbar = params.alpha_a * params.beta_h - params.alpha_h * params.beta_a
    ba, bh = params.beta_a, params.beta_h

    def value(p: ParamSet, w0: int, nn: int, force_one: bool) -> float:
        if force_one:
            return -((1.0 - bh) ** 3) / gbar * _weight_quad(p, w0, nn) - (
                1.0 - bh
            ) ** 2 * nn
        lead = -((ba - bh) ** 3) / gbar * _weight_geo(p, w0, nn)
        lin = -((ba - bh) ** 2) / ba * (
            1.0 + p.alpha_a * (ba - bh) / ((1.0 - ba) * gbar)
        )
        return lead + lin * nn

    return _dual_branch(params, omega0, n, value)


def _golden_max(fn, lo: float, hi: float, iters: int = 80) -> tuple[float, float]:
    """Golden-section maximization of a unimodal-enough fn on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fn(d)
        if b - a < 1e-10 * max(1.0, abs(a)):
            break
    x = 0.5 * (a + b)
    return x, fn(x)


@dataclass(frozen=True)
class EntropyReport:
    """Entropy values and bound components for one (params, omega0, n)."""

    exact: Optional[float]
    upper: Optional[float]
    lower: Optional[float]
    tan_at_ystar: Optional[float]
    best_tan: Optional[float]
    best_sec: Optional[float]
    horizontal: Optional[float]
    y_best: Optional[float]
    k_best: Optional[int]
    simplified: Optional[float]
    degenerate_sp3d: bool
    dtan_at_ystar: Optional[float]
    case: CaseTag

    def __post_init__(self) -> None:
        if self.lower is not None and self.upper is not None:
            if self.lower > self.upper + 1e-9:
                raise GWIError("entropy lower bound exceeds upper bound")


def entropy_lower(params: ParamSet, omega0: int, n: int) -> EntropyReport:
    """Supremum of the tangent/secant/horizontal entropy lower bounds.

    The tangent family is maximized over a geometric y-grid refined by
    golden-section search, plus its analytic y -> infinity limit; the secant
    family is scanned over integers until it has decreased 10 times in a
    row past the rate-crossing region; the horizontal component is a single
    closed form.  The simplified bound max{tan(inf), sec(0), horizontal} is
    reported alongside.
    """
    case = classify(params, 0.5)
    if case in (CaseTag.NI, CaseTag.SP1):
        raise CaseError(f"entropy lower bounds only apply on SP \\ SP1, got {case.value}")
    if omega0 < 1 or n < 1:
        raise GWIError("need omega0 >= 1 and n >= 1")

    def tan(y: float) -> float:
        return tangent_component(params, omega0, n, y)

    grid = [0.0] + [2.0**e for e in range(-4, 17)]
    values = [tan(y) for y in grid]
    i_best = max(range(len(grid)), key=values.__getitem__)
    lo = grid[i_best - 1] if i_best > 0 else 0.0
    hi = grid[i_best + 1] if i_best + 1 < len(grid) else 2.0 * grid[i_best] + 1.0
    y_best, best_tan = _golden_max(tan, lo, hi)
    if values[i_best] > best_tan:
        y_best, best_tan = grid[i_best], values[i_best]
    tan_inf = tangent_component_limit(params, omega0, n)
    if tan_inf > best_tan:
        y_best, best_tan = math.inf, tan_inf

    guard = 0
    if params.beta_a != params.beta_h:
        x_star = (params.alpha_h - params.alpha_a) / (params.beta_a - params.beta_h)
        guard = max(0, math.ceil(x_star))
    k_best, best_sec = 0, secant_component(params, omega0, n, 0)
    drops, k = 0, 0
    while drops < 10 or k <= guard:
        k += 1
        val = secant_component(params, omega0, n, k)
        if val > best_sec:
            k_best, best_sec = k, val
            drops = 0
        else:
            drops += 1
        if k > 10**5:
            break

    horizontal, _z = horizontal_component(params, omega0, n)

    lower = max(best_tan, best_sec, horizontal, 0.0)
    simplified = max(tan_inf, secant_component(params, omega0, n, 0), horizontal)

    tan_at_ystar = None
    dtan = None
    degenerate = False
    if case is CaseTag.SP3D:
        y_star = (params.alpha_a - params.alpha_h) / (params.beta_h - params.beta_a)
        tan_at_ystar = tangent_component(params, omega0, n, y_star)
        dtan = tangent_derivative_at_ystar(params, omega0, n)
        degenerate = bool(abs(dtan) <= 1e-10 * max(1.0, abs(n)))

    return EntropyReport(
        exact=None,
        upper=None,
        lower=lower,
        tan_at_ystar=tan_at_ystar,
        best_tan=best_tan,
        best_sec=best_sec,
        horizontal=horizontal,
        y_best=y_best,
        k_best=k_best,
        simplified=simplified,
        degenerate_sp3d=degenerate,
        dtan_at_ystar=dtan,
        case=case,
    )


def entropy_report(params: ParamSet, omega0: int, n: int) -> EntropyReport:
    """Exact entropy (NI/SP1) or the E^L/E^U bound pair (otherwise)."""
    case = classify(params, 0.5)
    if case.exactly_computable:
        value = exact_entropy(params, omega0, n)
        return EntropyReport(
            exact=value,
            upper=value,
            lower=value,
            tan_at_ystar=None,
            best_tan=None,
            best_sec=None,
            horizontal=None,
            y_best=None,
            k_best=None,
            simplified=None,
            degenerate_sp3d=False,
            dtan_at_ystar=None,
            case=case,
        )
    report = entropy_lower(params, omega0, n)
    upper = entropy_upper(params, omega0, n)
    return EntropyReport(
        exact=None,
        upper=upper,
        lower=report.lower,
        tan_at_ystar=report.tan_at_ystar,
        best_tan=report.best_tan,
        best_sec=report.best_sec,
        horizontal=report.horizontal,
        y_best=report.y_best,
        k_best=report.k_best,
        simplified=report.simplified,
        degenerate_sp3d=report.degenerate_sp3d,
        dtan_at_ystar=report.dtan_at_ystar,
        case=report.case,
    )
