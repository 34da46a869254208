"""Closed-form high-rate predictors: rate parameters, quantization coefficient,
divergences, density limits, mismatch formulas, and the split-bound minimizer.

Conventions: alpha in [0, 1) is the entropy order, r > 1 the distortion power,
beta1 = (1 - alpha + alpha r) / (1 - alpha + r), beta2 = (1 - alpha + r) / (1 - alpha),
and the cell constant is 1 / (2^r (1 + r)). Everything here is a pure function
of immutable densities; predictor integrals run over the truncated support of
the wider-support density, extended by geometric tail windows where a support
is unbounded.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .compander import optimal_point_density
from .density import Density, TAIL_MASS
from .errors import DomainError, InfiniteIntegralError, RenyiQuantError
from .intervals import Interval
from . import quadrature

# orders this close to 1 route through the dedicated variable-rate formulas
ALPHA_VARIABLE_RATE_SWITCH = 1e-3
RATIO_CAP = 1e12


def cell_constant(r: float) -> float:
    """The midpoint-cell constant 1 / (2^r (1 + r))."""
    if r <= 1.0:
        raise DomainError(f"r must exceed 1, got {r}")
    return 1.0 / (2.0**r * (1.0 + r))


@dataclass(frozen=True)
class RateParams:
    alpha: float
    r: float
    beta1: float
    beta2: float
    c_r: float


def rate_params(alpha: float, r: float) -> RateParams:
    """Validated (alpha, r, beta1, beta2, C(r)) tuple."""
    if not 0.0 <= alpha < 1.0:
        raise DomainError(f"alpha must lie in [0, 1), got {alpha}")
    if r <= 1.0:
        raise DomainError(f"r must exceed 1, got {r}")
    beta1 = (1.0 - alpha + alpha * r) / (1.0 - alpha + r)
    beta2 = (1.0 - alpha + r) / (1.0 - alpha)
    params = RateParams(alpha, r, beta1, beta2, cell_constant(r))
    # exponent identities the mismatch algebra relies on
    assert abs((beta1 - alpha) - (1.0 - alpha) / beta2) <= 1e-12
    assert abs((beta1 - 1.0) + r / beta2) <= 1e-12
    return params


# --- shared integration helpers ---------------------------------------------


def _pow(base: float, expo: float) -> float:
    """base**expo with the 0**0 := 0 convention used throughout."""
    return base**expo if base > 0.0 else 0.0


def _joint_integral(
    fn: Callable[[float], float],
    densities: Sequence[Density],
    rel_tol: float = 1e-10,
    abs_tol: float = 1e-14,
) -> float:
    """Integrate fn over the support intersection of the given densities.

    Finite support ends are respected exactly; unbounded ends start from the
    widest of the densities' truncated supports and continue with geometric
    tail windows, so slowly-decaying integrands (fractional powers of light
    tails) are still captured to full precision.
    """
    lo = max(d.support.lo for d in densities)
    hi = min(d.support.hi for d in densities)
    if not lo < hi:
        return 0.0
    cores = [quadrature.truncate_support(d, TAIL_MASS) for d in densities]
    lo_eff = lo if math.isfinite(lo) else min(c.lo for c in cores)
    hi_eff = hi if math.isfinite(hi) else max(c.hi for c in cores)
    lo_eff = max(lo_eff, lo)
    hi_eff = min(hi_eff, hi)
    if not lo_eff < hi_eff:
        lo_eff, hi_eff = lo, hi
    return quadrature.integrate_with_tails(
        fn,
        Interval(lo_eff, hi_eff),
        extend_left=not math.isfinite(lo),
        extend_right=not math.isfinite(hi),
        rel_tol=rel_tol,
        abs_tol=abs_tol,
        tail_tol=1e-14,
    )


def _support_within(inner: Interval, outer: Interval, tol: float = 1e-12) -> bool:
    return inner.lo >= outer.lo - tol and inner.hi <= outer.hi + tol


def _exp_or_diverge(log_value: float, where: float) -> float:
    """exp of a log-space integrand value; overflow means divergence."""
    if log_value == -math.inf:
        return 0.0
    try:
        return math.exp(log_value)
    except OverflowError:
        raise InfiniteIntegralError(
            f"integrand overflows at x = {where:.6g}"
        ) from None


def _bennett_integrand(num: Density, h: Density, r: float) -> Callable[[float], float]:
    """x -> num(x) / h(x)^r in log space, so deep-tail pdf underflow is safe."""

    def fn(x: float) -> float:
        ln = num.logpdf(x)
        if ln == -math.inf:
            return 0.0
        lh = h.logpdf(x)
        if lh == -math.inf:
            raise InfiniteIntegralError(
                f"point density vanishes at {x:.6g} inside the source support"
            )
        return _exp_or_diverge(ln - r * lh, x)

    return fn


# --- quantization coefficient and density limits -----------------------------


def quantization_coefficient(d: Density, alpha: float, r: float) -> float:
    """C(r) times the beta2 power of the beta1 power integral."""
    p = rate_params(alpha, r)
    return p.c_r * d.power_integral(p.beta1) ** p.beta2


def tilted_measure(d: Density, alpha: float, r: float) -> Density:
    """The entropy/distortion density: pdf**beta1 normalized."""
    p = rate_params(alpha, r)
    return d.tilt(p.beta1)


def entropy_density_limit(d: Density, interval: Interval, alpha: float, r: float) -> float:
    """Limit of an interval's relative Renyi-entropy contribution.

    Equals the tilted measure of the interval times mu(interval)**(-alpha).
    """
    p = rate_params(alpha, r)
    mass = d.interval_mass(interval)
    if not 0.0 < mass < 1.0:
        raise DomainError(
            f"entropy density limit needs interval probability in (0,1), got {mass}"
        )
    tilted_mass = d.partial_power_integral(p.beta1, interval) / d.power_integral(p.beta1)
    return tilted_mass * mass ** (-alpha)


def limit_distortion_measure(d: Density, interval: Interval, alpha: float, r: float) -> float:
    """The limit distortion measure of an interval.

    Totals the quantization coefficient over the real line since
    beta2 = 1 + r / (1 - alpha).
    """
    p = rate_params(alpha, r)
    return (
        p.c_r
        * d.partial_power_integral(p.beta1, interval)
        * d.power_integral(p.beta1) ** (r / (1.0 - alpha))
    )


def compander_performance(d: Density, h: Density, alpha: float, r: float) -> float:
    """High-rate normalized distortion of companders with point density h.

    Scaled by the cell constant so the optimal point density returns exactly
    the quantization coefficient of d; any other h gives a strictly larger
    value.
    """
    p = rate_params(alpha, r)
    if not _support_within(d.support, h.support):
        raise DomainError(
            f"point density support {h.support} does not cover the source support "
            f"{d.support}"
        )
    a_int = _joint_integral(
        lambda x: _pow(d.pdf(x), alpha) * _pow(h.pdf(x), 1.0 - alpha), (d, h)
    )
    b_int = _joint_integral(_bennett_integrand(d, h, r), (d,))
    return p.c_r * a_int ** (r / (1.0 - alpha)) * b_int


# --- Renyi divergence ---------------------------------------------------------


def renyi_divergence(u: Density, v: Density, alpha: float) -> float:
    """Renyi divergence of order alpha between densities, +inf if divergent.

    Orders within 1e-9 of 1 evaluate the Kullback-Leibler integral instead of
    the singular closed form.
    """
    if alpha <= 0.0:
        raise DomainError(f"divergence order must be positive, got {alpha}")
    if abs(alpha - 1.0) <= 1e-9:
        return _kl_divergence(u, v)
    if alpha > 1.0 and not _support_within(u.support, v.support):
        return math.inf

    def fn(x: float) -> float:
        lu = u.logpdf(x)
        if lu == -math.inf:
            return 0.0
        lv = v.logpdf(x)
        if lv == -math.inf:
            if alpha < 1.0:
                return 0.0
            raise InfiniteIntegralError(f"second density vanishes at {x}")
        return _exp_or_diverge(alpha * lu + (1.0 - alpha) * lv, x)

    try:
        total = _joint_integral(fn, (u, v) if alpha < 1.0 else (u,))
    except InfiniteIntegralError:
        return math.inf
    if total <= 0.0:
        return math.inf
    return math.log(total) / (alpha - 1.0)


def _kl_divergence(u: Density, v: Density) -> float:
    if not _support_within(u.support, v.support):
        return math.inf

    def fn(x: float) -> float:
        lu = u.logpdf(x)
        if lu == -math.inf:
            return 0.0
        lv = v.logpdf(x)
        if lv == -math.inf:
            raise InfiniteIntegralError(f"second density vanishes at {x}")
        return math.exp(lu) * (lu - lv)

    try:
        return _joint_integral(fn, (u,))
    except InfiniteIntegralError:
        return math.inf


# --- mismatch -------------------------------------------------------------------


@dataclass(frozen=True)
class RatioBoundReport:
    bounded: bool
    max_ratio: float
    argmax: float
    grid_size: int


def check_density_ratio_bound(f: Density, g: Density, grid_size: int = 10_000) -> RatioBoundReport:
    """Grid check that f/g stays bounded on the support of f.

    Reports the grid maximum inflated by a 10% safety factor. Unbounded means
    g vanishes (or the ratio exceeds 1e12) somewhere f has mass.
    """
    window = quadrature.truncate_support(f, TAIL_MASS)
    xs = np.linspace(window.lo, window.hi, grid_size + 2)[1:-1]
    worst = 0.0
    worst_x = float(xs[0])
    bounded = True
    for x in xs:
        fx = f.pdf(float(x))
        if fx <= 0.0:
            continue
        gx = g.pdf(float(x))
        ratio = fx / gx if gx > 0.0 else math.inf
        if ratio > worst:
            worst, worst_x = ratio, float(x)
        if ratio > RATIO_CAP:
            bounded = False
    return RatioBoundReport(bounded, 1.1 * worst, worst_x, grid_size)


def mismatch_entropy_shift(g: Density, f: Density, alpha: float, r: float) -> float:
    """Limit of exp((1-alpha)(H_nu - H_mu)) when g-optimal quantizers meet f."""
    p = rate_params(alpha, r)
    report = check_density_ratio_bound(f, g)
    if not report.bounded:
        warnings.warn(
            f"density ratio f/g appears unbounded near x={report.argmax:.6g}; "
            "the mismatch hypothesis fails and the limit formula may not apply",
            stacklevel=2,
        )
    num = _joint_integral(
        lambda x: _pow(f.pdf(x), alpha) * _pow(g.pdf(x), p.beta1 - alpha), (f,)
    )
    return num / g.power_integral(p.beta1)


def mismatch_distortion_limit(g: Density, f: Density, alpha: float, r: float) -> float:
    """Limit of exp(r H_nu) D_nu for g-optimal quantizers applied to f.

    Evaluated through the normalized optimal point density of g, and
    cross-checked against the equivalent Renyi-divergence form.
    """
    p = rate_params(alpha, r)
    h = optimal_point_density(g, alpha, r)
    a_int = _joint_integral(
        lambda x: _pow(f.pdf(x), alpha) * _pow(h.pdf(x), 1.0 - alpha), (f, h)
    )
    b_int = _joint_integral(_bennett_integrand(f, h, r), (f,))
    value = p.c_r * a_int ** (r / (1.0 - alpha)) * b_int
    # same quantity through the divergence form; a disagreement means the
    # numerics (not the algebra) broke down
    div = renyi_divergence(f, h, alpha) if alpha > 0.0 else -math.log(a_int)
    alt = p.c_r * math.exp(-r * div) * b_int
    if not math.isclose(value, alt, rel_tol=1e-8):
        raise RenyiQuantError(
            f"mismatch distortion limit cross-validation failed: {value!r} vs {alt!r}"
        )
    return value


def mismatch_loss(g: Density, f: Density, alpha: float, r: float) -> float:
    """Distortion loss from quantizing f with a sequence designed for g.

    Orders within 1e-3 of 1 dispatch to the dedicated variable-rate formula
    exp(r KL(f||g)): the generic ratio degenerates as alpha -> 1 (its limit
    does not commute with the high-rate limit), so the endpoint is served by
    its own limit expression. alpha = 0 needs no dispatch; there the generic
    ratio coincides with the fixed-rate formula for equal supports.
    """
    if not 0.0 <= alpha < 1.0:
        raise DomainError(f"alpha must lie in [0, 1), got {alpha}")
    if alpha >= 1.0 - ALPHA_VARIABLE_RATE_SWITCH:
        return mismatch_loss_variable_rate(g, f, r)
    return mismatch_distortion_limit(g, f, alpha, r) / quantization_coefficient(f, alpha, r)


def mismatch_loss_fixed_rate(g: Density, f: Density, r: float) -> float:
    """Fixed-rate (alpha = 0) mismatch loss: exp(r D_{1+r}(f*||g*))."""
    if r <= 1.0:
        raise DomainError(f"r must exceed 1, got {r}")
    f_star = f.tilt(1.0 / (1.0 + r))
    g_star = g.tilt(1.0 / (1.0 + r))
    return math.exp(r * renyi_divergence(f_star, g_star, 1.0 + r))


def mismatch_loss_variable_rate(g: Density, f: Density, r: float) -> float:
    """Variable-rate (alpha = 1) mismatch loss: exp(r KL(f||g))."""
    if r <= 1.0:
        raise DomainError(f"r must exceed 1, got {r}")
    return math.exp(r * renyi_divergence(f, g, 1.0))


# --- split bound ------------------------------------------------------------------


@dataclass(frozen=True)
class SplitBoundResult:
    f_value: float
    z0: float
    f_min: float


def split_bound(a: float, b: float, gamma: float, z: float) -> SplitBoundResult:
    """Evaluate F(z) = a/z^gamma + b/(1-z)^gamma and its strict minimizer.

    The minimizer z0 = a^(1/(1+gamma)) / (a^(1/(1+gamma)) + b^(1/(1+gamma)))
    achieves F_min = (a^(1/(1+gamma)) + b^(1/(1+gamma)))^(1+gamma); when one
    term vanishes the infimum is attained in the boundary limit.
    """
    if a < 0.0 or b < 0.0:
        raise DomainError("split_bound requires nonnegative numerators")
    if gamma <= 0.0:
        raise DomainError(f"gamma must be positive, got {gamma}")
    if not 0.0 < z < 1.0:
        raise DomainError(f"z must lie in (0,1), got {z}")
    if a == 0.0 and b == 0.0:
        raise DomainError("split_bound is degenerate for a = b = 0")
    f_value = a / z**gamma + b / (1.0 - z) ** gamma
    ia = a ** (1.0 / (1.0 + gamma))
    ib = b ** (1.0 / (1.0 + gamma))
    z0 = ia / (ia + ib)
    f_min = (ia + ib) ** (1.0 + gamma)
    return SplitBoundResult(f_value, z0, f_min)
