"""Probability density models with analytic functionals where available.

Closed forms cover the Uniform/Gaussian/Laplacian/Exponential families (pdf,
cdf, quantile, power integrals and their tilted relatives); everything else
falls back to adaptive quadrature on a quantile-truncated support. Densities
are immutable after construction and every operation is a pure function, so
instances can be shared across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _special

from .errors import (
    ConfigError,
    DomainError,
    EmptyConditioningError,
    InfiniteIntegralError,
)
from .intervals import Interval, REAL_LINE
from . import quadrature

TAIL_MASS = 1e-12           # unbounded supports integrate over the 1e-12 quantile window
NORMALIZATION_TOL = 1e-9
QUANTILE_WIDTH = 1e-12      # bisection bracket width for the quantile fallback

_SQRT_2 = math.sqrt(2.0)
_SQRT_2PI = math.sqrt(2.0 * math.pi)


class Density:
    """Common surface for all density families.

    Subclasses must provide `support`, `pdf`, and `cdf`; everything else has
    a generic implementation that closed-form families override.
    """

    support: Interval
    weakly_unimodal: bool = False

    # --- pointwise surface -------------------------------------------------

    def pdf(self, x: float) -> float:
        raise NotImplementedError

    def cdf(self, x: float) -> float:
        raise NotImplementedError

    def logpdf(self, x: float) -> float:
        """log pdf(x), -inf outside the support.

        Closed-form families override this so deep tails stay finite where
        the pdf itself underflows to zero.
        """
        g = self.pdf(x)
        return math.log(g) if g > 0.0 else -math.inf

    def sf(self, x: float) -> float:
        """Survival function 1 - cdf(x); override where the tail cancels."""
        return 1.0 - self.cdf(x)

    def quantile(self, p: float) -> float:
        """Generalized inverse inf{x : cdf(x) >= p} for p in (0, 1)."""
        if not 0.0 < p < 1.0:
            raise DomainError(f"quantile requires p in (0,1), got {p}")
        return self._quantile_impl(p)

    def isf(self, p: float) -> float:
        """Inverse survival function: the x with sf(x) = p.

        Equivalent to quantile(1 - p) but keeps full relative precision deep
        in the right tail; families with closed tails override it.
        """
        if not 0.0 < p < 1.0:
            raise DomainError(f"isf requires p in (0,1), got {p}")
        return self._quantile_impl(1.0 - p)

    def _quantile_impl(self, p: float) -> float:
        lo, hi = self._quantile_bracket(p)
        while hi - lo > QUANTILE_WIDTH:
            mid = 0.5 * (lo + hi)
            if self.cdf(mid) >= p:
                hi = mid
            else:
                lo = mid
        return 0.5 * (lo + hi)

    def _quantile_bracket(self, p: float) -> tuple[float, float]:
        lo, hi = self.support.lo, self.support.hi
        if not math.isfinite(lo):
            anchor = hi if math.isfinite(hi) else 0.0
            lo, step = anchor - 1.0, 1.0
            while self.cdf(lo) >= p:
                step *= 2.0
                lo -= step
        if not math.isfinite(hi):
            anchor = self.support.lo if math.isfinite(self.support.lo) else 0.0
            hi, step = anchor + 1.0, 1.0
            while self.cdf(hi) < p:
                step *= 2.0
                hi += step
        return lo, hi

    def interval_mass(self, interval: Interval) -> float:
        """Probability of a half-open interval via cdf/sf differences."""
        c_lo = self.cdf(interval.lo) if math.isfinite(interval.lo) else 0.0
        if c_lo <= 0.5:
            c_hi = self.cdf(interval.hi) if math.isfinite(interval.hi) else 1.0
            return max(0.0, c_hi - c_lo)
        # deep in the right tail the survival form keeps relative precision
        s_lo = self.sf(interval.lo) if math.isfinite(interval.lo) else 1.0
        s_hi = self.sf(interval.hi) if math.isfinite(interval.hi) else 0.0
        return max(0.0, s_lo - s_hi)

    # --- analytic functionals ----------------------------------------------

    def power_integral(self, beta: float) -> float:
        """Integral of pdf**beta over the support."""
        if beta <= 0.0:
            raise DomainError(f"power_integral requires beta > 0, got {beta}")
        return self._power_integral_quad(beta)

    def partial_power_integral(self, beta: float, interval: Interval) -> float:
        """Integral of pdf**beta over an interval.

        When the tilted family has a closed form, this is the full power
        integral times the tilted measure of the interval.
        """
        if beta <= 0.0:
            raise DomainError(f"partial_power_integral requires beta > 0, got {beta}")
        closed = self._tilt_closed(beta)
        if closed is not None:
            return self.power_integral(beta) * closed.interval_mass(interval)
        return self._power_integral_quad(beta, interval)

    def _power_integral_quad(self, beta: float, interval: Interval | None = None) -> float:
        domain = self.support if interval is None else self.support.intersect(interval)
        if domain is None:
            return 0.0
        core = quadrature.truncate_support(self, TAIL_MASS)
        window = core.intersect(domain)
        if window is None:
            return 0.0

        def f(x: float) -> float:
            g = self.pdf(x)
            return g**beta if g > 0.0 else 0.0

        return quadrature.integrate_with_tails(
            f,
            window,
            extend_left=not math.isfinite(domain.lo) and window.lo == core.lo,
            extend_right=not math.isfinite(domain.hi) and window.hi == core.hi,
        )

    def renyi_differential_entropy(self, beta: float) -> float:
        """(1/(1-beta)) log of the beta power integral; Shannon at beta = 1."""
        if beta <= 0.0:
            raise DomainError(f"order must be positive, got {beta}")
        if abs(beta - 1.0) <= 1e-9:
            return self.shannon_differential_entropy()
        return math.log(self.power_integral(beta)) / (1.0 - beta)

    def shannon_differential_entropy(self) -> float:
        core = quadrature.truncate_support(self, TAIL_MASS)

        def f(x: float) -> float:
            g = self.pdf(x)
            return -g * math.log(g) if g > 0.0 else 0.0

        return quadrature.integrate_with_tails(
            f,
            core,
            extend_left=not math.isfinite(self.support.lo),
            extend_right=not math.isfinite(self.support.hi),
        )

    def absolute_moment(self, r: float) -> float:
        """E|X|^r by quadrature, splitting at the |x| kink."""
        if r < 1.0:
            raise DomainError(f"absolute_moment requires r >= 1, got {r}")
        core = quadrature.truncate_support(self, TAIL_MASS)

        def f(x: float) -> float:
            return abs(x) ** r * self.pdf(x)

        pieces = [core]
        if core.lo < 0.0 < core.hi:
            pieces = [Interval(core.lo, 0.0), Interval(0.0, core.hi)]
        total = 0.0
        for piece in pieces:
            total += quadrature.integrate_with_tails(
                f,
                piece,
                extend_left=piece.lo == core.lo and not math.isfinite(self.support.lo),
                extend_right=piece.hi == core.hi and not math.isfinite(self.support.hi),
            )
        return total

    def interval_first_moment(self, interval: Interval) -> float:
        """Integral of x * pdf(x) over an interval (unnormalized)."""
        window = self._bounded_window(interval)
        if window is None:
            return 0.0
        return quadrature.integrate(lambda x: x * self.pdf(x), window).value

    def _bounded_window(self, interval: Interval) -> Interval | None:
        return quadrature.truncate_support(self, TAIL_MASS).intersect(interval)

    # --- derived densities ---------------------------------------------------

    def restrict(self, interval: Interval) -> "Density":
        """Conditional density given the interval."""
        return RestrictedDensity(self, interval)

    def tilt(self, beta: float) -> "Density":
        """Normalized pdf**beta as a density."""
        if beta <= 0.0:
            raise DomainError(f"tilt requires a positive exponent, got {beta}")
        closed = self._tilt_closed(beta)
        if closed is not None:
            return closed
        return TiltedDensity(self, beta)

    def _tilt_closed(self, beta: float) -> "Density | None":
        return None

    def mode(self) -> float:
        """A representative maximizer of the pdf (diagnostic use)."""
        return self.quantile(0.5)

    # --- housekeeping ---------------------------------------------------------

    def _check_normalization(self) -> None:
        core = quadrature.truncate_support(self, TAIL_MASS)
        total = quadrature.integrate(self.pdf, core).value
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise DomainError(
                f"{type(self).__name__} pdf integrates to {total!r}, expected 1 "
                f"within {NORMALIZATION_TOL}"
            )

    def to_spec(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Uniform(Density):
    """Uniform density on (a, b]."""

    a: float
    b: float
    weakly_unimodal = True

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b) and self.a < self.b):
            raise DomainError(f"uniform requires finite a < b, got ({self.a}, {self.b})")

    @property
    def support(self) -> Interval:
        return Interval(self.a, self.b)

    def pdf(self, x: float) -> float:
        return 1.0 / (self.b - self.a) if self.a < x <= self.b else 0.0

    def logpdf(self, x: float) -> float:
        if not self.a < x <= self.b:
            return -math.inf
        return -math.log(self.b - self.a)

    def cdf(self, x: float) -> float:
        if x <= self.a:
            return 0.0
        if x >= self.b:
            return 1.0
        return (x - self.a) / (self.b - self.a)

    def quantile(self, p: float) -> float:
        if not 0.0 < p < 1.0:
            raise DomainError(f"quantile requires p in (0,1), got {p}")
        return self.a + p * (self.b - self.a)

    def isf(self, p: float) -> float:
        if not 0.0 < p < 1.0:
            raise DomainError(f"isf requires p in (0,1), got {p}")
        return self.b - p * (self.b - self.a)

    def power_integral(self, beta: float) -> float:
        if beta <= 0.0:
            raise DomainError(f"power_integral requires beta > 0, got {beta}")
        return (self.b - self.a) ** (1.0 - beta)

    def _tilt_closed(self, beta: float) -> Density:
        return self

    def interval_first_moment(self, interval: Interval) -> float:
        window = self.support.intersect(interval)
        if window is None:
            return 0.0
        return 0.5 * (window.hi**2 - window.lo**2) / (self.b - self.a)

    def mode(self) -> float:
        return 0.5 * (self.a + self.b)

    def scaled(self, s: float) -> "Uniform":
        return Uniform(self.a * s, self.b * s) if s > 0 else Uniform(self.b * s, self.a * s)

    def shifted(self, c: float) -> "Uniform":
        return Uniform(self.a + c, self.b + c)

    def to_spec(self) -> dict:
        return {"family": "uniform", "a": self.a, "b": self.b}


@dataclass(frozen=True)
class Gaussian(Density):
    mean: float = 0.0
    sigma: float = 1.0
    weakly_unimodal = True

    def __post_init__(self):
        if not (math.isfinite(self.mean) and self.sigma > 0.0):
            raise DomainError(f"gaussian requires sigma > 0, got {self.sigma}")

    @property
    def support(self) -> Interval:
        return REAL_LINE

    def pdf(self, x: float) -> float:
        z = (x - self.mean) / self.sigma
        return math.exp(-0.5 * z * z) / (self.sigma * _SQRT_2PI)

    def logpdf(self, x: float) -> float:
        z = (x - self.mean) / self.sigma
        return -0.5 * z * z - math.log(self.sigma * _SQRT_2PI)

    def cdf(self, x: float) -> float:
        return 0.5 * math.erfc(-(x - self.mean) / (self.sigma * _SQRT_2))

    def sf(self, x: float) -> float:
        return 0.5 * math.erfc((x - self.mean) / (self.sigma * _SQRT_2))

    def quantile(self, p: float) -> float:
        if not 0.0 < p < 1.0:
            raise DomainError(f"quantile requires p in (0,1), got {p}")
        return self.mean + self.sigma * float(_special.ndtri(p))

    def isf(self, p: float) -> float:
        if not 0.0 < p < 1.0:
            raise DomainError(f"isf requires p in (0,1), got {p}")
        return self.mean - self.sigma * float(_special.ndtri(p))

    def power_integral(self, beta: float) -> float:
        if beta <= 0.0:
            raise DomainError(f"power_integral requires beta > 0, got {beta}")
        return (2.0 * math.pi * self.sigma**2) ** (0.5 * (1.0 - beta)) / math.sqrt(beta)

    def _tilt_closed(self, beta: float) -> Density:
        return Gaussian(self.mean, self.sigma / math.sqrt(beta))

    def interval_first_moment(self, interval: Interval) -> float:
        # int_a^b x g = mean * mass + sigma^2 (g(a) - g(b))
        lo, hi = interval.lo, interval.hi
        g_lo = self.pdf(lo) if math.isfinite(lo) else 0.0
        g_hi = self.pdf(hi) if math.isfinite(hi) else 0.0
        return self.mean * self.interval_mass(interval) + self.sigma**2 * (g_lo - g_hi)

    def mode(self) -> float:
        return self.mean

    def scaled(self, s: float) -> "Gaussian":
        return Gaussian(self.mean * s, self.sigma * abs(s))

    def shifted(self, c: float) -> "Gaussian":
        return Gaussian(self.mean + c, self.sigma)

    def to_spec(self) -> dict:
        return {"family": "gaussian", "mean": self.mean, "sigma": self.sigma}


@dataclass(frozen=True)
class Laplacian(Density):
    mean: float = 0.0
    scale: float = 1.0
    weakly_unimodal = True

    def __post_init__(self):
        if not (math.isfinite(self.mean) and self.scale > 0.0):
            raise DomainError(f"laplacian requires scale > 0, got {self.scale}")

    @property
    def support(self) -> Interval:
        return REAL_LINE

    def pdf(self, x: float) -> float:
        return math.exp(-abs(x - self.mean) / self.scale) / (2.0 * self.scale)

    def logpdf(self, x: float) -> float:
        return -abs(x - self.mean) / self.scale - math.log(2.0 * self.scale)

    def cdf(self, x: float) -> float:
        z = (x - self.mean) / self.scale
        if z < 0.0:
            return 0.5 * math.exp(z)
        return 1.0 - 0.5 * math.exp(-z)

    def sf(self, x: float) -> float:
        z = (x - self.mean) / self.scale
        if z < 0.0:
            return 1.0 - 0.5 * math.exp(z)
        return 0.5 * math.exp(-z)

    def quantile(self, p: float) -> float:
        if not 0.0 < p < 1.0:
            raise DomainError(f"quantile requires p in (0,1), got {p}")
        if p < 0.5:
            return self.mean + self.scale * math.log(2.0 * p)
        return self.mean - self.scale * math.log(2.0 * (1.0 - p))

    def isf(self, p: float) -> float:
        if not 0.0 < p < 1.0:
            raise DomainError(f"isf requires p in (0,1), got {p}")
        if p < 0.5:
            return self.mean - self.scale * math.log(2.0 * p)
        return self.mean + self.scale * math.log(2.0 * (1.0 - p))

    def power_integral(self, beta: float) -> float:
        if beta <= 0.0:
            raise DomainError(f"power_integral requires beta > 0, got {beta}")
        return (2.0 * self.scale) ** (1.0 - beta) / beta

    def _tilt_closed(self, beta: float) -> Density:
        return Laplacian(self.mean, self.scale / beta)

    def mode(self) -> float:
        return self.mean

    def scaled(self, s: float) -> "Laplacian":
        return Laplacian(self.mean * s, self.scale * abs(s))

    def shifted(self, c: float) -> "Laplacian":
        return Laplacian(self.mean + c, self.scale)

    def to_spec(self) -> dict:
        return {"family": "laplacian", "mean": self.mean, "scale": self.scale}


@dataclass(frozen=True)
class Exponential(Density):
    rate: float = 1.0
    shift: float = 0.0
    weakly_unimodal = True

    def __post_init__(self):
        if not (self.rate > 0.0 and math.isfinite(self.shift)):
            raise DomainError(f"exponential requires rate > 0, got {self.rate}")

    @property
    def support(self) -> Interval:
        return Interval(self.shift, math.inf)

    def pdf(self, x: float) -> float:
        if x <= self.shift:
            return 0.0
        return self.rate * math.exp(-self.rate * (x - self.shift))

    def logpdf(self, x: float) -> float:
        if x <= self.shift:
            return -math.inf
        return math.log(self.rate) - self.rate * (x - self.shift)

    def cdf(self, x: float) -> float:
        if x <= self.shift:
            return 0.0
        return -math.expm1(-self.rate * (x - self.shift))

    def sf(self, x: float) -> float:
        if x <= self.shift:
            return 1.0
        return math.exp(-self.rate * (x - self.shift))

    def quantile(self, p: float) -> float:
        if not 0.0 < p < 1.0:
            raise DomainError(f"quantile requires p in (0,1), got {p}")
        return self.shift - math.log1p(-p) / self.rate

    def isf(self, p: float) -> float:
        if not 0.0 < p < 1.0:
            raise DomainError(f"isf requires p in (0,1), got {p}")
        return self.shift - math.log(p) / self.rate

    def power_integral(self, beta: float) -> float:
        if beta <= 0.0:
            raise DomainError(f"power_integral requires beta > 0, got {beta}")
        return self.rate ** (beta - 1.0) / beta

    def _tilt_closed(self, beta: float) -> Density:
        return Exponential(self.rate * beta, self.shift)

    def mode(self) -> float:
        return self.shift

    def scaled(self, s: float) -> "Exponential":
        if s <= 0:
            raise DomainError("exponential scaling requires s > 0")
        return Exponential(self.rate / s, self.shift * s)

    def shifted(self, c: float) -> "Exponential":
        return Exponential(self.rate, self.shift + c)

    def to_spec(self) -> dict:
        return {"family": "exponential", "rate": self.rate, "shift": self.shift}


class PiecewiseLinear(Density):
    """Piecewise-linear density from (x, y) knots, normalized at construction."""

    weakly_unimodal = False

    def __init__(self, knots):
        pts = [(float(x), float(y)) for x, y in knots]
        if len(pts) < 2:
            raise DomainError("piecewise linear density needs at least two knots")
        xs = np.array([p[0] for p in pts])
        ys = np.array([p[1] for p in pts])
        if np.any(np.diff(xs) <= 0.0):
            raise DomainError("piecewise linear knots must have strictly increasing x")
        if np.any(ys < 0.0):
            raise DomainError("piecewise linear knots must have nonnegative y")
        area = float(np.sum(0.5 * (ys[1:] + ys[:-1]) * np.diff(xs)))
        if area <= 0.0:
            raise DomainError("piecewise linear density has zero total mass")
        self._xs = xs
        self._ys = ys / area
        seg = 0.5 * (self._ys[1:] + self._ys[:-1]) * np.diff(xs)
        self._cum = np.concatenate(([0.0], np.cumsum(seg)))
        self._cum[-1] = 1.0
        self._check_normalization()

    @property
    def support(self) -> Interval:
        return Interval(float(self._xs[0]), float(self._xs[-1]))

    @property
    def knots(self) -> tuple[tuple[float, float], ...]:
        return tuple(zip(self._xs.tolist(), self._ys.tolist()))

    def pdf(self, x: float) -> float:
        if not self.support.contains(x):
            return 0.0
        return float(np.interp(x, self._xs, self._ys))

    def cdf(self, x: float) -> float:
        if x <= self._xs[0]:
            return 0.0
        if x >= self._xs[-1]:
            return 1.0
        i = int(np.searchsorted(self._xs, x, side="right")) - 1
        x0, y0 = self._xs[i], self._ys[i]
        slope = (self._ys[i + 1] - y0) / (self._xs[i + 1] - x0)
        dx = x - x0
        return float(self._cum[i] + y0 * dx + 0.5 * slope * dx * dx)

    def power_integral(self, beta: float) -> float:
        if beta <= 0.0:
            raise DomainError(f"power_integral requires beta > 0, got {beta}")
        return self.partial_power_integral(beta, self.support)

    def partial_power_integral(self, beta: float, interval: Interval) -> float:
        if beta <= 0.0:
            raise DomainError(f"partial_power_integral requires beta > 0, got {beta}")
        total = 0.0
        for i in range(len(self._xs) - 1):
            seg = Interval(float(self._xs[i]), float(self._xs[i + 1])).intersect(interval)
            if seg is None:
                continue
            total += self._segment_power(i, seg.lo, seg.hi, beta)
        return total

    def _segment_power(self, i: int, a: float, b: float, beta: float) -> float:
        x0, y0 = float(self._xs[i]), float(self._ys[i])
        slope = (float(self._ys[i + 1]) - y0) / (float(self._xs[i + 1]) - x0)
        ya = y0 + slope * (a - x0)
        yb = y0 + slope * (b - x0)
        if slope == 0.0:
            return ya**beta * (b - a) if ya > 0.0 else 0.0
        return (yb ** (beta + 1.0) - ya ** (beta + 1.0)) / (slope * (beta + 1.0))

    def mode(self) -> float:
        return float(self._xs[int(np.argmax(self._ys))])

    def scaled(self, s: float) -> "PiecewiseLinear":
        if s <= 0:
            raise DomainError("piecewise scaling requires s > 0")
        return PiecewiseLinear([(x * s, y / s) for x, y in self.knots])

    def to_spec(self) -> dict:
        return {"family": "piecewise_linear", "knots": [list(k) for k in self.knots]}

    def __repr__(self) -> str:
        return f"PiecewiseLinear({len(self._xs)} knots on {self.support})"


class RestrictedDensity(Density):
    """Conditional density of a base density given an interval."""

    def __init__(self, base: Density, interval: Interval):
        window = base.support.intersect(interval)
        if window is None:
            raise EmptyConditioningError(
                f"conditioning interval {interval} misses the support {base.support}"
            )
        mass = base.interval_mass(window)
        if mass <= 0.0:
            raise EmptyConditioningError(
                f"conditioning interval {interval} has zero probability"
            )
        self.base = base
        self.interval = interval
        self._window = window
        self._mass = mass
        self.weakly_unimodal = base.weakly_unimodal
        self._check_normalization()

    @property
    def support(self) -> Interval:
        return self._window

    @property
    def conditioning_mass(self) -> float:
        return self._mass

    def pdf(self, x: float) -> float:
        if not self._window.contains(x):
            return 0.0
        return self.base.pdf(x) / self._mass

    def logpdf(self, x: float) -> float:
        if not self._window.contains(x):
            return -math.inf
        return self.base.logpdf(x) - math.log(self._mass)

    def cdf(self, x: float) -> float:
        if x <= self._window.lo:
            return 0.0
        if x >= self._window.hi:
            return 1.0
        return min(1.0, self.base.interval_mass(Interval(self._window.lo, x)) / self._mass)

    def sf(self, x: float) -> float:
        if x <= self._window.lo:
            return 1.0
        if x >= self._window.hi:
            return 0.0
        return min(1.0, self.base.interval_mass(Interval(x, self._window.hi)) / self._mass)

    def quantile(self, p: float) -> float:
        if not 0.0 < p < 1.0:
            raise DomainError(f"quantile requires p in (0,1), got {p}")
        c_lo = self.base.cdf(self._window.lo) if math.isfinite(self._window.lo) else 0.0
        target = c_lo + p * self._mass
        target = min(max(target, math.nextafter(0.0, 1.0)), math.nextafter(1.0, 0.0))
        return self.base.quantile(target)

    def power_integral(self, beta: float) -> float:
        if beta <= 0.0:
            raise DomainError(f"power_integral requires beta > 0, got {beta}")
        return self._mass ** (-beta) * self.base.partial_power_integral(beta, self._window)

    def partial_power_integral(self, beta: float, interval: Interval) -> float:
        window = self._window.intersect(interval)
        if window is None:
            return 0.0
        return self._mass ** (-beta) * self.base.partial_power_integral(beta, window)

    def _tilt_closed(self, beta: float) -> Density:
        return RestrictedDensity(self.base.tilt(beta), self._window)

    def interval_first_moment(self, interval: Interval) -> float:
        window = self._window.intersect(interval)
        if window is None:
            return 0.0
        return self.base.interval_first_moment(window) / self._mass

    def mode(self) -> float:
        m = self.base.mode()
        if self._window.contains(m):
            return m
        return self.quantile(0.5)

    def to_spec(self) -> dict:
        return {
            "family": "restricted",
            "base": self.base.to_spec(),
            "interval": self.interval.to_json(),
        }

    def __repr__(self) -> str:
        return f"Restricted({self.base!r}, {self.interval})"


class TiltedDensity(Density):
    """Normalized pdf**exponent of a base density, evaluated numerically."""

    def __init__(self, base: Density, exponent: float):
        if exponent <= 0.0:
            raise DomainError(f"tilt exponent must be positive, got {exponent}")
        normalizer = base.power_integral(exponent)
        if not math.isfinite(normalizer) or normalizer <= 0.0:
            raise InfiniteIntegralError(
                f"tilted normalizer diverges (exponent {exponent})"
            )
        self.base = base
        self.exponent = exponent
        self._normalizer = normalizer
        self.weakly_unimodal = base.weakly_unimodal
        self._check_normalization()

    @property
    def support(self) -> Interval:
        return self.base.support

    def pdf(self, x: float) -> float:
        g = self.base.pdf(x)
        return g**self.exponent / self._normalizer if g > 0.0 else 0.0

    def logpdf(self, x: float) -> float:
        lp = self.base.logpdf(x)
        if lp == -math.inf:
            return -math.inf
        return self.exponent * lp - math.log(self._normalizer)

    def cdf(self, x: float) -> float:
        if x <= self.support.lo:
            return 0.0
        if x >= self.support.hi:
            return 1.0
        below = self.base.partial_power_integral(self.exponent, Interval(-math.inf, x))
        return min(1.0, below / self._normalizer)

    def power_integral(self, beta: float) -> float:
        if beta <= 0.0:
            raise DomainError(f"power_integral requires beta > 0, got {beta}")
        return self._normalizer ** (-beta) * self.base.power_integral(self.exponent * beta)

    def partial_power_integral(self, beta: float, interval: Interval) -> float:
        return self._normalizer ** (-beta) * self.base.partial_power_integral(
            self.exponent * beta, interval
        )

    def _tilt_closed(self, beta: float) -> Density:
        return self.base.tilt(self.exponent * beta)

    def mode(self) -> float:
        return self.base.mode()

    def to_spec(self) -> dict:
        return {
            "family": "tilted",
            "base": self.base.to_spec(),
            "beta": self.exponent,
        }

    def __repr__(self) -> str:
        return f"Tilted({self.base!r}, beta={self.exponent})"


# --- weak unimodality -----------------------------------------------------


@dataclass(frozen=True)
class UnimodalityReport:
    passed: bool
    failing_level: float | None
    levels_checked: int


def check_weak_unimodality(
    d: Density,
    level_grid_size: int = 32,
    x_grid_size: int = 4096,
) -> UnimodalityReport:
    """Grid check that sampled level sets {pdf >= l} are single intervals.

    Diagnostic only: level sets are sampled on a log grid below the maximum
    pdf value seen on a dense grid over the (truncated) support.
    """
    if level_grid_size < 1:
        raise DomainError("level_grid_size must be positive")
    window = quadrature.truncate_support(d, 1e-9)
    xs = np.linspace(window.lo, window.hi, x_grid_size + 2)[1:-1]
    vals = np.array([d.pdf(float(x)) for x in xs])
    vmax = float(vals.max())
    if vmax <= 0.0:
        return UnimodalityReport(False, None, 0)
    levels = np.geomspace(vmax * 1e-6, vmax * (1.0 - 1e-9), level_grid_size)
    for level in levels:
        idx = np.flatnonzero(vals >= level)
        if idx.size == 0:
            continue
        if idx[-1] - idx[0] + 1 != idx.size:
            return UnimodalityReport(False, float(level), level_grid_size)
    return UnimodalityReport(True, None, level_grid_size)


# --- JSON specs -------------------------------------------------------------


def density_from_spec(spec: dict) -> Density:
    """Build a density from its JSON object form.

    Examples: {"family": "gaussian", "mean": 0.0, "sigma": 1.0},
    {"family": "uniform", "a": 0.0, "b": 1.0},
    {"family": "restricted", "base": {...}, "interval": [0.0, 0.5]}.
    """
    if not isinstance(spec, dict):
        raise ConfigError(f"density spec must be an object, got {type(spec).__name__}")
    try:
        family = str(spec["family"]).lower()
    except KeyError:
        raise ConfigError("density spec is missing the 'family' field") from None
    try:
        if family == "uniform":
            return Uniform(float(spec["a"]), float(spec["b"]))
        if family in ("gaussian", "normal"):
            return Gaussian(float(spec.get("mean", 0.0)), float(spec["sigma"]))
        if family == "laplacian":
            return Laplacian(float(spec.get("mean", 0.0)), float(spec["scale"]))
        if family == "exponential":
            return Exponential(float(spec["rate"]), float(spec.get("shift", 0.0)))
        if family == "piecewise_linear":
            return PiecewiseLinear(spec["knots"])
        if family == "restricted":
            base = density_from_spec(spec["base"])
            return base.restrict(Interval.from_json(spec["interval"]))
        if family == "tilted":
            return density_from_spec(spec["base"]).tilt(float(spec["beta"]))
        if family == "point_density_of":
            alpha, r = float(spec["alpha"]), float(spec["r"])
            if not (0.0 <= alpha < 1.0 and r > 1.0):
                raise ConfigError(
                    f"point_density_of requires alpha in [0,1) and r > 1, "
                    f"got alpha={alpha}, r={r}"
                )
            beta2 = (1.0 - alpha + r) / (1.0 - alpha)
            return density_from_spec(spec["base"]).tilt(1.0 / beta2)
    except KeyError as exc:
        raise ConfigError(
            f"density family '{family}' is missing required field {exc.args[0]!r}"
        ) from None
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid density spec for family '{family}': {exc}") from None
    raise ConfigError(f"unknown density family '{spec['family']}'")
