"""Companding construction of asymptotically optimal quantizer sequences.

Breakpoints are the k/n quantiles of a point density h; codepoints sit at the
odd quantiles (2k-1)/(2n), i.e. at cell midpoints in the companded domain.
The midpoint rule is what makes the uniform-source normalized distortion hit
the cell constant 1/(2^r (1+r)) exactly at every n.
"""

from __future__ import annotations

import math

from .density import Density, TAIL_MASS
from .errors import DegenerateCellError, DomainError
from .intervals import Interval
from .quantizer import Quantizer, cell_probabilities
from . import quadrature


def optimal_point_density(d: Density, alpha: float, r: float) -> Density:
    """The point density proportional to pdf**(1/beta2) minimizing high-rate cost.

    At alpha = 0 this reduces to the classical fixed-rate point density
    proportional to pdf**(1/(1+r)).
    """
    if not 0.0 <= alpha < 1.0:
        raise DomainError(f"alpha must lie in [0, 1), got {alpha}")
    if r <= 1.0:
        raise DomainError(f"r must exceed 1, got {r}")
    beta2 = (1.0 - alpha + r) / (1.0 - alpha)
    return d.tilt(1.0 / beta2)


def build_compander(h: Density, n: int) -> Quantizer:
    """Quantizer with n cells of equal h-probability and midpoint codepoints."""
    if n < 2:
        raise DomainError(f"compander needs n >= 2 cells, got {n}")
    breakpoints = tuple(h.quantile(k / n) for k in range(1, n))
    codepoints = tuple(h.quantile((2 * k - 1) / (2 * n)) for k in range(1, n + 1))
    return Quantizer(breakpoints, codepoints)


def refine_codepoints(q: Quantizer, d: Density, r: float) -> Quantizer:
    """Replace each codepoint with the minimizer of its cell's distortion.

    For r = 2 the minimizer is the conditional mean (computed in closed form
    where the family has one); otherwise a golden-section search shrinks the
    bracket to 1e-10. Breakpoints are unchanged and distortion cannot increase.
    """
    if r < 1.0:
        raise DomainError(f"refine_codepoints requires r >= 1, got {r}")
    window = quadrature.truncate_support(d, TAIL_MASS)
    masses = cell_probabilities(q, d)
    new_codepoints = []
    for k in range(q.size):
        cell = q.cell(k)
        mass = masses[k]
        if mass <= 0.0:
            raise DegenerateCellError(f"cell {k} = {cell} has zero probability")
        bounded = cell.intersect(window)
        if bounded is None:
            # all mass of this cell sits beyond the integration window
            raise DegenerateCellError(f"cell {k} = {cell} has no mass in {window}")
        if r == 2.0:
            c = d.interval_first_moment(bounded) / mass
        else:
            c = _golden_section(
                lambda c_: _cell_cost(d, r, bounded, c_), bounded.lo, bounded.hi
            )
        # keep strictly inside the open cell interior
        c = min(max(c, math.nextafter(cell.lo, cell.hi)), math.nextafter(cell.hi, cell.lo))
        new_codepoints.append(c)
    return Quantizer(q.breakpoints, tuple(new_codepoints))


def _cell_cost(d: Density, r: float, cell: Interval, c: float) -> float:
    def f(x: float) -> float:
        return abs(x - c) ** r * d.pdf(x)

    total = 0.0
    if cell.lo < c < cell.hi:
        total += quadrature.integrate(f, Interval(cell.lo, c), abs_tol=1e-16).value
        total += quadrature.integrate(f, Interval(c, cell.hi), abs_tol=1e-16).value
    else:
        total += quadrature.integrate(f, cell, abs_tol=1e-16).value
    return total


_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_section(fn, a: float, b: float, tol: float = 1e-10) -> float:
    c = b - _INV_PHI * (b - a)
    d_ = a + _INV_PHI * (b - a)
    fc, fd = fn(c), fn(d_)
    while b - a > tol:
        if fc < fd:
            b, d_, fd = d_, c, fc
            c = b - _INV_PHI * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d_, fd
            d_ = a + _INV_PHI * (b - a)
            fd = fn(d_)
    return 0.5 * (a + b)
