"""Quantizers over interval cells, with exact entropy and distortion evaluation.

A quantizer with m codepoints partitions the line into half-open cells
(-inf, b1], (b1, b2], ..., (b_{m-1}, +inf); a value sitting exactly on a
breakpoint maps to the cell on its left. Distortion integrals run per cell
over the quantile-truncated support, split at the codepoint where the
integrand has its kink.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .density import Density, TAIL_MASS
from .errors import DomainError, EmptyConditioningError
from .intervals import Interval
from . import quadrature

_ALPHA_LIMIT_EPS = 1e-6  # alpha this close to an endpoint uses the limit formula


@dataclass(frozen=True)
class Quantizer:
    breakpoints: tuple[float, ...]
    codepoints: tuple[float, ...]

    def __post_init__(self):
        bps, cps = self.breakpoints, self.codepoints
        if len(cps) < 2 or len(bps) != len(cps) - 1:
            raise DomainError(
                f"need m >= 2 codepoints and m-1 breakpoints, got {len(cps)} and {len(bps)}"
            )
        if any(b1 >= b2 for b1, b2 in zip(bps, bps[1:])):
            raise DomainError("breakpoints must be strictly increasing")
        if any(c1 >= c2 for c1, c2 in zip(cps, cps[1:])):
            raise DomainError("codepoints must be strictly increasing")
        edges = (-math.inf, *bps, math.inf)
        for k, c in enumerate(cps):
            if not edges[k] < c < edges[k + 1]:
                raise DomainError(
                    f"codepoint {c} is not interior to cell ({edges[k]}, {edges[k + 1]}]"
                )

    @property
    def size(self) -> int:
        return len(self.codepoints)

    def cell(self, k: int) -> Interval:
        edges = (-math.inf, *self.breakpoints, math.inf)
        return Interval(edges[k], edges[k + 1])

    def cell_index(self, x: float) -> int:
        return bisect_left(self.breakpoints, x)

    def quantize(self, x: float) -> float:
        return self.codepoints[self.cell_index(x)]

    def codepoint_count_in(self, interval: Interval) -> int:
        return sum(1 for c in self.codepoints if interval.contains(c))

    def to_json(self) -> dict:
        return {"breakpoints": list(self.breakpoints), "codepoints": list(self.codepoints)}

    @classmethod
    def from_json(cls, obj: dict) -> "Quantizer":
        return cls(tuple(obj["breakpoints"]), tuple(obj["codepoints"]))


# --- probability vectors and Renyi entropy ---------------------------------


def renyi_entropy_vec(p: Sequence[float], alpha: float) -> float:
    """Renyi entropy of order alpha in [0, 1] of a probability vector.

    Orders within 1e-6 of the endpoints use the limit formulas (log of the
    number of positive entries at 0, Shannon entropy at 1) since the direct
    expression degenerates there.
    """
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"alpha must lie in [0, 1], got {alpha}")
    arr = np.asarray(p, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise DomainError("probability vector must be a nonempty 1-d sequence")
    if np.any(arr < -1e-12):
        raise DomainError("probability vector has negative entries")
    total = float(arr.sum())
    if abs(total - 1.0) > 1e-9:
        raise DomainError(f"probability vector sums to {total!r}, expected 1 within 1e-9")
    arr = np.clip(arr, 0.0, None)
    pos = arr[arr > 0.0]
    if alpha <= _ALPHA_LIMIT_EPS:
        return math.log(pos.size)
    if alpha >= 1.0 - _ALPHA_LIMIT_EPS:
        return float(-np.sum(pos * np.log(pos)))
    return math.log(float(np.sum(pos**alpha))) / (1.0 - alpha)


def power_sum(p: Sequence[float], alpha: float) -> float:
    """Sum of p_i**alpha with the 0**0 := 0 convention."""
    arr = np.asarray(p, dtype=float)
    pos = arr[arr > 0.0]
    if alpha == 0.0:
        return float(pos.size)
    return float(np.sum(pos**alpha))


def cell_probabilities(q: Quantizer, d: Density) -> np.ndarray:
    """Source probability of every cell, in cell order."""
    masses = np.empty(q.size)
    for k in range(q.size):
        masses[k] = d.interval_mass(q.cell(k))
    return masses


def quantizer_entropy(q: Quantizer, d: Density, alpha: float) -> float:
    """Renyi entropy of order alpha of the quantizer output."""
    return renyi_entropy_vec(cell_probabilities(q, d), alpha)


# --- distortion --------------------------------------------------------------


def _piece_distortion(d: Density, r: float, lo: float, hi: float, c: float) -> float:
    """Integral of |x - c|^r pdf over (lo, hi), split at the kink."""

    def f(x: float) -> float:
        return abs(x - c) ** r * d.pdf(x)

    total = 0.0
    if lo < c < hi:
        total += quadrature.integrate(f, Interval(lo, c), abs_tol=1e-16).value
        total += quadrature.integrate(f, Interval(c, hi), abs_tol=1e-16).value
    else:
        total += quadrature.integrate(f, Interval(lo, hi), abs_tol=1e-16).value
    return total


def cell_distortions(
    q: Quantizer,
    d: Density,
    r: float,
    region: Interval | Sequence[Interval] | None = None,
) -> np.ndarray:
    """Per-cell distortion contributions, optionally restricted to a region.

    The region may be one interval or several disjoint ones; integration is
    clipped to the truncated support of the density.
    """
    if r < 1.0:
        raise DomainError(f"distortion requires r >= 1, got {r}")
    if region is None:
        parts: list[Interval] = [quadrature.truncate_support(d, TAIL_MASS)]
    else:
        if isinstance(region, Interval):
            region = [region]
        window = quadrature.truncate_support(d, TAIL_MASS)
        parts = [p for p in (window.intersect(iv) for iv in region) if p is not None]
    out = np.zeros(q.size)
    for k in range(q.size):
        cell = q.cell(k)
        c = q.codepoints[k]
        for part in parts:
            piece = cell.intersect(part)
            if piece is not None:
                out[k] += _piece_distortion(d, r, piece.lo, piece.hi, c)
    return out


def distortion(q: Quantizer, d: Density, r: float) -> float:
    """Expected |X - q(X)|^r under the density."""
    return float(math.fsum(cell_distortions(q, d, r)))


def _region_masses(q: Quantizer, d: Density, region: Sequence[Interval]) -> np.ndarray:
    masses = np.zeros(q.size)
    for k in range(q.size):
        cell = q.cell(k)
        for iv in region:
            piece = cell.intersect(iv)
            if piece is not None:
                masses[k] += d.interval_mass(piece)
    return masses


@dataclass(frozen=True)
class RestrictedMetrics:
    entropy_restricted: float
    distortion_restricted: float
    entropy_power_sum: float
    restricted_power_sum: float


def restricted_metrics(
    q: Quantizer,
    d: Density,
    interval: Interval,
    alpha: float,
    r: float,
) -> RestrictedMetrics:
    """Entropy and distortion of the quantizer under conditioning on an interval.

    Also returns the raw power sums over all cells and over cell-interval
    intersections, which drive the entropy-contribution ratios.
    """
    return region_metrics(q, d, (interval,), alpha, r)


def region_metrics(
    q: Quantizer,
    d: Density,
    region: Sequence[Interval],
    alpha: float,
    r: float,
) -> RestrictedMetrics:
    """Same as restricted_metrics for a union of disjoint intervals."""
    mass_total = math.fsum(d.interval_mass(iv) for iv in region)
    if mass_total <= 0.0:
        raise EmptyConditioningError("conditioning region has zero probability")
    masses = cell_probabilities(q, d)
    masses_in = _region_masses(q, d, region)
    conditional = masses_in / mass_total
    # renormalize away the tiny cdf-difference drift before validation
    conditional = conditional / conditional.sum()
    entropy_restricted = renyi_entropy_vec(conditional, alpha)
    dist_in = float(math.fsum(cell_distortions(q, d, r, region=region)))
    return RestrictedMetrics(
        entropy_restricted=entropy_restricted,
        distortion_restricted=dist_in / mass_total,
        entropy_power_sum=power_sum(masses, alpha),
        restricted_power_sum=power_sum(masses_in, alpha),
    )
