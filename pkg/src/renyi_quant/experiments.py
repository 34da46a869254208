"""Rate-sweep harness: builds compander sequences, measures empirical entropy
and distortion quantities, compares them with the closed-form limits, and
emits deterministic CSV + JSON reports.

The limit theorems only assert behavior as the rate grows, so convergence is
operationalized as a last-point tolerance plus a trend check: smooth
quantities (normalized distortion, sanity series) must not increase their
deviation over the final four grid points, while interval-sliced quantities
oscillate inside a shrinking envelope and are only required to end closer to
the limit than they started.
"""

from __future__ import annotations

import json
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Mapping, Sequence

from .compander import build_compander, optimal_point_density, refine_codepoints
from .density import Density, check_weak_unimodality, density_from_spec
from .errors import ConfigError, HypothesisError, InfiniteIntegralError, RenyiQuantError
from .intervals import Interval
from .quantizer import (
    Quantizer,
    cell_distortions,
    cell_probabilities,
    power_sum,
    quantizer_entropy,
    region_metrics,
    renyi_entropy_vec,
    restricted_metrics,
)
from . import theory

DEFAULT_N_GRID = tuple(2**k for k in range(2, 13))
TREND_WINDOW = 4           # rate points over which deviations must not increase
TREND_FLOOR = 1e-9         # deviations below this count as converged noise
THREADS_ENV_VAR = "RENYI_QUANT_THREADS"

EXPERIMENTS = ("asymptotics", "entropy-density", "distortion-density", "mismatch", "sanity")

_CONFIG_KEYS = {
    "name",
    "source",
    "mismatch_source",
    "alpha",
    "r",
    "moment_slack",
    "interval",
    "n_grid",
    "refine_codepoints",
    "sanity_points",
    "tolerances",
}


@dataclass(frozen=True)
class ExperimentConfig:
    source: dict
    alpha: float
    r: float
    name: str = "experiment"
    mismatch_source: dict | None = None
    moment_slack: float = 1.0
    interval: Interval | None = None
    n_grid: tuple[int, ...] = DEFAULT_N_GRID
    refine_codepoints: bool = False
    sanity_points: tuple[float, ...] | None = None
    tolerances: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if not 0.0 <= self.alpha < 1.0:
            raise ConfigError(f"field 'alpha' must lie in [0, 1), got {self.alpha}")
        if self.r <= 1.0:
            raise ConfigError(f"field 'r' must exceed 1, got {self.r}")
        if self.moment_slack <= 0.0:
            raise ConfigError(f"field 'moment_slack' must be positive, got {self.moment_slack}")
        if len(self.n_grid) == 0 or any(n < 2 for n in self.n_grid):
            raise ConfigError("field 'n_grid' must list integers >= 2")
        if any(a >= b for a, b in zip(self.n_grid, self.n_grid[1:])):
            raise ConfigError("field 'n_grid' must be strictly increasing")

    def source_density(self) -> Density:
        return density_from_spec(self.source)

    def mismatch_density(self) -> Density:
        if self.mismatch_source is None:
            raise ConfigError("field 'mismatch_source' is required for mismatch runs")
        return density_from_spec(self.mismatch_source)

    def tolerance(self, key: str, default: float) -> float:
        return float(self.tolerances.get(key, default))

    @classmethod
    def from_dict(cls, obj: dict) -> "ExperimentConfig":
        if not isinstance(obj, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(obj) - _CONFIG_KEYS
        if unknown:
            raise ConfigError(f"unknown config field {sorted(unknown)[0]!r}")
        if "source" not in obj:
            raise ConfigError("field 'source' is required")
        if "alpha" not in obj:
            raise ConfigError("field 'alpha' is required")
        if "r" not in obj:
            raise ConfigError("field 'r' is required")
        try:
            interval = (
                Interval.from_json(obj["interval"]) if obj.get("interval") is not None else None
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"field 'interval' is invalid: {exc}") from None
        try:
            return cls(
                source=dict(obj["source"]),
                alpha=float(obj["alpha"]),
                r=float(obj["r"]),
                name=str(obj.get("name", "experiment")),
                mismatch_source=(
                    dict(obj["mismatch_source"])
                    if obj.get("mismatch_source") is not None
                    else None
                ),
                moment_slack=float(obj.get("moment_slack", 1.0)),
                interval=interval,
                n_grid=tuple(int(n) for n in obj.get("n_grid", DEFAULT_N_GRID)),
                refine_codepoints=bool(obj.get("refine_codepoints", False)),
                sanity_points=(
                    tuple(float(p) for p in obj["sanity_points"])
                    if obj.get("sanity_points") is not None
                    else None
                ),
                tolerances={
                    str(k): float(v) for k, v in dict(obj.get("tolerances", {})).items()
                },
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid config value: {exc}") from None

    @classmethod
    def from_json(cls, path: str | Path) -> "ExperimentConfig":
        path = Path(path)
        try:
            raw = json.loads(path.read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
        cfg = cls.from_dict(raw)
        if cfg.name == "experiment":
            cfg = replace(cfg, name=path.stem)
        return cfg


@dataclass
class ConvergenceReport:
    experiment: str
    name: str
    columns: tuple[str, ...]
    rows: list[dict]
    limits: dict
    flags: dict
    diagnostics: dict
    passed: bool

    def __post_init__(self):
        for row in self.rows:
            ratio = row.get("ratio")
            if ratio is not None and not (math.isfinite(ratio) and ratio > 0.0):
                raise RenyiQuantError(
                    f"ratio to the theoretical limit must be finite and positive, "
                    f"got {ratio!r} at n={row.get('n')}"
                )

    def to_csv_text(self) -> str:
        lines = [",".join(self.columns)]
        for row in self.rows:
            lines.append(",".join(_fmt(row[c]) for c in self.columns))
        return "\n".join(lines) + "\n"

    def write_csv(self, path: str | Path) -> None:
        Path(path).write_text(self.to_csv_text())

    def summary_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "name": self.name,
            "limits": self.limits,
            "flags": self.flags,
            "diagnostics": self.diagnostics,
            "passed": self.passed,
        }

    def write_summary(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.summary_dict(), indent=2, sort_keys=True) + "\n"
        )


def _fmt(x) -> str:
    if isinstance(x, bool):
        return str(x)
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".17g")


def _thread_budget() -> int:
    raw = os.environ.get(THREADS_ENV_VAR)
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        warnings.warn(f"ignoring malformed {THREADS_ENV_VAR}={raw!r}", stacklevel=2)
        return 1


def _map_rate_points(fn: Callable[[int], dict], n_grid: Sequence[int]) -> list[dict]:
    workers = _thread_budget()
    if workers <= 1:
        return [fn(n) for n in n_grid]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, n_grid))


def _deviations_nonincreasing(values: Sequence[float], target: float = 1.0) -> bool:
    """True when |value - target| is nonincreasing over the trailing window."""
    devs = [max(abs(v - target), TREND_FLOOR) for v in values]
    tail = devs[-TREND_WINDOW:]
    return all(b <= a * (1.0 + 1e-9) for a, b in zip(tail, tail[1:]))


def _deviation_shrinks(values: Sequence[float], target: float = 1.0) -> bool:
    """True when the final deviation from the target is below the initial one.

    Interval-sliced quantities oscillate inside a shrinking envelope rather
    than decreasing monotonically, so only first-vs-last is compared.
    """
    first = max(abs(values[0] - target), TREND_FLOOR)
    last = max(abs(values[-1] - target), TREND_FLOOR)
    return last <= first * (1.0 + 1e-9)


def _values_increasing(values: Sequence[float]) -> bool:
    tail = values[-TREND_WINDOW:]
    return all(b >= a * (1.0 - 1e-9) for a, b in zip(tail, tail[1:]))


def _hypothesis_checks(cfg: ExperimentConfig, need_mismatch: bool = False) -> dict:
    """Weak unimodality, the r + delta moment, and (optionally) the f/g bound."""
    d = cfg.source_density()
    checks: dict = {}
    report = check_weak_unimodality(d)
    if not report.passed:
        raise HypothesisError(
            f"source density failed the weak-unimodality grid check "
            f"(level {report.failing_level})"
        )
    checks["weakly_unimodal"] = True
    try:
        checks["moment_r_plus_delta"] = d.absolute_moment(cfg.r + cfg.moment_slack)
    except InfiniteIntegralError as exc:
        raise HypothesisError(f"moment condition fails at order "
                              f"{cfg.r + cfg.moment_slack}: {exc}") from None
    if need_mismatch:
        f = cfg.mismatch_density()
        ratio = theory.check_density_ratio_bound(f, d)
        if not ratio.bounded:
            raise HypothesisError(
                f"density ratio f/g is unbounded near x = {ratio.argmax:.6g}"
            )
        checks["ratio_bound"] = ratio.max_ratio
    return checks


def _quantizer_for(cfg: ExperimentConfig, d: Density, n: int) -> Quantizer:
    h = optimal_point_density(d, cfg.alpha, cfg.r)
    q = build_compander(h, n)
    if cfg.refine_codepoints:
        q = refine_codepoints(q, d, cfg.r)
    return q


def _theorem_interval(cfg: ExperimentConfig, d: Density) -> Interval:
    if cfg.interval is None:
        raise ConfigError("field 'interval' is required for this experiment")
    if not cfg.interval.bounded:
        raise ConfigError("field 'interval' must be bounded for density experiments")
    mass = d.interval_mass(cfg.interval)
    if not 0.0 < mass < 1.0:
        raise HypothesisError(
            f"interval probability must lie strictly in (0,1), got {mass}"
        )
    return cfg.interval


# --- runners -----------------------------------------------------------------


def run_asymptotics(cfg: ExperimentConfig) -> ConvergenceReport:
    """Normalized distortion e^{rH} D against the quantization coefficient."""
    checks = _hypothesis_checks(cfg)
    d = cfg.source_density()
    q_coeff = theory.quantization_coefficient(d, cfg.alpha, cfg.r)
    params = theory.rate_params(cfg.alpha, cfg.r)

    def point(n: int) -> dict:
        q = _quantizer_for(cfg, d, n)
        entropy = quantizer_entropy(q, d, cfg.alpha)
        dist = float(math.fsum(cell_distortions(q, d, cfg.r)))
        normalized = math.exp(cfg.r * entropy) * dist
        return {
            "n": n,
            "H_alpha": entropy,
            "D": dist,
            "eRH_D": normalized,
            "ratio": normalized / q_coeff,
        }

    rows = _map_rate_points(point, cfg.n_grid)
    ratios = [row["ratio"] for row in rows]
    tol = cfg.tolerance("ratio", 0.05)
    flags = {
        "final_ratio_within_tolerance": abs(ratios[-1] - 1.0) <= tol,
        "deviation_nonincreasing": _deviations_nonincreasing(ratios),
    }
    return ConvergenceReport(
        experiment="asymptotics",
        name=cfg.name,
        columns=("n", "H_alpha", "D", "eRH_D", "ratio"),
        rows=rows,
        limits={"Q": q_coeff, "beta1": params.beta1, "beta2": params.beta2,
                "C_r": params.c_r},
        flags=flags,
        diagnostics={"hypothesis_checks": checks, "tolerance": tol},
        passed=all(flags.values()),
    )


def run_entropy_density(cfg: ExperimentConfig) -> ConvergenceReport:
    """Entropy contribution of an interval and of its complement."""
    checks = _hypothesis_checks(cfg)
    d = cfg.source_density()
    interval = _theorem_interval(cfg, d)
    alpha, r = cfg.alpha, cfg.r
    if alpha <= 0.0:
        raise ConfigError("entropy-density runs need alpha strictly inside (0, 1)")
    q_coeff = theory.quantization_coefficient(d, alpha, r)
    limit_1 = theory.entropy_density_limit(d, interval, alpha, r)
    mass_1 = d.interval_mass(interval)
    mass_2 = 1.0 - mass_1
    tilted_mass = limit_1 * mass_1**alpha
    limit_2 = (1.0 - tilted_mass) * mass_2 ** (-alpha)
    conditional = d.restrict(interval)
    q_conditional = theory.quantization_coefficient(conditional, alpha, r)
    complement = interval.complement()

    def point(n: int) -> dict:
        q = _quantizer_for(cfg, d, n)
        entropy = quantizer_entropy(q, d, alpha)
        dist = float(math.fsum(cell_distortions(q, d, r)))
        m1 = restricted_metrics(q, d, interval, alpha, r)
        m2 = region_metrics(q, d, complement, alpha, r)
        ratio_1 = math.exp((1.0 - alpha) * (m1.entropy_restricted - entropy))
        ratio_2 = math.exp((1.0 - alpha) * (m2.entropy_restricted - entropy))
        normalization = ratio_1 * mass_1**alpha + ratio_2 * mass_2**alpha
        restricted_nd = math.exp(r * m1.entropy_restricted) * m1.distortion_restricted
        partition_gap = abs(
            mass_1 * m1.distortion_restricted + mass_2 * m2.distortion_restricted - dist
        )
        normalized = math.exp(r * entropy) * dist
        return {
            "n": n,
            "H_alpha": entropy,
            "D": dist,
            "eRH_D": normalized,
            "ratio": normalized / q_coeff,
            "entropy_density_ratio_A1": ratio_1,
            "entropy_density_ratio_A2": ratio_2,
            "normalization": normalization,
            "restricted_eRH_D": restricted_nd,
            "restricted_ratio": restricted_nd / q_conditional,
            "partition_identity_gap": partition_gap,
        }

    rows = _map_rate_points(point, cfg.n_grid)
    last = rows[-1]
    tol_ratio = cfg.tolerance("ratio", 0.02)
    tol_norm = cfg.tolerance("normalization", 0.02)
    tol_restricted = cfg.tolerance("restricted_distortion", 0.05)
    flags = {
        "interval_ratio_within_tolerance": abs(
            last["entropy_density_ratio_A1"] - limit_1
        ) <= tol_ratio,
        "partition_normalization_ok": abs(last["normalization"] - 1.0) <= tol_norm,
        "restricted_distortion_ok": abs(last["restricted_ratio"] - 1.0) <= tol_restricted,
        "deviation_shrinks": _deviation_shrinks(
            [row["entropy_density_ratio_A1"] / limit_1 for row in rows]
        ),
    }
    diagnostics = {
        "hypothesis_checks": checks,
        "max_partition_identity_gap": max(row["partition_identity_gap"] for row in rows),
        "tolerances": {
            "ratio": tol_ratio,
            "normalization": tol_norm,
            "restricted_distortion": tol_restricted,
        },
    }
    return ConvergenceReport(
        experiment="entropy-density",
        name=cfg.name,
        columns=(
            "n", "H_alpha", "D", "eRH_D", "ratio",
            "entropy_density_ratio_A1", "entropy_density_ratio_A2",
            "normalization", "restricted_eRH_D", "restricted_ratio",
            "partition_identity_gap",
        ),
        rows=rows,
        limits={
            "Q": q_coeff,
            "entropy_density_limit_A1": limit_1,
            "entropy_density_limit_A2": limit_2,
            "interval_mass": mass_1,
            "tilted_mass": tilted_mass,
            "Q_conditional": q_conditional,
        },
        flags=flags,
        diagnostics=diagnostics,
        passed=all(flags.values()),
    )


def run_distortion_density(cfg: ExperimentConfig) -> ConvergenceReport:
    """Distortion contribution of an interval and the coincidence identity."""
    checks = _hypothesis_checks(cfg)
    d = cfg.source_density()
    interval = _theorem_interval(cfg, d)
    alpha, r = cfg.alpha, cfg.r
    if alpha <= 0.0:
        raise ConfigError("distortion-density runs need alpha strictly inside (0, 1)")
    q_coeff = theory.quantization_coefficient(d, alpha, r)
    params = theory.rate_params(alpha, r)
    tilted_mass = d.partial_power_integral(params.beta1, interval) / d.power_integral(
        params.beta1
    )
    mg_limit = theory.limit_distortion_measure(d, interval, alpha, r)
    complement = interval.complement()
    mass_1 = d.interval_mass(interval)
    mass_2 = 1.0 - mass_1

    def point(n: int) -> dict:
        q = _quantizer_for(cfg, d, n)
        entropy = quantizer_entropy(q, d, alpha)
        dist = float(math.fsum(cell_distortions(q, d, r)))
        dist_in = float(math.fsum(cell_distortions(q, d, r, region=interval)))
        m1 = restricted_metrics(q, d, interval, alpha, r)
        m2 = region_metrics(q, d, complement, alpha, r)
        share = dist_in / dist
        power_share = m1.restricted_power_sum / m1.entropy_power_sum
        mg_n = math.exp(r * entropy) * dist_in
        partition_gap = abs(
            mass_1 * m1.distortion_restricted + mass_2 * m2.distortion_restricted - dist
        )
        normalized = math.exp(r * entropy) * dist
        return {
            "n": n,
            "H_alpha": entropy,
            "D": dist,
            "eRH_D": normalized,
            "ratio": normalized / q_coeff,
            "distortion_share": share,
            "power_sum_share": power_share,
            "coincidence_ratio": share / power_share,
            "Mg_n": mg_n,
            "Mg_ratio": mg_n / mg_limit,
            "partition_identity_gap": partition_gap,
        }

    rows = _map_rate_points(point, cfg.n_grid)
    last = rows[-1]
    tol_share = cfg.tolerance("share", 0.02)
    tol_coincidence = cfg.tolerance("coincidence", 0.05)
    tol_mg = cfg.tolerance("mg", 0.05)
    flags = {
        "share_within_tolerance": abs(last["distortion_share"] - tilted_mass) <= tol_share,
        "coincidence_within_tolerance": abs(last["coincidence_ratio"] - 1.0)
        <= tol_coincidence,
        "limit_measure_within_tolerance": abs(last["Mg_ratio"] - 1.0) <= tol_mg,
        "deviation_shrinks": _deviation_shrinks(
            [row["distortion_share"] / tilted_mass for row in rows]
        ),
    }
    diagnostics = {
        "hypothesis_checks": checks,
        "max_partition_identity_gap": max(row["partition_identity_gap"] for row in rows),
        "tolerances": {"share": tol_share, "coincidence": tol_coincidence, "mg": tol_mg},
    }
    return ConvergenceReport(
        experiment="distortion-density",
        name=cfg.name,
        columns=(
            "n", "H_alpha", "D", "eRH_D", "ratio",
            "distortion_share", "power_sum_share", "coincidence_ratio",
            "Mg_n", "Mg_ratio", "partition_identity_gap",
        ),
        rows=rows,
        limits={
            "Q": q_coeff,
            "tilted_mass": tilted_mass,
            "Mg_limit": mg_limit,
            "interval_mass": mass_1,
        },
        flags=flags,
        diagnostics=diagnostics,
        passed=all(flags.values()),
    )


def run_mismatch(cfg: ExperimentConfig) -> ConvergenceReport:
    """Companders designed for the source density, evaluated under another."""
    checks = _hypothesis_checks(cfg, need_mismatch=True)
    g = cfg.source_density()
    f = cfg.mismatch_density()
    alpha, r = cfg.alpha, cfg.r
    if alpha <= 0.0:
        raise ConfigError("mismatch runs need alpha strictly inside (0, 1)")
    shift_limit = theory.mismatch_entropy_shift(g, f, alpha, r)
    dist_limit = theory.mismatch_distortion_limit(g, f, alpha, r)
    loss_limit = theory.mismatch_loss(g, f, alpha, r)
    q_f = theory.quantization_coefficient(f, alpha, r)
    q_g = theory.quantization_coefficient(g, alpha, r)

    def point(n: int) -> dict:
        q = _quantizer_for(cfg, g, n)
        h_mu = quantizer_entropy(q, g, alpha)
        h_nu = quantizer_entropy(q, f, alpha)
        d_nu = float(math.fsum(cell_distortions(q, f, r)))
        shift = math.exp((1.0 - alpha) * (h_nu - h_mu))
        normalized = math.exp(r * h_nu) * d_nu
        return {
            "n": n,
            "H_alpha": h_nu,
            "D": d_nu,
            "eRH_D": normalized,
            "ratio": normalized / dist_limit,
            "H_mu": h_mu,
            "mismatch_entropy_shift_empirical": shift,
            "shift_ratio": shift / shift_limit,
            "loss_empirical": normalized / q_f,
            "loss_ratio": (normalized / q_f) / loss_limit,
        }

    rows = _map_rate_points(point, cfg.n_grid)
    last = rows[-1]
    if "shift_abs" in cfg.tolerances:
        shift_ok = abs(
            last["mismatch_entropy_shift_empirical"] - shift_limit
        ) <= cfg.tolerance("shift_abs", 0.02)
    else:
        shift_ok = abs(last["shift_ratio"] - 1.0) <= cfg.tolerance("shift_rel", 0.05)
    flags = {
        "shift_within_tolerance": shift_ok,
        "distortion_within_tolerance": abs(last["ratio"] - 1.0)
        <= cfg.tolerance("distortion_rel", 0.05),
        "deviation_shrinks": _deviation_shrinks(
            [row["ratio"] for row in rows]
        ),
    }
    return ConvergenceReport(
        experiment="mismatch",
        name=cfg.name,
        columns=(
            "n", "H_alpha", "D", "eRH_D", "ratio", "H_mu",
            "mismatch_entropy_shift_empirical", "shift_ratio",
            "loss_empirical", "loss_ratio",
        ),
        rows=rows,
        limits={
            "mismatch_entropy_shift": shift_limit,
            "mismatch_distortion_limit": dist_limit,
            "mismatch_loss": loss_limit,
            "Q_mismatch_source": q_f,
            "Q_source": q_g,
        },
        flags=flags,
        diagnostics={"hypothesis_checks": checks, "tolerances": dict(cfg.tolerances)},
        passed=all(flags.values()),
    )


def run_sanity(cfg: ExperimentConfig) -> ConvergenceReport:
    """Vanishing cell probabilities and diverging restricted entropies."""
    checks = _hypothesis_checks(cfg)
    d = cfg.source_density()
    alpha, r = cfg.alpha, cfg.r
    if alpha <= 0.0:
        raise ConfigError("sanity runs need alpha strictly inside (0, 1)")
    if cfg.interval is not None:
        interval = _theorem_interval(cfg, d)
    else:
        interval = Interval(d.quantile(0.25), d.quantile(0.75))
    points = cfg.sanity_points
    if points is None:
        points = (d.quantile(0.5), d.mode())
    q_coeff = theory.quantization_coefficient(d, alpha, r)
    complement = interval.complement()
    point_cols = tuple(f"single_cell_ratio_p{i}" for i in range(len(points)))

    def point(n: int) -> dict:
        q = _quantizer_for(cfg, d, n)
        masses = cell_probabilities(q, d)
        total_power = power_sum(masses, alpha)
        entropy = renyi_entropy_vec(masses, alpha)
        dist = float(math.fsum(cell_distortions(q, d, r)))
        m1 = restricted_metrics(q, d, interval, alpha, r)
        m2 = region_metrics(q, d, complement, alpha, r)
        row = {
            "n": n,
            "H_alpha": entropy,
            "D": dist,
            "eRH_D": math.exp(r * entropy) * dist,
            "ratio": math.exp(r * entropy) * dist / q_coeff,
            "max_cell_probability": float(masses.max()),
            "H_restricted_A1": m1.entropy_restricted,
            "H_restricted_A2": m2.entropy_restricted,
        }
        for i, p in enumerate(points):
            mass_p = float(masses[q.cell_index(p)])
            row[point_cols[i]] = (mass_p**alpha / total_power) if mass_p > 0.0 else 0.0
        return row

    rows = _map_rate_points(point, cfg.n_grid)
    threshold = cfg.tolerance("single_cell", 0.05)
    entropy_floor = cfg.tolerance("restricted_entropy_min", 3.0)
    flags = {
        "max_cell_probability_decreasing": _deviations_nonincreasing(
            [row["max_cell_probability"] for row in rows], target=0.0
        ),
        "restricted_entropies_diverging": (
            _values_increasing([row["H_restricted_A1"] for row in rows])
            and _values_increasing([row["H_restricted_A2"] for row in rows])
            and rows[-1]["H_restricted_A1"] > entropy_floor
            and rows[-1]["H_restricted_A2"] > entropy_floor
        ),
    }
    for i in range(len(points)):
        series = [row[point_cols[i]] for row in rows]
        flags[f"single_cell_ratio_p{i}_vanishing"] = bool(
            _deviations_nonincreasing(series, target=0.0) and series[-1] < threshold
        )
    return ConvergenceReport(
        experiment="sanity",
        name=cfg.name,
        columns=(
            "n", "H_alpha", "D", "eRH_D", "ratio",
            "max_cell_probability", "H_restricted_A1", "H_restricted_A2",
            *point_cols,
        ),
        rows=rows,
        limits={"Q": q_coeff, "interval": interval.to_json(), "points": list(points)},
        flags=flags,
        diagnostics={"hypothesis_checks": checks},
        passed=all(flags.values()),
    )


RUNNERS: dict[str, Callable[[ExperimentConfig], ConvergenceReport]] = {
    "asymptotics": run_asymptotics,
    "entropy-density": run_entropy_density,
    "distortion-density": run_distortion_density,
    "mismatch": run_mismatch,
    "sanity": run_sanity,
}
