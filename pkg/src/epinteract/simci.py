"""Simulation-based percentile confidence intervals for the interaction
measures.

Parameter vectors are drawn from N(pi_hat, Sigma_hat) using the fitted
covariance; each draw is pushed through the measure pipeline and interval
endpoints are read off the empirical quantiles. Randomness is counter-based
(Philox keyed by seed, countered by draw index) so serial and parallel
evaluation give bit-identical draws.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np

from .data import CovariateDistribution
from .fitting import FitResult
from .measures import MEASURE_IDS, batch_measures, measure_set
from .model import ModelSpec

__all__ = [
    "SimulationConfig",
    "IntervalEstimate",
    "SimulationResult",
    "cholesky",
    "draw_parameters",
    "simulate",
    "percentile_interval",
    "histogram",
    "NotPositiveSemiDefiniteError",
]

JITTERS = (0.0, 1e-12, 1e-11, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6)


class NotPositiveSemiDefiniteError(np.linalg.LinAlgError):
    """Covariance could not be factorized even with maximal jitter."""


@dataclass(frozen=True)
class SimulationConfig:
    n_draws: int = 1000
    seed: int = 0
    levels: tuple[float, ...] = (0.50, 0.95)
    covariance_choice: str = "robust"

    def __post_init__(self):
        if self.n_draws < 2:
            raise ValueError("n_draws must be >= 2")
        if not all(0.0 < lv < 1.0 for lv in self.levels):
            raise ValueError("levels must lie strictly inside (0, 1)")
        if any(b <= a for a, b in zip(self.levels, self.levels[1:])):
            raise ValueError("levels must be strictly increasing")
        if self.covariance_choice not in ("robust", "model_based"):
            raise ValueError(
                "covariance_choice must be 'robust' or 'model_based'"
            )


@dataclass(frozen=True, eq=False)
class IntervalEstimate:
    measure_id: str
    point: float
    draws: np.ndarray  # sorted ascending
    endpoints: dict[float, tuple[float, float]]


@dataclass(frozen=True, eq=False)
class SimulationResult:
    intervals: dict[str, IntervalEstimate]
    n_clamped_draws: int
    jitter: float

    def __getitem__(self, measure_id: str) -> IntervalEstimate:
        return self.intervals[measure_id]


def cholesky(sigma):
    """Lower-triangular factor of sigma, with escalating diagonal jitter if
    the plain factorization fails. Returns (L, jitter_used)."""
    sigma = np.asarray(sigma, dtype=float)
    if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1]:
        raise ValueError("sigma must be square")
    if not np.allclose(sigma, sigma.T, atol=1e-8):
        raise ValueError("sigma must be symmetric")
    if not sigma.any():
        return np.zeros_like(sigma), 0.0  # degenerate: no parameter uncertainty
    eye = np.eye(sigma.shape[0])
    for jitter in JITTERS:
        try:
            L = np.linalg.cholesky(sigma + jitter * eye)
            return L, jitter
        except np.linalg.LinAlgError:
            continue
    raise NotPositiveSemiDefiniteError(
        "covariance is not positive semi-definite within maximal jitter 1e-6"
    )


def _standard_normals(seed: int, draw_index: int, k: int) -> np.ndarray:
    # one Philox counter block per draw; determinism depends only on
    # (seed, draw_index), never on evaluation order
    bits = np.random.Philox(key=seed, counter=[0, 0, draw_index, 0])
    return np.random.Generator(bits).standard_normal(k)


def draw_parameters(fit: FitResult, config: SimulationConfig, draw_index: int,
                    _L=None) -> np.ndarray:
    """One deterministic draw from N(coefficients, selected covariance)."""
    if not 0 <= draw_index < config.n_draws:
        raise ValueError(f"draw_index {draw_index} outside [0, {config.n_draws})")
    if _L is None:
        sigma = (
            fit.cov_robust if config.covariance_choice == "robust" else fit.cov_model
        )
        _L, _ = cholesky(sigma)
    u = _standard_normals(config.seed, draw_index, len(fit.coefficients))
    return fit.coefficients + _L @ u


def percentile_interval(draws, level: float):
    """Equal-tailed empirical interval with linear order-statistic
    interpolation."""
    draws = np.asarray(draws, dtype=float)
    if draws.size < 2:
        raise ValueError("need at least two draws for a percentile interval")
    if not 0.0 < level < 1.0:
        raise ValueError("level must lie in (0, 1)")
    lo, hi = np.quantile(draws, [(1.0 - level) / 2.0, (1.0 + level) / 2.0])
    return float(lo), float(hi)


def histogram(draws, n_bins: int):
    """Equal-width bins over [min, max]; rightmost bin is closed. Returns a
    list of (left, right, count)."""
    draws = np.asarray(draws, dtype=float)
    if n_bins < 1:
        raise ValueError("n_bins must be >= 1")
    lo, hi = float(draws.min()), float(draws.max())
    if hi <= lo:
        hi = lo + 1e-12  # degenerate range rule
    counts, edges = np.histogram(draws, bins=n_bins, range=(lo, hi))
    return [
        (float(edges[i]), float(edges[i + 1]), int(counts[i]))
        for i in range(n_bins)
    ]


def simulate(fit: FitResult, spec: ModelSpec, dist: CovariateDistribution,
             config: SimulationConfig, covariate_names=None) -> SimulationResult:
    """Approximate sampling distribution of every measure, from one shared
    stream of parameter draws."""
    if not fit.converged:
        raise ValueError("cannot simulate from a non-converged fit")
    sigma = (
        fit.cov_robust if config.covariance_choice == "robust" else fit.cov_model
    )
    L, jitter = cholesky(sigma)
    k = len(fit.coefficients)
    U = np.empty((config.n_draws, k))
    for i in range(config.n_draws):
        U[i] = _standard_normals(config.seed, i, k)
    draws = fit.coefficients + U @ L.T

    values, n_clamped = batch_measures(draws, spec, dist, covariate_names)
    point = measure_set(fit.coefficients, spec, dist, covariate_names).as_dict()

    intervals = {}
    for mid in MEASURE_IDS:
        sorted_draws = np.sort(values[mid])
        endpoints = {
            level: percentile_interval(sorted_draws, level)
            for level in config.levels
        }
        intervals[mid] = IntervalEstimate(
            measure_id=mid,
            point=point[mid],
            draws=sorted_draws,
            endpoints=endpoints,
        )
    return SimulationResult(
        intervals=intervals, n_clamped_draws=n_clamped, jitter=jitter
    )


def export_draws_csv(result: SimulationResult, target) -> None:
    """Write all sorted draws as CSV with columns measure_id, draw_index,
    value."""
    def _write(fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["measure_id", "draw_index", "value"])
        for mid in MEASURE_IDS:
            for i, v in enumerate(result[mid].draws):
                w.writerow([mid, i, repr(float(v))])

    if hasattr(target, "write"):
        _write(target)
    else:
        with open(target, "w", newline="", encoding="utf-8") as fh:
            _write(fh)


def summary_dict(result: SimulationResult) -> dict:
    """JSON-ready summary: point estimates, endpoints per level and
    diagnostics."""
    return {
        "measures": {
            mid: {
                "point": result[mid].point,
                "intervals": {
                    f"{level:g}": list(result[mid].endpoints[level])
                    for level in result[mid].endpoints
                },
            }
            for mid in MEASURE_IDS
        },
        "diagnostics": {
            "n_clamped_draws": result.n_clamped_draws,
            "cholesky_jitter": result.jitter,
        },
    }


def export_summary_json(result: SimulationResult, target) -> None:
    payload = json.dumps(summary_dict(result), indent=2, sort_keys=True)
    if hasattr(target, "write"):
        target.write(payload + "\n")
    else:
        with open(target, "w", encoding="utf-8") as fh:
            fh.write(payload + "\n")
