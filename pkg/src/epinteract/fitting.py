"""Maximum-likelihood fitting of grouped binomial counts with a logit link.

Newton-Raphson with step-halving on the grouped log-likelihood; covariance
comes in two flavours: the inverse observed information, and an
over-dispersion-adjusted version scaled by deviance/df (the quasi-binomial
adjustment). A raw independence-sandwich estimator is also available.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit, xlogy

__all__ = [
    "FitResult",
    "fit",
    "log_likelihood",
    "score",
    "observed_information",
    "robust_covariance",
    "sandwich_covariance",
    "deviance",
    "SingularDesignError",
]

SCORE_TOL = 1e-8
STEP_TOL = 1e-10
MAX_ITER = 100
MAX_HALVINGS = 30
# fitted probabilities this close to 0/1, or coefficients this large, at the
# iteration cap are treated as (quasi-)complete separation
SEPARATION_PROB = 1e-10
SEPARATION_COEF = 15.0


class SingularDesignError(np.linalg.LinAlgError):
    """Design matrix is rank deficient; `column` names an offending column."""

    def __init__(self, message, column=None):
        super().__init__(message)
        self.column = column


@dataclass(frozen=True)
class FitResult:
    coefficients: np.ndarray
    cov_model: np.ndarray
    cov_robust: np.ndarray
    log_likelihood: float
    iterations: int
    converged: bool
    dispersion: float
    message: str = ""


def log_likelihood(coefficients, design, successes, totals):
    """Grouped binomial log-likelihood (binomial coefficients omitted)."""
    p = expit(design @ coefficients)
    return float(np.sum(xlogy(successes, p) + xlogy(totals - successes, 1.0 - p)))


def score(coefficients, design, successes, totals):
    """Gradient of the log-likelihood: X' (s - n p)."""
    p = expit(design @ coefficients)
    return design.T @ (successes - totals * p)


def observed_information(coefficients, design, totals):
    """Negative Hessian at `coefficients`: X' W X with w_i = n_i p_i (1 - p_i)."""
    p = expit(design @ coefficients)
    w = totals * p * (1.0 - p)
    return (design * w[:, None]).T @ design


def deviance(coefficients, design, successes, totals):
    """Residual deviance against the saturated grouped model."""
    p = expit(design @ coefficients)
    mu = totals * p
    return float(
        2.0
        * np.sum(
            xlogy(successes, successes)
            - xlogy(successes, mu)
            + xlogy(totals - successes, totals - successes)
            - xlogy(totals - successes, totals - mu)
        )
    )


def robust_covariance(coefficients, design, successes, totals):
    """Over-dispersion-adjusted covariance: (deviance / df) * information^-1.

    df is the number of cells minus the number of parameters; with no
    residual degrees of freedom the saturated fit has zero residual deviance
    and the adjusted covariance is zero.
    """
    info = observed_information(coefficients, design, totals)
    inv = _invert_information(info, design)
    df = design.shape[0] - design.shape[1]
    if df <= 0:
        return 0.0 * inv
    phi = deviance(coefficients, design, successes, totals) / df
    return phi * inv


def sandwich_covariance(coefficients, design, successes, totals):
    """Independence sandwich A^-1 B A^-1 with per-cell scores
    U_i = (s_i - n_i p_i) x_i."""
    info = observed_information(coefficients, design, totals)
    inv = _invert_information(info, design)
    p = expit(design @ coefficients)
    U = (successes - totals * p)[:, None] * design
    return inv @ (U.T @ U) @ inv


def _check_rank(design):
    """Raise SingularDesignError naming a redundant column if rank deficient."""
    n, k = design.shape
    if n < k:
        raise SingularDesignError(
            f"design has {n} rows but {k} columns", column=None
        )
    # QR with pivoting: the first rank-deficient pivot names the column that
    # is linearly dependent on its predecessors
    from scipy.linalg import qr

    _, R, piv = qr(design, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    tol = max(design.shape) * np.finfo(float).eps * (diag[0] if diag.size else 0.0)
    bad = np.where(diag <= tol)[0]
    if bad.size:
        col = int(piv[bad[0]])
        raise SingularDesignError(
            f"design matrix is rank deficient: column {col} is linearly "
            "dependent on the others",
            column=col,
        )


def _invert_information(info, design):
    try:
        return np.linalg.inv(info)
    except np.linalg.LinAlgError:
        _check_rank(design)
        raise SingularDesignError("observed information is singular")


def fit(design, successes, totals, link="logit") -> FitResult:
    """Maximize the grouped binomial log-likelihood by Newton-Raphson.

    Non-convergence (including quasi-complete separation) is reported via
    converged=False, never silently.
    """
    if link != "logit":
        raise ValueError(f"unsupported link {link!r}")
    design = np.asarray(design, dtype=float)
    successes = np.asarray(successes, dtype=float)
    totals = np.asarray(totals, dtype=float)
    if design.ndim != 2:
        raise ValueError("design must be a 2-D matrix")
    if np.any(totals < 1) or np.any(successes < 0) or np.any(successes > totals):
        raise ValueError("counts must satisfy 0 <= successes <= totals, totals >= 1")
    _check_rank(design)

    n_rows, n_params = design.shape
    beta = np.zeros(n_params)
    # start the intercept (a constant column, if any) at the pooled logit
    const_cols = np.where(np.all(design == 1.0, axis=0))[0]
    if const_cols.size:
        pooled = successes.sum() / totals.sum()
        beta[const_cols[0]] = float(
            np.clip(np.log(pooled / (1.0 - pooled)) if 0 < pooled < 1 else 0.0, -10, 10)
        )

    ll = log_likelihood(beta, design, successes, totals)
    converged = False
    message = "iteration cap reached"
    iterations = 0
    for iterations in range(1, MAX_ITER + 1):
        g = score(beta, design, successes, totals)
        if np.max(np.abs(g)) < SCORE_TOL:
            converged = True
            message = "score criterion met"
            iterations -= 1
            break
        info = observed_information(beta, design, totals)
        try:
            step = np.linalg.solve(info, g)
        except np.linalg.LinAlgError:
            message = "singular information matrix during iteration"
            break
        # step-halving keeps the log-likelihood non-decreasing
        scale = 1.0
        for _ in range(MAX_HALVINGS):
            cand = beta + scale * step
            cand_ll = log_likelihood(cand, design, successes, totals)
            if cand_ll >= ll - 1e-12:
                break
            scale *= 0.5
        else:
            message = "step-halving failed to improve the log-likelihood"
            break
        delta = scale * step
        beta = beta + delta
        ll = cand_ll
        if np.max(np.abs(delta)) < STEP_TOL:
            converged = True
            message = "coefficient change below tolerance"
            break

    p = expit(design @ beta)
    if not converged or np.any(np.abs(beta) > SEPARATION_COEF):
        if np.any(p > 1.0 - SEPARATION_PROB) or np.any(p < SEPARATION_PROB) or np.any(
            np.abs(beta) > SEPARATION_COEF
        ):
            converged = False
            message = (
                "possible quasi-complete separation: fitted probabilities or "
                "coefficients diverged"
            )

    info = observed_information(beta, design, totals)
    cov_model = _invert_information(info, design)
    cov_robust = robust_covariance(beta, design, successes, totals)
    return FitResult(
        coefficients=beta,
        cov_model=cov_model,
        cov_robust=cov_robust,
        log_likelihood=ll,
        iterations=iterations,
        converged=converged,
        dispersion=(
            deviance(beta, design, successes, totals) / (n_rows - n_params)
            if n_rows > n_params
            else float("nan")
        ),
        message=message,
    )
