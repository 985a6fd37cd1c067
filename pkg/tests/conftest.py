import numpy as np
import pytest

import epinteract as ei

# Frozen expected values for the bundled H. pylori dataset.
FULL_MODEL = "y ~ z1 + z2 + z1:z2 + x1 + x2 + x3 + z1:x2"
REDUCED_MODEL = "y ~ z1 + z2 + z1:z2 + x1 + x2 + x3"

FULL_COEFS = np.array([1.19, -0.87, 0.10, 2.18, -0.57, -1.82, 0.55, 1.96])

FULL_COV_ROBUST = np.array([
    [0.64, -0.53, -0.32, 0.29, -0.12, -0.42, -0.13, 0.47],
    [-0.53, 1.06, 0.31, -0.67, -0.14, 0.45, 0.10, -0.89],
    [-0.32, 0.31, 0.72, -0.71, 0.00, 0.05, 0.06, -0.07],
    [0.29, -0.67, -0.71, 1.86, 0.05, -0.05, -0.04, 0.32],
    [-0.12, -0.14, 0.00, 0.05, 0.37, -0.04, -0.05, 0.03],
    [-0.42, 0.45, 0.05, -0.05, -0.04, 0.69, -0.01, -0.69],
    [-0.13, 0.10, 0.06, -0.04, -0.05, -0.01, 0.39, -0.10],
    [0.47, -0.89, -0.07, 0.32, 0.03, -0.69, -0.10, 1.40],
])

FULL_MEASURES = {"RCOR": 8.85, "RCRR": 1.60, "RMOR": 8.62, "RMRR": 1.58, "DMRD": 0.34}
REDUCED_MEASURES = {"RCOR": 6.05, "RCRR": 1.47, "RMOR": 5.47, "RMRR": 1.41, "DMRD": 0.27}

# Published interval endpoints (2.5th, 25th, 75th, 97.5th percentiles) for the
# full model; they carry Monte Carlo noise from only 1000 unseeded draws.
FULL_INTERVALS = {
    "RCOR": (0.66, 3.61, 21.95, 127.04),
    "RCRR": (0.74, 1.22, 2.27, 4.60),
    "RMOR": (0.72, 3.50, 15.93, 88.51),
    "RMRR": (0.77, 1.23, 1.90, 3.40),
    "DMRD": (-0.10, 0.18, 0.45, 0.72),
}


@pytest.fixture(scope="session")
def dataset():
    return ei.load_fixture("nguyen2008")


@pytest.fixture(scope="session")
def dist(dataset):
    return ei.covariate_distribution(dataset)


@pytest.fixture(scope="session")
def spec_full(dataset):
    return ei.parse_formula(FULL_MODEL, dataset.variable_names)


@pytest.fixture(scope="session")
def spec_reduced(dataset):
    return ei.parse_formula(REDUCED_MODEL, dataset.variable_names)


@pytest.fixture(scope="session")
def fit_full(dataset, spec_full):
    X, s, n = ei.expand_dataset(dataset, spec_full)
    return ei.fit(X, s, n)


@pytest.fixture(scope="session")
def fit_reduced(dataset, spec_reduced):
    X, s, n = ei.expand_dataset(dataset, spec_reduced)
    return ei.fit(X, s, n)


def random_risk_table(rng, n_strata):
    """A fully populated risk table over n_strata covariate patterns with a
    matching weight distribution."""
    n_strata = int(n_strata)
    width = max(1, (n_strata - 1).bit_length())
    patterns = [
        tuple(int(b) for b in np.binary_repr(i, width=width))
        for i in range(n_strata)
    ]
    raw = rng.uniform(0.2, 1.0, size=n_strata)
    weights = {x: float(v) for x, v in zip(patterns, raw / raw.sum())}
    # re-normalize exactly
    total = sum(weights.values())
    weights = {x: v / total for x, v in weights.items()}
    values = {
        (z, x): float(rng.uniform(0.05, 0.95))
        for z in ei.measures.EXPOSURE_LEVELS
        for x in patterns
    }
    return ei.RiskTable(values=values), ei.CovariateDistribution(weights=weights)
