"""Stratified count data: cell records, datasets, CSV ingestion and the
empirical covariate distribution used for standardization."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from importlib import resources

__all__ = [
    "StratumRecord",
    "Dataset",
    "CovariateDistribution",
    "covariate_distribution",
    "load_fixture",
    "FIXTURES",
    "InputError",
]


class InputError(ValueError):
    """Malformed or inconsistent input data."""


@dataclass(frozen=True)
class StratumRecord:
    """One covariate-by-exposure cell: counts of successes out of totals."""

    covariates: tuple[int, ...]
    exposures: tuple[int, int]
    successes: int
    totals: int

    def __post_init__(self):
        if not all(v in (0, 1) for v in self.covariates):
            raise InputError(f"covariates must be binary, got {self.covariates}")
        if len(self.exposures) != 2 or not all(v in (0, 1) for v in self.exposures):
            raise InputError(f"exposures must be a binary pair, got {self.exposures}")
        if self.totals < 1:
            raise InputError(f"totals must be >= 1, got {self.totals}")
        if not 0 <= self.successes <= self.totals:
            raise InputError(
                f"successes must lie in [0, totals], got {self.successes}/{self.totals}"
            )

    @property
    def key(self) -> tuple[tuple[int, ...], tuple[int, int]]:
        return (self.covariates, self.exposures)


@dataclass(frozen=True)
class Dataset:
    """A list of cells plus covariate labels. Cells with zero totals are
    simply absent, never stored."""

    records: tuple[StratumRecord, ...]
    covariate_names: tuple[str, ...]

    def __post_init__(self):
        if not self.records:
            raise InputError("dataset must contain at least one record")
        k = len(self.covariate_names)
        seen = set()
        for rec in self.records:
            if len(rec.covariates) != k:
                raise InputError(
                    f"record has {len(rec.covariates)} covariates, expected {k}"
                )
            if rec.key in seen:
                raise InputError(f"duplicate cell for {rec.key}")
            seen.add(rec.key)

    @property
    def n_total(self) -> int:
        return sum(r.totals for r in self.records)

    @property
    def variable_names(self) -> tuple[str, ...]:
        return self.covariate_names + ("z1", "z2")

    @classmethod
    def from_csv(cls, source) -> "Dataset":
        """Read a dataset from a CSV path or text file object.

        Expected header: x-covariate columns, then z1, z2, successes, totals.
        """
        if hasattr(source, "read"):
            return cls._parse(source)
        with open(source, newline="", encoding="utf-8") as fh:
            return cls._parse(fh)

    @classmethod
    def _parse(cls, fh) -> "Dataset":
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InputError("empty CSV: no header row") from None
        header = [h.strip() for h in header]
        tail = ["z1", "z2", "successes", "totals"]
        if len(header) < 5 or header[-4:] != tail:
            raise InputError(
                f"CSV header must end with {tail}, got {header}"
            )
        cov_names = tuple(header[:-4])
        records = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise InputError(
                    f"line {lineno}: expected {len(header)} fields, got {len(row)}"
                )
            try:
                vals = [int(c) for c in row]
            except ValueError as exc:
                raise InputError(f"line {lineno}: non-integer field ({exc})") from None
            try:
                records.append(
                    StratumRecord(
                        covariates=tuple(vals[: len(cov_names)]),
                        exposures=(vals[-4], vals[-3]),
                        successes=vals[-2],
                        totals=vals[-1],
                    )
                )
            except InputError as exc:
                raise InputError(f"line {lineno}: {exc}") from None
        return cls(records=tuple(records), covariate_names=cov_names)

    def to_csv(self, target) -> None:
        """Write the dataset back out in the ingestion format."""
        def _write(fh):
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(list(self.covariate_names) + ["z1", "z2", "successes", "totals"])
            for r in self.records:
                w.writerow(
                    list(r.covariates) + list(r.exposures) + [r.successes, r.totals]
                )

        if hasattr(target, "write"):
            _write(target)
        else:
            with open(target, "w", newline="", encoding="utf-8") as fh:
                _write(fh)


@dataclass(frozen=True, eq=False)
class CovariateDistribution:
    """Empirical distribution of covariate patterns: pattern -> sample proportion."""

    weights: dict[tuple[int, ...], float]

    def __post_init__(self):
        total = sum(self.weights.values())
        if abs(total - 1.0) > 1e-12:
            raise InputError(f"weights must sum to 1, got {total!r}")

    @property
    def patterns(self) -> list[tuple[int, ...]]:
        return list(self.weights)


def covariate_distribution(data: Dataset) -> CovariateDistribution:
    """Proportion of subjects with each covariate pattern, marginal over exposure."""
    counts: dict[tuple[int, ...], int] = {}
    for rec in data.records:
        counts[rec.covariates] = counts.get(rec.covariates, 0) + rec.totals
    n = data.n_total
    return CovariateDistribution(weights={x: c / n for x, c in counts.items()})


FIXTURES = ("nguyen2008",)


def load_fixture(name: str) -> Dataset:
    """Load a bundled dataset by name."""
    if name not in FIXTURES:
        raise InputError(f"unknown fixture {name!r}; available: {FIXTURES}")
    text = resources.files("epinteract.fixtures").joinpath(f"{name}.csv").read_text()
    return Dataset.from_csv(io.StringIO(text))
