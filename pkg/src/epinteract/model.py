"""Regression model specification and design-matrix expansion.

Terms are an intercept, main effects of binary variables, or pairwise
products; variables are the two exposures z1, z2 and the dataset's covariates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset

__all__ = [
    "Term",
    "ModelSpec",
    "SpecificationError",
    "build_design_row",
    "expand_dataset",
    "parse_formula",
    "model_25_formula",
    "model_26_formula",
]

EXPOSURE_NAMES = ("z1", "z2")

# The two models fitted to the bundled H. pylori data: the richer one carries
# both exposure-exposure and exposure-covariate products.
model_25_formula = "y ~ z1 + z2 + z1:z2 + x1 + x2 + x3 + z1:x2"
model_26_formula = "y ~ z1 + z2 + z1:z2 + x1 + x2 + x3"


class SpecificationError(ValueError):
    """Model specification does not match the data or is malformed."""


@dataclass(frozen=True)
class Term:
    """One column of the design matrix.

    kind is "intercept", "main" or "product"; variables holds the referenced
    variable names (none, one, or an unordered pair).
    """

    kind: str
    variables: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind == "intercept":
            if self.variables:
                raise SpecificationError("intercept term takes no variables")
        elif self.kind == "main":
            if len(self.variables) != 1:
                raise SpecificationError("main term takes exactly one variable")
        elif self.kind == "product":
            if len(self.variables) != 2 or self.variables[0] == self.variables[1]:
                raise SpecificationError(
                    "product term takes two distinct variables"
                )
            # canonical order so (a, b) and (b, a) are the same term
            object.__setattr__(self, "variables", tuple(sorted(self.variables)))
        else:
            raise SpecificationError(f"unknown term kind {self.kind!r}")

    @property
    def label(self) -> str:
        if self.kind == "intercept":
            return "(intercept)"
        return ":".join(self.variables)


@dataclass(frozen=True)
class ModelSpec:
    """Ordered list of terms plus a link identifier (only "logit" for now)."""

    terms: tuple[Term, ...]
    link: str = "logit"

    def __post_init__(self):
        n_intercept = sum(1 for t in self.terms if t.kind == "intercept")
        if n_intercept != 1:
            raise SpecificationError(
                f"model must contain exactly one intercept term, got {n_intercept}"
            )
        if len(set(self.terms)) != len(self.terms):
            raise SpecificationError("duplicate terms in model specification")
        if self.link != "logit":
            raise SpecificationError(f"unsupported link {self.link!r}")

    @property
    def variables(self) -> set[str]:
        return {v for t in self.terms for v in t.variables}

    @property
    def term_labels(self) -> tuple[str, ...]:
        return tuple(t.label for t in self.terms)

    def validate_for(self, data: Dataset) -> None:
        known = set(data.variable_names)
        unknown = self.variables - known
        if unknown:
            raise SpecificationError(
                f"model references unknown variables {sorted(unknown)}; "
                f"dataset provides {sorted(known)}"
            )


def _variable_env(
    exposures, covariates, covariate_names=None
) -> dict[str, float]:
    if covariate_names is None:
        covariate_names = tuple(f"x{i + 1}" for i in range(len(covariates)))
    env = dict(zip(covariate_names, covariates))
    env["z1"], env["z2"] = exposures
    return env


def build_design_row(exposures, covariates, spec: ModelSpec, covariate_names=None):
    """Evaluate each term of `spec` at one (z, x) point.

    Covariate names default to x1..xK in vector order.
    """
    env = _variable_env(exposures, covariates, covariate_names)
    row = np.empty(len(spec.terms))
    for j, term in enumerate(spec.terms):
        try:
            if term.kind == "intercept":
                row[j] = 1.0
            elif term.kind == "main":
                row[j] = env[term.variables[0]]
            else:
                row[j] = env[term.variables[0]] * env[term.variables[1]]
        except KeyError as exc:
            raise SpecificationError(f"unresolvable variable {exc}") from None
    return row


def expand_dataset(data: Dataset, spec: ModelSpec):
    """Build (design matrix, successes, totals) with one row per cell,
    in dataset order."""
    spec.validate_for(data)
    X = np.vstack(
        [
            build_design_row(r.exposures, r.covariates, spec, data.covariate_names)
            for r in data.records
        ]
    )
    s = np.array([r.successes for r in data.records], dtype=float)
    n = np.array([r.totals for r in data.records], dtype=float)
    return X, s, n


def parse_formula(text: str, header=None) -> ModelSpec:
    """Parse "y ~ z1 + z2 + z1:z2 + x1" into a ModelSpec.

    The intercept is implicit. ":" denotes a pairwise product. When `header`
    is given, every variable must appear in it.
    """
    if not text or not text.strip():
        raise SpecificationError("empty formula")
    if "~" in text:
        lhs, _, rhs = text.partition("~")
        if not lhs.strip():
            raise SpecificationError("formula has '~' but no outcome name")
    else:
        rhs = text
    terms = [Term("intercept")]
    known = set(header) if header is not None else None
    for token in rhs.split("+"):
        token = token.strip()
        if not token:
            raise SpecificationError(f"malformed formula near {rhs.strip()!r}")
        parts = [p.strip() for p in token.split(":")]
        if any(not p or not p.isidentifier() for p in parts):
            raise SpecificationError(f"malformed term {token!r}")
        if known is not None:
            for p in parts:
                if p not in known:
                    raise SpecificationError(f"unknown variable {p!r} in term {token!r}")
        if len(parts) == 1:
            term = Term("main", (parts[0],))
        elif len(parts) == 2:
            term = Term("product", tuple(parts))
        else:
            raise SpecificationError(
                f"term {token!r} has more than two factors; only pairwise "
                "products are supported"
            )
        if term in terms:
            raise SpecificationError(f"duplicate term {token!r}")
        terms.append(term)
    return ModelSpec(terms=tuple(terms))
