"""Measured values with statistical errors, and the result checker."""

from __future__ import annotations

from dataclasses import dataclass


class LabkitError(Exception):
    """Base class for lab-toolkit failures."""


class DomainError(LabkitError):
    """Input outside the formula's domain (zero counts, nonpositive time, ...)."""


@dataclass(frozen=True)
class MeasuredValue:
    """A value with its one-standard-deviation statistical error."""

    value: float
    sigma: float = 0.0

    def __post_init__(self):
        if self.sigma < 0:
            raise DomainError("sigma must be nonnegative")

    def __str__(self) -> str:
        return f"{self.value:g} ± {self.sigma:g}"


@dataclass(frozen=True)
class CheckOutcome:
    passed: bool
    deviation: float
    sigma_bound: float
    relative_bound: float
    applied: str  # "k_sigma" | "rel_tol"
    explanation: str


def check_result(
    given: float,
    reference: MeasuredValue,
    k_sigma: float = 3.0,
    rel_tol: float = 0.05,
) -> CheckOutcome:
    """Accept ``given`` if it sits within k standard deviations of the
    reference or within the relative tolerance, whichever is looser."""
    if k_sigma <= 0:
        raise ValueError("k_sigma must be positive")
    if rel_tol < 0:
        raise ValueError("rel_tol must be nonnegative")
    deviation = abs(given - reference.value)
    sigma_bound = k_sigma * reference.sigma
    relative_bound = rel_tol * abs(reference.value)
    applied = "k_sigma" if sigma_bound >= relative_bound else "rel_tol"
    allowed = max(sigma_bound, relative_bound)
    passed = deviation <= allowed
    bound_name = (
        f"{k_sigma:g}·sigma bound ({sigma_bound:g})"
        if applied == "k_sigma"
        else f"relative tolerance bound ({relative_bound:g})"
    )
    if passed:
        explanation = (
            f"deviation {deviation:g} accepted under the {bound_name}"
        )
    else:
        explanation = (
            f"deviation {deviation:g} exceeds both the {k_sigma:g}·sigma "
            f"bound ({sigma_bound:g}) and the relative tolerance bound "
            f"({relative_bound:g})"
        )
    return CheckOutcome(
        passed=passed,
        deviation=deviation,
        sigma_bound=sigma_bound,
        relative_bound=relative_bound,
        applied=applied,
        explanation=explanation,
    )
