"""Relative-activity determination and exponential attenuation fitting.

Transmission through an absorber follows N(d) = N0 * exp(-mu*d), so the
attenuation coefficient comes from weighted least squares on ln N versus
thickness, with weights from the per-point count errors. Thickness units
(cm or g/cm^2) are carried as a declared label and never converted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .values import DomainError, LabkitError, MeasuredValue


class InsufficientPoints(LabkitError):
    pass


class DegenerateDesign(LabkitError):
    pass


@dataclass(frozen=True)
class ActivityInput:
    """Counts and live times for source-vs-reference comparison in
    identical geometry (assumed, not checked)."""

    a_ref: MeasuredValue  # reference activity, Bq
    n_x: int
    n_ref: int
    t_x: float
    t_ref: float


def relative_activity(inp: ActivityInput) -> MeasuredValue:
    """A_x = A_ref * (N_x/t_x) / (N_ref/t_ref), errors in quadrature.

    The relative error combines the reference activity's with the Poisson
    1/sqrt(N) of both windows: (s_A/A)^2 = (s_ref/A_ref)^2 + 1/N_x + 1/N_ref.
    """
    if inp.n_x < 1 or inp.n_ref < 1:
        raise DomainError("window counts must be at least 1")
    if inp.t_x <= 0 or inp.t_ref <= 0:
        raise DomainError("live times must be positive")
    ratio = (inp.n_x / inp.t_x) / (inp.n_ref / inp.t_ref)
    value = inp.a_ref.value * ratio
    # written so a zero reference activity stays well-defined
    sigma = math.sqrt(
        (inp.a_ref.sigma * ratio) ** 2
        + value * value * (1.0 / inp.n_x + 1.0 / inp.n_ref)
    )
    return MeasuredValue(value, sigma)


@dataclass(frozen=True)
class AttenuationPoint:
    thickness_d: float
    counts_n: MeasuredValue

    def __post_init__(self):
        if self.thickness_d < 0:
            raise DomainError("thickness must be nonnegative")


@dataclass(frozen=True)
class AttenuationFit:
    mu: MeasuredValue
    n0: MeasuredValue
    d_half: MeasuredValue
    residual_rms: float
    n_points: int
    thickness_unit: str = "cm"
    warnings: Tuple[str, ...] = ()


def fit_attenuation(
    points: Sequence[AttenuationPoint], thickness_unit: str = "cm"
) -> AttenuationFit:
    """Weighted least squares of ln N against thickness.

    y_i = ln N_i carries sigma_{y_i} = sigma_{N_i}/N_i; the slope is -mu
    and the intercept ln N0, with parameter errors from the standard WLS
    covariance. The half-value layer is ln2/mu with its propagated error.
    A nonpositive fitted mu is physically absurd but computable: the fit
    is returned with a warning rather than an error.
    """
    if len(points) < 3:
        raise InsufficientPoints("need at least 3 points")
    if len({p.thickness_d for p in points}) < 2:
        raise DegenerateDesign("need at least 2 distinct thicknesses")
    for p in points:
        if p.counts_n.value <= 0:
            raise DomainError("counts must be positive for the log transform")
        if p.counts_n.sigma <= 0:
            raise DomainError("count errors must be positive to weight the fit")

    d = np.array([p.thickness_d for p in points], dtype=float)
    n = np.array([p.counts_n.value for p in points], dtype=float)
    sn = np.array([p.counts_n.sigma for p in points], dtype=float)

    y = np.log(n)
    sy = sn / n
    w = 1.0 / (sy * sy)

    s = w.sum()
    sx = (w * d).sum()
    sxx = (w * d * d).sum()
    sy_ = (w * y).sum()
    sxy = (w * d * y).sum()
    delta = s * sxx - sx * sx

    intercept = (sxx * sy_ - sx * sxy) / delta
    slope = (s * sxy - sx * sy_) / delta
    sigma_intercept = math.sqrt(sxx / delta)
    sigma_slope = math.sqrt(s / delta)

    mu = -slope
    n0 = math.exp(intercept)
    residuals = y - (intercept + slope * d)
    residual_rms = float(math.sqrt(np.mean(residuals * residuals)))

    warnings: tuple[str, ...] = ()
    if mu <= 0:
        warnings = ("fitted attenuation coefficient is not positive",)
    if mu != 0:
        d_half = math.log(2) / mu
        sigma_d_half = math.log(2) / (mu * mu) * sigma_slope
    else:
        d_half = math.inf
        sigma_d_half = math.inf

    return AttenuationFit(
        mu=MeasuredValue(mu, sigma_slope),
        n0=MeasuredValue(n0, n0 * sigma_intercept),
        d_half=MeasuredValue(d_half, sigma_d_half),
        residual_rms=residual_rms,
        n_points=len(points),
        thickness_unit=thickness_unit,
        warnings=warnings,
    )
