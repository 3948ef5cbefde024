"""Stabilized IPW means and their extrema under Gamma-level confounding.

Under the marginal sensitivity model the true treatment odds may differ from
the fitted odds by a factor in [1/Gamma, Gamma]. For a treated unit with fitted
propensity p the inverse-probability weight 1/p_true therefore ranges over
[1 + (1-p)/(p Gamma), 1 + Gamma (1-p)/p]; control units use 1-p in place of p.
"""

from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from rctdesign.design.types import Arm, StratumSample, UnitRecord
from rctdesign.errors import DatasetError


@dataclass(frozen=True)
class WeightInterval:
    """Admissible range of one unit's inverse-probability weight."""
    lower: float
    upper: float


@dataclass(frozen=True)
class MeanBounds:
    """Extrema of the SIPW mean over all admissible weights."""
    mu_lower: float
    mu_upper: float

    def __post_init__(self):
        if self.mu_lower > self.mu_upper:
            raise ValueError(f"mu_lower {self.mu_lower} exceeds mu_upper {self.mu_upper}")


def _odds(propensity: np.ndarray, arm: Arm) -> np.ndarray:
    p = np.asarray(propensity, dtype=np.float64)
    if np.any((p <= 0.0) | (p >= 1.0)) or np.any(np.isnan(p)):
        raise DatasetError("propensity out of range")
    return (1.0 - p) / p if arm == Arm.TREATED else p / (1.0 - p)


def weight_bounds(propensity: np.ndarray, gamma: float, arm: Arm) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized weight intervals for many units of one arm."""
    if gamma < 1.0:
        raise DatasetError(f"gamma must be >= 1, got {gamma}")
    odds = _odds(propensity, arm)
    return 1.0 + odds / gamma, 1.0 + gamma * odds


def weight_interval(unit: Union[UnitRecord, float], gamma: float, arm: Arm) -> WeightInterval:
    """Weight interval for a single unit (or a bare propensity)."""
    p = unit.propensity if isinstance(unit, UnitRecord) else float(unit)
    lo, hi = weight_bounds(np.array([p]), gamma, arm)
    return WeightInterval(float(lo[0]), float(hi[0]))


def inverse_weights(propensity: np.ndarray, arm: Arm) -> np.ndarray:
    """Gamma = 1 weights: 1/p for treated units, 1/(1-p) for controls."""
    return 1.0 + _odds(propensity, arm)


def _arm_data(sample: StratumSample, arm: Arm) -> Tuple[np.ndarray, np.ndarray]:
    outcome, propensity = sample.arm(arm)
    if len(outcome) == 0:
        raise DatasetError(f"stratum {sample.stratum_id!r}: empty {arm.value} arm")
    return outcome, propensity


def sipw_mean(sample: StratumSample, arm: Arm) -> float:
    """Stabilized IPW estimate sum(Y v) / sum(v) of the arm's outcome mean."""
    outcome, propensity = _arm_data(sample, arm)
    v = inverse_weights(propensity, arm)
    return float(np.dot(outcome, v) / v.sum())


def extrema_from_bounds(outcome: np.ndarray, lower: np.ndarray, upper: np.ndarray) -> MeanBounds:
    """Closed-form extrema of sum(Y v)/sum(v) for binary Y and box-bounded v.

    The ratio is increasing in the weights of Y=1 units and decreasing in those
    of Y=0 units, so the maximum puts the upper weight on successes and the
    lower weight on failures; the minimum does the opposite.
    """
    success = outcome == 1.0
    up_s, lo_s = upper[success].sum(), lower[success].sum()
    up_f, lo_f = upper[~success].sum(), lower[~success].sum()
    mu_upper = up_s / (up_s + lo_f) if up_s > 0 else 0.0
    mu_lower = lo_s / (lo_s + up_f) if lo_s > 0 else 0.0
    mu_lower = min(max(float(mu_lower), 0.0), 1.0)
    mu_upper = min(max(float(mu_upper), mu_lower), 1.0)
    return MeanBounds(mu_lower, mu_upper)


def mean_extrema(sample: StratumSample, arm: Arm, gamma: float) -> MeanBounds:
    """Partially identified interval of the arm's SIPW mean at level gamma."""
    outcome, propensity = _arm_data(sample, arm)
    lower, upper = weight_bounds(propensity, gamma, arm)
    return extrema_from_bounds(outcome, lower, upper)
