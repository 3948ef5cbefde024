"""Bernoulli variance bounds from mean bounds."""

from dataclasses import dataclass

import numpy as np

from rctdesign.sensitivity.sipw import MeanBounds


@dataclass(frozen=True)
class VarBounds:
    var_lower: float
    var_upper: float

    def __post_init__(self):
        if not 0.0 <= self.var_lower <= self.var_upper <= 0.25:
            raise ValueError(f"invalid variance bounds [{self.var_lower}, {self.var_upper}]")


def bernoulli_variance(mu):
    """f(x) = x (1 - x), elementwise for arrays."""
    return np.asarray(mu) * (1.0 - np.asarray(mu)) if np.ndim(mu) else float(mu) * (1.0 - float(mu))


def variance_bounds(mean_bounds: MeanBounds) -> VarBounds:
    """Image of [mu_lower, mu_upper] under f(x) = x (1 - x).

    f increases below 1/2 and decreases above it; an interval straddling 1/2
    reaches the maximum 1/4. Endpoints equal to 1/2 fall in the monotone branches.
    """
    lo, hi = mean_bounds.mu_lower, mean_bounds.mu_upper
    if lo > hi:
        raise ValueError(f"mu_lower {lo} exceeds mu_upper {hi}")
    f_lo, f_hi = bernoulli_variance(lo), bernoulli_variance(hi)
    if hi <= 0.5:
        bounds = (f_lo, f_hi)
    elif lo >= 0.5:
        bounds = (f_hi, f_lo)
    else:
        bounds = (min(f_lo, f_hi), 0.25)
    lower = min(max(min(bounds), 0.0), 0.25)
    upper = min(max(max(bounds), 0.0), 0.25)
    return VarBounds(lower, upper)
