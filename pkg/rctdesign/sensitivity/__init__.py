# sensitivity package: SIPW estimates, Gamma-extrema and variance bounds
from rctdesign.sensitivity.sipw import (
    MeanBounds,
    WeightInterval,
    inverse_weights,
    mean_extrema,
    sipw_mean,
    weight_bounds,
    weight_interval,
)
from rctdesign.sensitivity.variance import VarBounds, bernoulli_variance, variance_bounds

__all__ = [
    "MeanBounds",
    "VarBounds",
    "WeightInterval",
    "bernoulli_variance",
    "inverse_weights",
    "mean_extrema",
    "sipw_mean",
    "variance_bounds",
    "weight_bounds",
    "weight_interval",
]
