"""Closed-form inner allocation and the concave outer objective.

A SigmaPoint is a (K, 2) array whose rows are (s_k0, s_k1) = candidate
(sigma_k^2(0), sigma_k^2(1)); column 0 is control, column 1 treated.
"""

from typing import Optional, Sequence

import numpy as np

from rctdesign.config.settings import DesignConfig
from rctdesign.design.types import AllocationPlan
from rctdesign.errors import DatasetError, NumericalError

SigmaPoint = np.ndarray


def _ids(stratum_ids: Optional[Sequence[str]], K: int):
    return tuple(stratum_ids) if stratum_ids is not None else tuple(str(k) for k in range(K))


def naive_allocation(
    sd_treated: Sequence[float],
    sd_control: Sequence[float],
    weights: Sequence[float],
    n_r: int,
    stratum_ids: Optional[Sequence[str]] = None,
) -> AllocationPlan:
    """Risk-minimizing allocation for known standard deviations.

    n_kt = n_r sqrt(w_k) sigma_k(1) / sum_j sqrt(w_j)(sigma_j(1) + sigma_j(0)),
    and likewise for controls.
    """
    sd1 = np.asarray(sd_treated, dtype=np.float64)
    sd0 = np.asarray(sd_control, dtype=np.float64)
    root_w = np.sqrt(np.asarray(weights, dtype=np.float64))
    if np.any(sd1 < 0) or np.any(sd0 < 0):
        raise DatasetError("standard deviations must be nonnegative")
    total = float(np.sum(root_w * (sd1 + sd0)))
    if total <= 0.0:
        raise DatasetError("all standard deviations are zero; no allocation minimizes the risk")
    K = len(sd1)
    if n_r < 2 * K:
        raise DatasetError(f"n_r={n_r} is below 2K={2 * K}")
    return AllocationPlan.from_continuous(
        _ids(stratum_ids, K), n_r * root_w * sd1 / total, n_r * root_w * sd0 / total, n_r
    )


def allocation_from_sigmas(
    s: SigmaPoint,
    weights: Sequence[float],
    n_r: int,
    stratum_ids: Optional[Sequence[str]] = None,
) -> AllocationPlan:
    """Inner minimizer of the regret for fixed variances s."""
    sd = np.sqrt(np.maximum(np.asarray(s, dtype=np.float64), 0.0))
    return naive_allocation(sd[:, 1], sd[:, 0], weights, n_r, stratum_ids)


def _default_arms(default: AllocationPlan):
    n_t, n_c = default.arms()
    if np.any(n_t <= 0) or np.any(n_c <= 0):
        raise DatasetError("default allocation has a nonpositive arm count")
    return np.column_stack([n_c, n_t])


def objective_value(s: SigmaPoint, weights: Sequence[float], config: DesignConfig, default: AllocationPlan) -> float:
    """(1/n_r)(sum_k sqrt(w_k)(sigma_k1 + sigma_k0))^2 - sum_k w_k(s_k1/n~_kt + s_k0/n~_kc).

    Equals the regret of the best allocation for s against the default; it is
    never positive and is concave in s.
    """
    s = np.asarray(s, dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64)
    n_default = _default_arms(default)
    total = float(np.sum(np.sqrt(w)[:, None] * np.sqrt(np.maximum(s, 0.0))))
    return total * total / config.n_r - float(np.sum(w[:, None] * s / n_default))


def objective_gradient(s: SigmaPoint, weights: Sequence[float], config: DesignConfig, default: AllocationPlan) -> np.ndarray:
    """d/ds_ke = sqrt(w_k) S / (n_r sigma_ke) - w_k / n~_ke, with S the weighted sd sum."""
    s = np.asarray(s, dtype=np.float64)
    if np.any(s < config.sigma_floor * (1.0 - 1e-12)):
        raise NumericalError(f"gradient needs every coordinate >= sigma_floor={config.sigma_floor}")
    w = np.asarray(weights, dtype=np.float64)
    n_default = _default_arms(default)
    root_w = np.sqrt(w)[:, None]
    sigma = np.sqrt(s)
    total = float(np.sum(root_w * sigma))
    return root_w * total / (config.n_r * sigma) - w[:, None] / n_default
