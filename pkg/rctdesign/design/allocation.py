"""Dataset validation, default allocations and the risk/loss functionals."""

from typing import Sequence, Union

import numpy as np

from rctdesign.config.settings import DefaultRule, DesignConfig
from rctdesign.design.types import AllocationPlan, Dataset, StratumSample
from rctdesign.errors import DatasetError
from rctdesign.utils.logger import get_logger

logger = get_logger("design")


def validate_dataset(strata: Sequence[StratumSample]) -> Dataset:
    """Check strata and normalize their weights.

    Args:
        strata: Stratum samples in output order

    Returns:
        Dataset whose weights sum to one
    """
    if len(strata) == 0:
        raise DatasetError("dataset has no strata")

    seen = set()
    for s in strata:
        if s.stratum_id in seen:
            raise DatasetError(f"duplicate stratum id {s.stratum_id!r}")
        seen.add(s.stratum_id)

        if s.n == 0:
            raise DatasetError(f"stratum {s.stratum_id!r} is empty")
        if np.any((s.propensity <= 0.0) | (s.propensity >= 1.0)) or np.any(np.isnan(s.propensity)):
            raise DatasetError(f"stratum {s.stratum_id!r}: propensity out of range")
        if np.any((s.outcome != 0.0) & (s.outcome != 1.0)):
            raise DatasetError(f"stratum {s.stratum_id!r}: non-binary outcome")
        if s.n_treated == 0:
            raise DatasetError(f"stratum {s.stratum_id!r}: no treated units")
        if s.n_control == 0:
            raise DatasetError(f"stratum {s.stratum_id!r}: no control units")
        if not np.isfinite(s.weight) or s.weight < 0:
            raise DatasetError(f"stratum {s.stratum_id!r}: weight must be nonnegative")

    total = float(sum(s.weight for s in strata))
    if total <= 0:
        raise DatasetError("stratum weights sum to zero")
    if abs(total - 1.0) > 1e-9:
        logger.warning(f"Stratum weights sum to {total:.6g}; normalizing")

    return Dataset(tuple(s.with_weight(s.weight / total) for s in strata))


def default_allocation(config: DesignConfig, dataset: Union[Dataset, Sequence[StratumSample]]) -> AllocationPlan:
    """Allocation the regret is measured against.

    Equal gives n_r/(2K) per arm. Weighted gives w_k n_r/2 per arm, which keeps
    the total at n_r.
    """
    ids = tuple(s.stratum_id for s in dataset)
    K = len(ids)
    n_r = config.n_r
    if n_r < 2 * K:
        raise DatasetError(f"n_r={n_r} is below 2K={2 * K}; every arm needs a unit")

    if config.default_rule == DefaultRule.EQUAL:
        per_arm = np.full(K, n_r / (2.0 * K))
    else:
        weights = np.array([s.weight for s in dataset], dtype=np.float64)
        per_arm = weights / weights.sum() * n_r / 2.0

    return AllocationPlan.from_continuous(ids, per_arm, per_arm.copy(), n_r)


def round_allocation(counts: np.ndarray, n_r: int) -> np.ndarray:
    """Largest-remainder rounding to integers summing to n_r, each at least 1.

    Remainder ties go to the lower index. Arms lifted to the floor of 1 take
    their unit from the currently largest count.
    """
    counts = np.asarray(counts, dtype=np.float64)
    m = len(counts)
    if n_r < m:
        raise DatasetError(f"n_r={n_r} cannot give {m} arms one unit each")

    floors = np.floor(counts + 1e-9).astype(np.int64)
    floors = np.maximum(floors, 0)
    remainders = np.round(counts - floors, 12)
    deficit = int(n_r - floors.sum())

    order = np.argsort(-remainders, kind="stable")
    result = floors.copy()
    if deficit > 0:
        for i in range(deficit):
            result[order[i % m]] += 1
    elif deficit < 0:
        for _ in range(-deficit):
            result[int(np.argmax(result))] -= 1

    for i in np.flatnonzero(result < 1):
        need = 1 - result[i]
        result[i] = 1
        for _ in range(need):
            result[int(np.argmax(result))] -= 1

    return result


def risk(
    allocation: AllocationPlan,
    var_treated: Sequence[float],
    var_control: Sequence[float],
    weights: Sequence[float],
    integer: bool = False,
) -> float:
    """Expected weighted L2 loss sum_k w_k (s_k1/n_kt + s_k0/n_kc).

    Args:
        allocation: Plan whose arm counts are evaluated
        var_treated: sigma_k^2(1) per stratum
        var_control: sigma_k^2(0) per stratum
        weights: Stratum weights
        integer: Use the rounded counts instead of the continuous ones
    """
    n_t, n_c = allocation.arms(integer)
    if np.any(n_t <= 0) or np.any(n_c <= 0):
        raise DatasetError("risk needs every arm count to be positive")
    w = np.asarray(weights, dtype=np.float64)
    s1 = np.asarray(var_treated, dtype=np.float64)
    s0 = np.asarray(var_control, dtype=np.float64)
    return float(np.sum(w * (s1 / n_t + s0 / n_c)))


def l2_loss(estimates: Sequence[float], truth: Sequence[float], weights: Sequence[float]) -> float:
    """Weighted squared error sum_k w_k (tau_hat_k - tau_k)^2."""
    est = np.asarray(estimates, dtype=np.float64)
    tau = np.asarray(truth, dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64)
    if not (est.shape == tau.shape == w.shape):
        raise DatasetError(f"length mismatch: {est.shape}, {tau.shape}, {w.shape}")
    return float(np.sum(w * (est - tau) ** 2))
