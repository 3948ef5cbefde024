"""Worst-case regret of a fixed allocation over the confidence regions."""

from typing import List, Sequence, Tuple

import numpy as np

from rctdesign.design.types import AllocationPlan
from rctdesign.errors import DatasetError
from rctdesign.regions.projection import project_onto_region
from rctdesign.regions.region import VarianceRegion

ASCENT_MAX_ITERS = 1000
ASCENT_TOL = 1e-14


def _ellipse_support_point(g: np.ndarray, region: VarianceRegion):
    """Maximizer of g.x over the ellipse alone: c + M^-1 g / sqrt(g^T M^-1 g)."""
    ellipse = region.ellipse
    m_inv_g = np.linalg.solve(ellipse.shape, g)
    return ellipse.center + m_inv_g / np.sqrt(float(g @ m_inv_g))


def maximize_linear(g: Sequence[float], region: VarianceRegion) -> Tuple[float, np.ndarray]:
    """max g.x over the region, with a maximizer.

    Uses the ellipse support point when it already lies in the box; otherwise
    runs projected ascent from the four box corners and keeps the best value.
    """
    g = np.asarray(g, dtype=np.float64)
    if not np.any(g):
        return 0.0, region.feasible_point()

    x = _ellipse_support_point(g, region)
    if np.all(x >= region.box_lo) and np.all(x <= region.box_hi):
        return float(g @ x), x

    extent = 2.0 * max(float(region.ellipse.semi_axes.max()), float(np.max(region.box_hi - region.box_lo)))
    step = extent / float(np.linalg.norm(g))
    corners = [
        np.array([a, b])
        for a in (region.box_lo[0], region.box_hi[0])
        for b in (region.box_lo[1], region.box_hi[1])
    ]
    best_value, best_point = -np.inf, None
    for corner in corners:
        x = project_onto_region(corner, region)
        for _ in range(ASCENT_MAX_ITERS):
            x_new = project_onto_region(x + step * g, region)
            moved = float(np.linalg.norm(x_new - x))
            x = x_new
            if moved < ASCENT_TOL:
                break
        value = float(g @ x)
        if value > best_value:
            best_value, best_point = value, x
    return best_value, best_point


def regret_directions(allocation: AllocationPlan, default: AllocationPlan, weights: Sequence[float], integer: bool = False) -> np.ndarray:
    """Per-stratum coefficients of (s_k0, s_k1) in the regret, shape (K, 2)."""
    n_t, n_c = allocation.arms(integer)
    if np.any(n_t <= 0) or np.any(n_c <= 0):
        raise DatasetError("worst-case regret needs every arm count to be positive")
    d_t, d_c = default.arms()
    w = np.asarray(weights, dtype=np.float64)
    return np.column_stack([w * (1.0 / n_c - 1.0 / d_c), w * (1.0 / n_t - 1.0 / d_t)])


def stratum_worst_cases(
    allocation: AllocationPlan,
    regions: List[VarianceRegion],
    default: AllocationPlan,
    weights: Sequence[float],
    integer: bool = False,
) -> List[Tuple[float, np.ndarray]]:
    """Worst-case regret contribution and maximizing (s0, s1) for each stratum."""
    directions = regret_directions(allocation, default, weights, integer)
    return [maximize_linear(g, region) for g, region in zip(directions, regions)]


def worst_case_regret(
    allocation: AllocationPlan,
    regions: List[VarianceRegion],
    default: AllocationPlan,
    weights: Sequence[float],
    integer: bool = False,
) -> float:
    """max over s in the regions of risk(allocation, s) - risk(default, s)."""
    return float(sum(value for value, _ in stratum_worst_cases(allocation, regions, default, weights, integer)))
