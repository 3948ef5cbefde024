"""Projected gradient ascent for the regret-minimizing design."""

from dataclasses import dataclass, field
from typing import Dict, List, Sequence

import numpy as np

from rctdesign.config.settings import DesignConfig
from rctdesign.design.allocation import risk
from rctdesign.design.types import AllocationPlan
from rctdesign.errors import ConvergenceError, NumericalError
from rctdesign.optimizer.objective import allocation_from_sigmas, objective_gradient, objective_value
from rctdesign.optimizer.regret import worst_case_regret
from rctdesign.regions.projection import project_onto_box, project_onto_region
from rctdesign.regions.region import VarianceRegion
from rctdesign.utils.logger import get_logger

logger = get_logger("solver")

ARMIJO = 1e-4
INITIAL_STEP = 1.0
MAX_STEP = 1e12
MAX_HALVINGS = 80


@dataclass
class SolveReport:
    """Outcome of one solve."""
    sigmas: np.ndarray
    objective: float
    iterations: int
    converged: bool
    allocation: AllocationPlan
    default: AllocationPlan
    worst_case_regret: float
    worst_case_regret_integer: float
    defaulted: bool = False
    trace: List[float] = field(default_factory=list)

    @property
    def rounding_slack(self) -> float:
        return self.worst_case_regret_integer - self.worst_case_regret

    def to_dict(self) -> Dict:
        return {
            "strata": list(self.allocation.stratum_ids),
            "sigmas": {"s0": self.sigmas[:, 0].tolist(), "s1": self.sigmas[:, 1].tolist()},
            "objective": self.objective,
            "iterations": self.iterations,
            "converged": self.converged,
            "defaulted": self.defaulted,
            "allocation": self.allocation.to_dict(),
            "default": self.default.to_dict(),
            "worst_case_regret": self.worst_case_regret,
            "worst_case_regret_integer": self.worst_case_regret_integer,
            "rounding_slack": self.rounding_slack,
        }

    def raise_if_not_converged(self) -> None:
        if not self.converged:
            raise ConvergenceError(
                f"solver stopped at max_iters after {self.iterations} iterations, objective {self.objective:.6g}"
            )


def project_point(s: np.ndarray, regions: Sequence[VarianceRegion]) -> np.ndarray:
    """Row-wise projection onto the product of regions."""
    return np.vstack([project_onto_region(row, region) for row, region in zip(s, regions)])


def initial_point(regions: Sequence[VarianceRegion]) -> np.ndarray:
    """Region centers clipped to their boxes, then made feasible."""
    return np.vstack([
        project_onto_region(project_onto_box(r.ellipse.center, r.box_lo, r.box_hi), r) for r in regions
    ])


def maximize_worst_case(
    regions: Sequence[VarianceRegion],
    weights: Sequence[float],
    config: DesignConfig,
    default: AllocationPlan,
) -> SolveReport:
    """Maximize the concave objective over the product of regions.

    Each iteration backtracks (halving, Armijo constant 1e-4) from twice the
    last accepted step, the first iteration from 1.0. Stops once the objective
    changes by less than rel_tol times the default risk at the start point, or
    at max_iters.
    """
    if len(regions) == 0:
        raise NumericalError("maximize_worst_case needs at least one region")
    w = np.asarray(weights, dtype=np.float64)

    def f(s):
        value = objective_value(s, w, config, default)
        if not np.isfinite(value):
            raise NumericalError("objective is not finite")
        return value

    x = initial_point(regions)
    value = f(x)
    scale = max(risk(default, x[:, 1], x[:, 0], w), abs(value), 1e-300)
    trace = [value]
    step = INITIAL_STEP
    converged = False
    iterations = 0

    for iterations in range(1, config.solver.max_iters + 1):
        grad = objective_gradient(x, w, config, default)
        t = min(step, MAX_STEP)
        for _ in range(MAX_HALVINGS):
            x_new = project_point(x + t * grad, regions)
            value_new = f(x_new)
            if value_new >= value + ARMIJO * float(np.sum(grad * (x_new - x))):
                break
            t /= 2.0
        else:
            # no step improves: x is stationary to machine precision
            converged = True
            break

        delta = value_new - value
        moved = float(np.linalg.norm(x_new - x))
        x, value = x_new, value_new
        trace.append(value)
        step = 2.0 * t
        if abs(delta) <= config.solver.rel_tol * scale or moved == 0.0:
            converged = True
            break

    if converged:
        logger.info(f"Solver converged in {iterations} iterations, objective {value:.6g}")
    else:
        logger.warning(f"Solver stopped at max_iters={config.solver.max_iters}, objective {value:.6g}")

    allocation = allocation_from_sigmas(x, w, config.n_r, tuple(default.stratum_ids))
    regret = worst_case_regret(allocation, list(regions), default, w)
    # default regret is identically zero
    defaulted = value >= -config.solver.rel_tol * scale or regret > 0.0
    if defaulted:
        logger.info(f"Worst-case regret {regret:.3g} not below the default's; returning the default allocation")
        allocation, regret = default, 0.0

    return SolveReport(
        sigmas=x,
        objective=value,
        iterations=iterations,
        converged=converged,
        allocation=allocation,
        default=default,
        worst_case_regret=regret,
        worst_case_regret_integer=worst_case_regret(allocation, list(regions), default, w, integer=True),
        defaulted=defaulted,
        trace=trace,
    )
