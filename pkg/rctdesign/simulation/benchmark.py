"""Design comparison on synthetic populations."""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from rctdesign.config.settings import DefaultRule, DesignConfig, SyntheticSpec
from rctdesign.design.allocation import default_allocation
from rctdesign.design.types import AllocationPlan, Arm, Dataset
from rctdesign.optimizer.objective import naive_allocation
from rctdesign.optimizer.solver import maximize_worst_case
from rctdesign.regions.region import build_regions
from rctdesign.sensitivity.sipw import sipw_mean
from rctdesign.sensitivity.variance import bernoulli_variance
from rctdesign.simulation.generator import generate_observational, true_effects
from rctdesign.simulation.pseudo import pseudo_experiment_losses
from rctdesign.utils.logger import get_logger

logger = get_logger("benchmark")

BENCHMARK_COLUMNS = ["design", "gamma", "avg_loss", "rel_to_equal", "rel_to_naive", "reps", "seed", "std_error"]


@dataclass(frozen=True)
class BenchmarkRow:
    design: str
    gamma: float
    avg_loss: float
    rel_to_equal: float
    rel_to_naive: float
    reps: int
    seed: int
    std_error: float


@dataclass
class BenchmarkReport:
    """Average pseudo-experiment losses per design and Gamma."""
    rows: List[BenchmarkRow]
    tau: np.ndarray
    reps: int
    seed: int
    plans: Dict[str, AllocationPlan] = field(default_factory=dict)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([vars(r) for r in self.rows], columns=BENCHMARK_COLUMNS)

    def row(self, design: str, gamma: float) -> BenchmarkRow:
        for r in self.rows:
            if r.design == design and r.gamma == gamma:
                return r
        raise KeyError((design, gamma))


def _relative(loss: float, reference: float) -> float:
    if reference == 0.0:
        return 0.0
    return loss / reference - 1.0


def pilot_naive_plan(dataset: Dataset, n_r: int) -> AllocationPlan:
    """Allocation that plugs the SIPW point estimates into the closed form."""
    sd1 = [np.sqrt(bernoulli_variance(sipw_mean(s, Arm.TREATED))) for s in dataset]
    sd0 = [np.sqrt(bernoulli_variance(sipw_mean(s, Arm.CONTROL))) for s in dataset]
    return naive_allocation(sd1, sd0, dataset.weights, n_r, dataset.stratum_ids)


def benchmark(spec: SyntheticSpec, config: DesignConfig, gamma_grid: Optional[Sequence[float]] = None) -> BenchmarkReport:
    """Generate, build regions, design and score every design at every Gamma.

    Equal, Weighted and Naive do not depend on Gamma; their rows repeat
    for each Gamma so every Gamma block is self-contained. All designs share
    the pseudo-experiment seed.
    """
    grid = list(gamma_grid) if gamma_grid is not None else list(spec.gamma_grid)
    if not grid:
        raise ValueError("gamma grid is empty")
    reps, seed = spec.reps, config.seed

    dataset = generate_observational(spec)
    plans = {
        "Equal": default_allocation(config.model_copy(update={"default_rule": DefaultRule.EQUAL}), dataset),
        "Weighted": default_allocation(config.model_copy(update={"default_rule": DefaultRule.WEIGHTED}), dataset),
        "Naive": pilot_naive_plan(dataset, config.n_r),
    }
    default = default_allocation(config, dataset)

    losses = {name: pseudo_experiment_losses(spec, plan, reps, seed) for name, plan in plans.items()}
    rows = []
    for gamma in grid:
        cfg = config.model_copy(update={"gamma": float(gamma)})
        regions = [b.region for b in build_regions(dataset, cfg)]
        report = maximize_worst_case(regions, dataset.weights, cfg, default)
        key = f"RegretMin@{gamma:g}"
        plans[key] = report.allocation
        regret_losses = pseudo_experiment_losses(spec, report.allocation, reps, seed)

        equal_avg = float(losses["Equal"].mean())
        naive_avg = float(losses["Naive"].mean())
        for design, values in (
            ("Equal", losses["Equal"]),
            ("Weighted", losses["Weighted"]),
            ("Naive", losses["Naive"]),
            ("RegretMin", regret_losses),
        ):
            avg = float(values.mean())
            rows.append(BenchmarkRow(
                design=design,
                gamma=float(gamma),
                avg_loss=avg,
                rel_to_equal=_relative(avg, equal_avg),
                rel_to_naive=_relative(avg, naive_avg),
                reps=reps,
                seed=seed,
                std_error=float(values.std(ddof=1) / np.sqrt(reps)) if reps > 1 else 0.0,
            ))
        logger.info(
            f"gamma={gamma:g}: RegretMin {rows[-1].avg_loss:.6g} "
            f"({100 * rows[-1].rel_to_equal:+.2f}% vs Equal, {100 * rows[-1].rel_to_naive:+.2f}% vs Naive)"
        )

    return BenchmarkReport(rows=rows, tau=true_effects(spec), reps=reps, seed=seed, plans=plans)
