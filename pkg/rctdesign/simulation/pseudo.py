"""Pseudo-experiments: simulated RCTs scored against the gold standard."""

import numpy as np

from rctdesign.config.settings import SyntheticSpec
from rctdesign.design.types import AllocationPlan
from rctdesign.errors import DatasetError
from rctdesign.simulation.generator import stratum_weights, true_effects

PSEUDO_STREAM = 0x5053


def pseudo_experiment_losses(spec: SyntheticSpec, plan: AllocationPlan, reps: int, seed: int) -> np.ndarray:
    """Weighted L2 loss of the difference-in-means estimates, one per repetition.

    Each repetition draws n_kt treated outcomes from Bern(mu_k(1)) and n_kc
    control outcomes from Bern(mu_k(0)); only the arm success counts matter,
    so they are drawn as binomials.
    """
    if reps < 1:
        raise DatasetError(f"reps must be >= 1, got {reps}")
    if plan.K != spec.K:
        raise DatasetError(f"plan has {plan.K} strata, spec has {spec.K}")
    n_t, n_c = plan.treated_int, plan.control_int
    if np.any(n_t < 1) or np.any(n_c < 1):
        raise DatasetError("pseudo-experiments need every arm count >= 1")

    mu0 = np.array([s.mu0 for s in spec.strata])
    mu1 = np.array([s.mu1 for s in spec.strata])
    tau = true_effects(spec)
    w = stratum_weights(spec)

    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, PSEUDO_STREAM])))
    successes_t = rng.binomial(n_t, mu1, size=(reps, spec.K))
    successes_c = rng.binomial(n_c, mu0, size=(reps, spec.K))
    tau_hat = successes_t / n_t - successes_c / n_c
    return ((tau_hat - tau) ** 2 * w).sum(axis=1)


def run_pseudo_experiments(spec: SyntheticSpec, plan: AllocationPlan, reps: int, seed: int) -> float:
    """Average loss over `reps` pseudo-experiments."""
    return float(pseudo_experiment_losses(spec, plan, reps, seed).mean())
