# simulation package: synthetic populations and design benchmarks
from rctdesign.simulation.generator import generate_observational, stratum_weights, true_effects, true_sigmas
from rctdesign.simulation.pseudo import pseudo_experiment_losses, run_pseudo_experiments
from rctdesign.simulation.benchmark import BenchmarkReport, BenchmarkRow, benchmark, pilot_naive_plan

__all__ = [
    "BenchmarkReport",
    "BenchmarkRow",
    "benchmark",
    "generate_observational",
    "pilot_naive_plan",
    "pseudo_experiment_losses",
    "run_pseudo_experiments",
    "stratum_weights",
    "true_effects",
    "true_sigmas",
]
