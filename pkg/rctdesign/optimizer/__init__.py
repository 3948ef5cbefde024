# optimizer package: regret objective, worst-case regret, projected gradient solver
from rctdesign.optimizer.objective import (
    SigmaPoint,
    allocation_from_sigmas,
    naive_allocation,
    objective_gradient,
    objective_value,
)
from rctdesign.optimizer.regret import maximize_linear, stratum_worst_cases, worst_case_regret
from rctdesign.optimizer.solver import SolveReport, initial_point, maximize_worst_case, project_point
from rctdesign.regions.projection import project_onto_region

__all__ = [
    "SigmaPoint",
    "SolveReport",
    "allocation_from_sigmas",
    "initial_point",
    "maximize_linear",
    "maximize_worst_case",
    "naive_allocation",
    "objective_gradient",
    "objective_value",
    "project_onto_region",
    "project_point",
    "stratum_worst_cases",
    "worst_case_regret",
]
