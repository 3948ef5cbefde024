# design package: domain types, validation, default allocations, risk
from rctdesign.design.types import AllocationPlan, Arm, Dataset, StratumSample, UnitRecord
from rctdesign.design.allocation import (
    default_allocation,
    l2_loss,
    risk,
    round_allocation,
    validate_dataset,
)

__all__ = [
    "AllocationPlan",
    "Arm",
    "Dataset",
    "StratumSample",
    "UnitRecord",
    "default_allocation",
    "l2_loss",
    "risk",
    "round_allocation",
    "validate_dataset",
]
