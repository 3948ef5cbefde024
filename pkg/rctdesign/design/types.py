"""Core domain types: observational units, strata and allocation plans."""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, field_validator


class Arm(str, Enum):
    TREATED = "treated"
    CONTROL = "control"


class UnitRecord(BaseModel):
    """One observational unit: treatment flag, binary outcome, fitted propensity."""
    model_config = ConfigDict(frozen=True)

    treated: bool
    outcome: int
    propensity: float

    @field_validator("outcome")
    @classmethod
    def _binary_outcome(cls, v):
        if v not in (0, 1):
            raise ValueError("outcome must be 0 or 1")
        return v

    @field_validator("propensity")
    @classmethod
    def _open_unit_interval(cls, v):
        if not 0.0 < v < 1.0:
            raise ValueError("propensity out of range")
        return v


def _frozen(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class StratumSample:
    """Units of one stratum stored column-wise.

    Attributes:
        stratum_id: Stratum key
        weight: Population weight w_k
        treated: Treatment flags
        outcome: Binary outcomes as floats
        propensity: Fitted propensities
    """
    stratum_id: str
    weight: float
    treated: npt.NDArray[np.bool_]
    outcome: npt.NDArray[np.float64]
    propensity: npt.NDArray[np.float64]

    def __post_init__(self):
        object.__setattr__(self, "treated", _frozen(self.treated, bool))
        object.__setattr__(self, "outcome", _frozen(self.outcome, np.float64))
        object.__setattr__(self, "propensity", _frozen(self.propensity, np.float64))
        if not (len(self.treated) == len(self.outcome) == len(self.propensity)):
            raise ValueError("unit columns must have equal length")

    @classmethod
    def from_units(cls, stratum_id: str, units: Sequence[UnitRecord], weight: float = 1.0) -> "StratumSample":
        return cls(
            stratum_id=str(stratum_id),
            weight=float(weight),
            treated=[u.treated for u in units],
            outcome=[u.outcome for u in units],
            propensity=[u.propensity for u in units],
        )

    @property
    def n(self) -> int:
        return len(self.outcome)

    @property
    def n_treated(self) -> int:
        return int(self.treated.sum())

    @property
    def n_control(self) -> int:
        return self.n - self.n_treated

    def units(self) -> List[UnitRecord]:
        return [
            UnitRecord(treated=bool(t), outcome=int(y), propensity=float(p))
            for t, y, p in zip(self.treated, self.outcome, self.propensity)
        ]

    def arm(self, arm: Arm) -> Tuple[np.ndarray, np.ndarray]:
        """Outcomes and propensities of the units in `arm`."""
        mask = self.treated if arm == Arm.TREATED else ~self.treated
        return self.outcome[mask], self.propensity[mask]

    def resample(self, indices: np.ndarray) -> "StratumSample":
        return StratumSample(
            stratum_id=self.stratum_id,
            weight=self.weight,
            treated=self.treated[indices],
            outcome=self.outcome[indices],
            propensity=self.propensity[indices],
        )

    def with_weight(self, weight: float) -> "StratumSample":
        return StratumSample(self.stratum_id, float(weight), self.treated, self.outcome, self.propensity)


@dataclass(frozen=True)
class Dataset:
    """Validated strata with weights summing to one."""
    strata: Tuple[StratumSample, ...]

    @property
    def K(self) -> int:
        return len(self.strata)

    @property
    def stratum_ids(self) -> Tuple[str, ...]:
        return tuple(s.stratum_id for s in self.strata)

    @property
    def weights(self) -> np.ndarray:
        return np.array([s.weight for s in self.strata])

    def __iter__(self):
        return iter(self.strata)

    def __len__(self):
        return len(self.strata)


@dataclass(frozen=True, eq=False)
class AllocationPlan:
    """Per-stratum treated/control counts in continuous and rounded form."""
    stratum_ids: Tuple[str, ...]
    treated: npt.NDArray[np.float64]
    control: npt.NDArray[np.float64]
    treated_int: npt.NDArray[np.int64]
    control_int: npt.NDArray[np.int64]

    def __post_init__(self):
        object.__setattr__(self, "stratum_ids", tuple(self.stratum_ids))
        object.__setattr__(self, "treated", _frozen(self.treated, np.float64))
        object.__setattr__(self, "control", _frozen(self.control, np.float64))
        object.__setattr__(self, "treated_int", _frozen(self.treated_int, np.int64))
        object.__setattr__(self, "control_int", _frozen(self.control_int, np.int64))

    @classmethod
    def from_continuous(
        cls,
        stratum_ids: Iterable[str],
        treated: Sequence[float],
        control: Sequence[float],
        n_r: int,
    ) -> "AllocationPlan":
        from rctdesign.design.allocation import round_allocation

        treated = np.asarray(treated, dtype=np.float64)
        control = np.asarray(control, dtype=np.float64)
        counts = np.column_stack([treated, control]).ravel()
        rounded = round_allocation(counts, n_r).reshape(-1, 2)
        return cls(tuple(stratum_ids), treated, control, rounded[:, 0], rounded[:, 1])

    @property
    def K(self) -> int:
        return len(self.stratum_ids)

    @property
    def n_r(self) -> int:
        return int(self.treated_int.sum() + self.control_int.sum())

    def arms(self, integer: bool = False) -> Tuple[np.ndarray, np.ndarray]:
        if integer:
            return self.treated_int.astype(np.float64), self.control_int.astype(np.float64)
        return self.treated, self.control

    def to_dict(self) -> Dict[str, list]:
        return {
            "stratum": list(self.stratum_ids),
            "n_treated": self.treated.tolist(),
            "n_control": self.control.tolist(),
            "n_treated_int": self.treated_int.tolist(),
            "n_control_int": self.control_int.tolist(),
        }
