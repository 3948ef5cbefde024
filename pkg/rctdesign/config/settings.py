"""Configuration models for design runs and synthetic benchmarks."""

from enum import Enum
from typing import List, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class DefaultRule(str, Enum):
    """Rule producing the default allocation that regret is measured against."""
    EQUAL = "Equal"
    WEIGHTED = "Weighted"


class SolverConfig(BaseModel):
    """Tolerances for the ellipse fit and the projected gradient solver."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    max_iters: int = Field(10000, ge=1)
    rel_tol: float = Field(1e-10, gt=0)
    mve_tol: float = Field(1e-7, gt=0)


class DesignConfig(BaseModel):
    """Parameters of one design run.

    `n_r >= 2K` depends on the dataset and is checked where the strata are known.
    """
    model_config = ConfigDict(frozen=True, extra="forbid")

    gamma: float = Field(1.0, ge=1.0)
    alpha: float = Field(0.10, gt=0.0, lt=1.0)
    bootstrap_reps: int = Field(200, ge=1)
    n_r: int = Field(1000, ge=2)
    default_rule: DefaultRule = DefaultRule.EQUAL
    seed: int = Field(0, ge=0, lt=2**64)
    sigma_floor: float = Field(1e-8, gt=0.0, lt=0.25)
    solver: SolverConfig = SolverConfig()
    threads: int = Field(1, ge=1)

    @model_validator(mode="before")
    @classmethod
    def _nest_solver_keys(cls, data):
        # flat config files put solver keys at the top level
        if isinstance(data, dict):
            flat = {k: data[k] for k in ("max_iters", "rel_tol", "mve_tol") if k in data}
            if flat:
                data = {k: v for k, v in data.items() if k not in flat}
                solver = dict(data.get("solver") or {})
                solver.update(flat)
                data["solver"] = solver
        return data


class SyntheticStratum(BaseModel):
    """One stratum of a synthetic population."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    stratum_id: str
    mu0: float = Field(ge=0.0, le=1.0)
    mu1: float = Field(ge=0.0, le=1.0)
    n_obs: int = Field(ge=2)
    propensity: float = Field(gt=0.0, lt=1.0)
    propensity_spread: float = Field(0.0, ge=0.0)


class SyntheticSpec(BaseModel):
    """Synthetic population with a latent confounder of known strength."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    strata: List[SyntheticStratum] = Field(min_length=1)
    confounding_gamma: float = Field(1.0, ge=1.0)
    outcome_tilt: float = Field(0.1, ge=0.0)
    weighting: Literal["population", "equal"] = "population"
    seed: int = Field(0, ge=0, lt=2**64)
    reps: int = Field(500, ge=1)
    gamma_grid: List[float] = Field(default_factory=lambda: [1.0, 1.1, 1.5, 2.0], min_length=1)

    @field_validator("strata")
    @classmethod
    def _unique_ids(cls, strata):
        ids = [s.stratum_id for s in strata]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate stratum ids")
        return strata

    @field_validator("gamma_grid")
    @classmethod
    def _gammas_at_least_one(cls, grid):
        if any(g < 1.0 for g in grid):
            raise ValueError("gamma_grid values must be >= 1")
        return grid

    @property
    def K(self) -> int:
        return len(self.strata)
