"""File formats: dataset and weights CSV, region JSON, rectangle/plan/benchmark CSV."""

import json
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ValidationError

from rctdesign.design.allocation import validate_dataset
from rctdesign.design.types import AllocationPlan, Dataset, StratumSample
from rctdesign.errors import DatasetError
from rctdesign.regions.bootstrap import mean_confidence_intervals
from rctdesign.regions.ellipse import Ellipse
from rctdesign.regions.region import RegionBuild, VarianceRegion
from rctdesign.utils.logger import get_logger

logger = get_logger("io")

DATASET_COLUMNS = ["stratum", "treated", "outcome", "propensity"]
RECTANGLE_COLUMNS = ["stratum", "replicate", "s0_lo", "s0_hi", "s1_lo", "s1_hi"]
PLAN_COLUMNS = ["stratum", "design", "n_treated", "n_control", "n_treated_int", "n_control_int"]

PathLike = Union[str, Path]


def _read_csv(path: PathLike, required: Sequence[str]) -> pd.DataFrame:
    try:
        frame = pd.read_csv(path, dtype={"stratum": str}, keep_default_na=False, na_values=[""])
    except FileNotFoundError:
        raise DatasetError(f"file not found: {path}")
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise DatasetError(f"cannot parse {path}: {e}")
    missing = [c for c in required if c not in frame.columns]
    if missing:
        raise DatasetError(f"{path}: missing column(s): {', '.join(missing)}", line=1)
    return frame


def _numeric(frame: pd.DataFrame, column: str, path: PathLike) -> np.ndarray:
    values = pd.to_numeric(frame[column], errors="coerce")
    bad = np.flatnonzero(values.isna().to_numpy())
    if len(bad):
        # +2: header line plus 1-based numbering
        raise DatasetError(f"{path}: non-numeric {column} {frame[column].iloc[bad[0]]!r}", line=int(bad[0]) + 2)
    return values.to_numpy(dtype=np.float64)


def _first_bad(mask: np.ndarray) -> Optional[int]:
    bad = np.flatnonzero(mask)
    return int(bad[0]) + 2 if len(bad) else None


def read_weights(path: PathLike) -> Dict[str, float]:
    frame = _read_csv(path, ["stratum", "weight"])
    weights = _numeric(frame, "weight", path)
    line = _first_bad(weights < 0)
    if line is not None:
        raise DatasetError(f"{path}: negative weight", line=line)
    return dict(zip(frame["stratum"].astype(str), weights))


def read_dataset(path: PathLike, weights_path: Optional[PathLike] = None) -> Dataset:
    """Load and validate `stratum,treated,outcome,propensity` rows.

    Weights come from `weights_path` (`stratum,weight`) or default to n_ok/n_o.
    """
    frame = _read_csv(path, DATASET_COLUMNS)
    if frame.empty:
        raise DatasetError(f"{path}: no rows")
    if frame["stratum"].isna().any():
        raise DatasetError(f"{path}: empty stratum key", line=_first_bad(frame["stratum"].isna().to_numpy()))

    treated = _numeric(frame, "treated", path)
    outcome = _numeric(frame, "outcome", path)
    propensity = _numeric(frame, "propensity", path)

    line = _first_bad((treated != 0) & (treated != 1))
    if line is not None:
        raise DatasetError(f"{path}: treated must be 0 or 1", line=line)
    line = _first_bad((outcome != 0) & (outcome != 1))
    if line is not None:
        raise DatasetError(f"{path}: non-binary outcome", line=line)
    line = _first_bad((propensity <= 0) | (propensity >= 1))
    if line is not None:
        raise DatasetError(f"{path}: propensity out of range", line=line)

    keys = frame["stratum"].astype(str).to_numpy()
    order = list(pd.unique(keys))
    weights = read_weights(weights_path) if weights_path is not None else None
    if weights is not None:
        unknown = sorted(set(order) - set(weights))
        if unknown:
            raise DatasetError(f"{weights_path}: no weight for stratum {unknown[0]!r}")

    strata = []
    for key in order:
        mask = keys == key
        weight = weights[key] if weights is not None else float(mask.sum()) / len(keys)
        strata.append(StratumSample(key, weight, treated[mask] == 1, outcome[mask], propensity[mask]))
    dataset = validate_dataset(strata)
    logger.info(f"Loaded {len(keys)} units in {dataset.K} strata from {path}")
    return dataset


def write_dataset(dataset: Dataset, path: PathLike) -> None:
    frames = [
        pd.DataFrame({
            "stratum": s.stratum_id,
            "treated": s.treated.astype(int),
            "outcome": s.outcome.astype(int),
            "propensity": s.propensity,
        })
        for s in dataset
    ]
    pd.concat(frames, ignore_index=True).to_csv(path, index=False)


def write_weights(dataset: Dataset, path: PathLike) -> None:
    pd.DataFrame({"stratum": list(dataset.stratum_ids), "weight": dataset.weights}).to_csv(path, index=False)


class RegionRecord(BaseModel):
    """Serialized VarianceRegion."""
    stratum: str
    ellipse_center: Tuple[float, float]
    ellipse_shape: Tuple[Tuple[float, float], Tuple[float, float]]
    box_lo: Tuple[float, float]
    box_hi: Tuple[float, float]
    point_estimate: Optional[Tuple[float, float]] = None
    mean_intervals: Optional[Dict[str, Tuple[float, float]]] = None

    @classmethod
    def from_region(cls, region: VarianceRegion, mean_intervals=None) -> "RegionRecord":
        return cls(
            stratum=region.stratum_id,
            ellipse_center=tuple(region.ellipse.center.tolist()),
            ellipse_shape=tuple(tuple(row) for row in region.ellipse.shape.tolist()),
            box_lo=tuple(region.box_lo.tolist()),
            box_hi=tuple(region.box_hi.tolist()),
            point_estimate=None if region.point_estimate is None else tuple(np.asarray(region.point_estimate).tolist()),
            mean_intervals=mean_intervals,
        )

    def to_region(self) -> VarianceRegion:
        return VarianceRegion(
            Ellipse(np.array(self.ellipse_center), np.array(self.ellipse_shape)),
            np.array(self.box_lo),
            np.array(self.box_hi),
            stratum_id=self.stratum,
            point_estimate=None if self.point_estimate is None else np.array(self.point_estimate),
        )


class RegionsDocument(BaseModel):
    gamma: float
    alpha: float
    bootstrap_reps: int
    seed: int
    regions: List[RegionRecord]


def write_regions_json(builds: Sequence[RegionBuild], config, path: PathLike) -> None:
    doc = RegionsDocument(
        gamma=config.gamma,
        alpha=config.alpha,
        bootstrap_reps=config.bootstrap_reps,
        seed=config.seed,
        regions=[
            RegionRecord.from_region(b.region, mean_confidence_intervals(list(b.rectangles), config.alpha))
            for b in builds
        ],
    )
    Path(path).write_text(doc.model_dump_json(indent=2) + "\n", encoding="utf-8")


def read_regions_json(path: PathLike) -> RegionsDocument:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise DatasetError(f"file not found: {path}")
    try:
        return RegionsDocument.model_validate_json(text)
    except ValidationError as e:
        raise DatasetError(f"{path} does not match the region schema: {e}")


def load_regions(path: PathLike) -> List[VarianceRegion]:
    return [record.to_region() for record in read_regions_json(path).regions]


def write_rectangles_csv(builds: Sequence[RegionBuild], path: PathLike) -> None:
    rows = [
        (b.region.stratum_id, r.replicate, r.sigma0_bounds.var_lower, r.sigma0_bounds.var_upper,
         r.sigma1_bounds.var_lower, r.sigma1_bounds.var_upper)
        for b in builds
        for r in b.rectangles
    ]
    pd.DataFrame(rows, columns=RECTANGLE_COLUMNS).to_csv(path, index=False)


def read_rectangles_csv(path: PathLike) -> Dict[str, np.ndarray]:
    """Rectangles per stratum as (B, 4) arrays of s0_lo, s0_hi, s1_lo, s1_hi."""
    frame = _read_csv(path, RECTANGLE_COLUMNS)
    out: Dict[str, np.ndarray] = {}
    if frame.empty:
        return out
    values = np.column_stack([_numeric(frame, c, path) for c in RECTANGLE_COLUMNS[2:]])
    keys = frame["stratum"].astype(str).to_numpy()
    for key in pd.unique(keys):
        out[key] = values[keys == key]
    return out


def write_allocation_csv(plan: AllocationPlan, path: PathLike) -> None:
    pd.DataFrame({
        "stratum": list(plan.stratum_ids),
        "n_treated": plan.treated_int,
        "n_control": plan.control_int,
    }).to_csv(path, index=False)


def write_plans_csv(plans: Dict[str, AllocationPlan], path: PathLike) -> None:
    frames = [
        pd.DataFrame({
            "stratum": list(plan.stratum_ids),
            "design": name,
            "n_treated": plan.treated,
            "n_control": plan.control,
            "n_treated_int": plan.treated_int,
            "n_control_int": plan.control_int,
        })
        for name, plan in plans.items()
    ]
    pd.concat(frames, ignore_index=True)[PLAN_COLUMNS].to_csv(path, index=False)


def read_plans_csv(path: PathLike) -> pd.DataFrame:
    frame = _read_csv(path, PLAN_COLUMNS)
    for column in PLAN_COLUMNS[2:]:
        frame[column] = _numeric(frame, column, path)
    return frame


def write_json(payload: dict, path: PathLike) -> None:
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def write_benchmark_csv(frame: pd.DataFrame, path: PathLike) -> None:
    frame.to_csv(path, index=False)


def read_benchmark_csv(path: PathLike) -> pd.DataFrame:
    frame = _read_csv(path, ["design", "gamma", "avg_loss"])
    frame["gamma"] = _numeric(frame, "gamma", path)
    frame["avg_loss"] = _numeric(frame, "avg_loss", path)
    return frame
