"""Per-stratum confidence regions for (sigma^2(0), sigma^2(1))."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from rctdesign.config.settings import DesignConfig
from rctdesign.design.types import Dataset, StratumSample
from rctdesign.errors import NumericalError
from rctdesign.regions.bootstrap import ReplicateRectangle, bootstrap_rectangles, point_estimate
from rctdesign.regions.ellipse import Ellipse, min_volume_ellipse, shrink_to_coverage
from rctdesign.regions.projection import project_onto_region
from rctdesign.utils.logger import get_logger

logger = get_logger("regions")

VARIANCE_CAP = 0.25


@dataclass(frozen=True, eq=False)
class VarianceRegion:
    """Ellipse intersected with an axis-aligned box, in (s0, s1) coordinates."""
    ellipse: Ellipse
    box_lo: np.ndarray
    box_hi: np.ndarray
    stratum_id: str = ""
    point_estimate: Optional[np.ndarray] = None

    def __post_init__(self):
        lo = np.array(self.box_lo, dtype=np.float64).reshape(2)
        hi = np.array(self.box_hi, dtype=np.float64).reshape(2)
        if np.any(lo > hi):
            raise NumericalError(f"empty box [{lo}, {hi}]")
        object.__setattr__(self, "box_lo", lo)
        object.__setattr__(self, "box_hi", hi)

    @classmethod
    def with_default_box(cls, ellipse: Ellipse, sigma_floor: float, **kwargs) -> "VarianceRegion":
        return cls(ellipse, np.full(2, sigma_floor), np.full(2, VARIANCE_CAP), **kwargs)

    def contains(self, point, tol: float = 1e-9) -> bool:
        return contains(self, point, tol)

    def feasible_point(self) -> np.ndarray:
        """Ellipse center projected onto the region."""
        return project_onto_region(self.ellipse.center, self)


@dataclass(frozen=True)
class RegionBuild:
    """A region together with the rectangles it was built from."""
    region: VarianceRegion
    rectangles: Tuple[ReplicateRectangle, ...]


def contains(region: VarianceRegion, point, tol: float = 1e-9) -> bool:
    """True iff `point` is inside the ellipse (within tol) and inside the box."""
    x = np.asarray(point, dtype=np.float64)
    in_box = bool(np.all(x >= region.box_lo) and np.all(x <= region.box_hi))
    return in_box and region.ellipse.contains(x, tol)


def region_from_rectangles(
    rectangles: List[ReplicateRectangle],
    config: DesignConfig,
    stratum_id: str = "",
    estimate: Optional[np.ndarray] = None,
) -> VarianceRegion:
    """Ellipse fit, coverage shrink and box intersection for one stratum."""
    vertices = np.vstack([r.vertices() for r in rectangles])
    mve = min_volume_ellipse(vertices, tol=config.solver.mve_tol)
    shrunk = shrink_to_coverage(mve, rectangles, config.alpha)
    region = VarianceRegion.with_default_box(
        shrunk, config.sigma_floor, stratum_id=stratum_id, point_estimate=estimate
    )
    # the intersection must be nonempty for the optimizer to start
    anchor = region.feasible_point()
    if not contains(region, anchor, tol=1e-8):
        raise NumericalError(f"stratum {stratum_id!r}: confidence region is empty")
    return region


def build_region_with_rectangles(sample: StratumSample, config: DesignConfig) -> RegionBuild:
    rectangles = bootstrap_rectangles(sample, config.gamma, config.bootstrap_reps, config.seed)
    region = region_from_rectangles(rectangles, config, sample.stratum_id, point_estimate(sample))
    logger.debug(
        f"Stratum {sample.stratum_id}: center {region.ellipse.center}, semi-axes {region.ellipse.semi_axes}"
    )
    return RegionBuild(region, tuple(rectangles))


def build_region(sample: StratumSample, config: DesignConfig) -> VarianceRegion:
    """Bootstrap rectangles, then ellipse, shrink and clip to [eps, 0.25]^2."""
    return build_region_with_rectangles(sample, config).region


def build_regions(dataset: Dataset, config: DesignConfig) -> List[RegionBuild]:
    """Regions for every stratum, in dataset order.

    Strata run on `config.threads` workers; results do not depend on the
    schedule since every replicate has its own seed stream.
    """
    logger.info(
        f"Building {dataset.K} regions (gamma={config.gamma}, alpha={config.alpha}, B={config.bootstrap_reps})"
    )
    if config.threads <= 1 or dataset.K == 1:
        return [build_region_with_rectangles(s, config) for s in dataset]
    with ThreadPoolExecutor(max_workers=config.threads) as pool:
        return list(pool.map(lambda s: build_region_with_rectangles(s, config), dataset))
