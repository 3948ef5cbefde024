"""Bootstrap rectangles of Gamma-extrema for one stratum."""

import hashlib
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from rctdesign.design.types import Arm, StratumSample
from rctdesign.errors import ResampleError
from rctdesign.sensitivity.sipw import MeanBounds, extrema_from_bounds, sipw_mean, weight_bounds
from rctdesign.sensitivity.variance import VarBounds, bernoulli_variance, variance_bounds
from rctdesign.utils.logger import get_logger

logger = get_logger("bootstrap")

MAX_REDRAWS = 1000


@dataclass(frozen=True)
class ReplicateRectangle:
    """Extrema of one bootstrap replicate, as a rectangle in (s0, s1) space."""
    replicate: int
    mean0: MeanBounds
    mean1: MeanBounds
    sigma0_bounds: VarBounds
    sigma1_bounds: VarBounds

    def vertices(self) -> np.ndarray:
        """The four corners as rows (sigma^2(0), sigma^2(1))."""
        s0, s1 = self.sigma0_bounds, self.sigma1_bounds
        return np.array([
            [s0.var_lower, s1.var_lower],
            [s0.var_lower, s1.var_upper],
            [s0.var_upper, s1.var_lower],
            [s0.var_upper, s1.var_upper],
        ])


def stratum_key(stratum_id: str) -> int:
    """Stable 64-bit integer derived from a stratum id."""
    return int.from_bytes(hashlib.sha256(stratum_id.encode("utf-8")).digest()[:8], "little")


def replicate_rng(seed: int, stratum_id: str, replicate: int) -> np.random.Generator:
    """Generator for one replicate; depends only on (seed, stratum, replicate)."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, stratum_key(stratum_id), replicate])))


def _unit_weight_bounds(sample: StratumSample, gamma: float) -> Tuple[np.ndarray, np.ndarray]:
    lo_t, hi_t = weight_bounds(sample.propensity, gamma, Arm.TREATED)
    lo_c, hi_c = weight_bounds(sample.propensity, gamma, Arm.CONTROL)
    return np.where(sample.treated, lo_t, lo_c), np.where(sample.treated, hi_t, hi_c)


def bootstrap_rectangles(sample: StratumSample, gamma: float, B: int, seed: int) -> List[ReplicateRectangle]:
    """Gamma-extrema rectangles over B within-stratum bootstrap replicates.

    Units are resampled jointly across arms. A draw missing an arm is redrawn
    from the same replicate stream, up to MAX_REDRAWS times.
    """
    if B < 1:
        raise ValueError(f"B must be >= 1, got {B}")

    n = sample.n
    lower, upper = _unit_weight_bounds(sample, gamma)
    rectangles = []
    redraws = 0

    for b in range(B):
        rng = replicate_rng(seed, sample.stratum_id, b)
        for _ in range(MAX_REDRAWS):
            idx = rng.integers(0, n, size=n)
            treated = sample.treated[idx]
            if treated.any() and not treated.all():
                break
            redraws += 1
        else:
            raise ResampleError(
                f"stratum {sample.stratum_id!r}: replicate {b} lacked an arm after {MAX_REDRAWS} draws"
            )

        y, lo, hi = sample.outcome[idx], lower[idx], upper[idx]
        mean1 = extrema_from_bounds(y[treated], lo[treated], hi[treated])
        mean0 = extrema_from_bounds(y[~treated], lo[~treated], hi[~treated])
        rectangles.append(ReplicateRectangle(b, mean0, mean1, variance_bounds(mean0), variance_bounds(mean1)))

    if redraws:
        logger.warning(f"Stratum {sample.stratum_id}: redrew {redraws} replicates missing an arm")
    return rectangles


def mean_confidence_intervals(rectangles: List[ReplicateRectangle], alpha: float) -> Dict[str, Tuple[float, float]]:
    """Percentile intervals for both arm means, robust to Gamma-level confounding.

    Lower end is the alpha/2 quantile of replicate lower extrema, upper end the
    1 - alpha/2 quantile of replicate upper extrema.
    """
    out = {}
    for arm, attr in ((Arm.CONTROL.value, "mean0"), (Arm.TREATED.value, "mean1")):
        lows = np.array([getattr(r, attr).mu_lower for r in rectangles])
        highs = np.array([getattr(r, attr).mu_upper for r in rectangles])
        out[arm] = (float(np.quantile(lows, alpha / 2.0)), float(np.quantile(highs, 1.0 - alpha / 2.0)))
    return out


def point_estimate(sample: StratumSample) -> np.ndarray:
    """Plug-in (sigma^2(0), sigma^2(1)) from the full-sample SIPW means."""
    return np.array([
        bernoulli_variance(sipw_mean(sample, Arm.CONTROL)),
        bernoulli_variance(sipw_mean(sample, Arm.TREATED)),
    ])
