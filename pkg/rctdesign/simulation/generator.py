"""Synthetic observational data with a latent binary confounder.

Within stratum k a unit has fitted propensity pi (the observed-covariate
treatment probability). A latent U moves the true treatment odds to
odds(pi) * G or odds(pi) / G, so the selection odds ratio against the
recorded propensity is exactly G^{+-1}. P(U = 1) = q is chosen so the
U-marginal treatment probability is pi again, and both potential-outcome
probabilities shift by outcome_tilt * (U - q), leaving the stratum means
at (mu_k(0), mu_k(1)).
"""

from typing import List

import numpy as np

from rctdesign.config.settings import SyntheticSpec, SyntheticStratum
from rctdesign.design.allocation import validate_dataset
from rctdesign.design.types import Dataset, StratumSample
from rctdesign.errors import DatasetError
from rctdesign.regions.bootstrap import stratum_key
from rctdesign.utils.logger import get_logger

logger = get_logger("generator")


def stratum_weights(spec: SyntheticSpec) -> np.ndarray:
    if spec.weighting == "equal":
        return np.full(spec.K, 1.0 / spec.K)
    sizes = np.array([s.n_obs for s in spec.strata], dtype=np.float64)
    return sizes / sizes.sum()


def true_sigmas(spec: SyntheticSpec) -> np.ndarray:
    """Exact Bernoulli variances, rows (sigma_k^2(0), sigma_k^2(1))."""
    mu = np.array([[s.mu0, s.mu1] for s in spec.strata], dtype=np.float64)
    return mu * (1.0 - mu)


def true_effects(spec: SyntheticSpec) -> np.ndarray:
    """Gold-standard tau_k = mu_k(1) - mu_k(0)."""
    return np.array([s.mu1 - s.mu0 for s in spec.strata], dtype=np.float64)


def _stratum_rng(seed: int, stratum_id: str) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, stratum_key(stratum_id), 0])))


def _latent_split(propensity: np.ndarray, gamma: float):
    """True treatment probabilities for U = 1 / U = 0 and P(U = 1)."""
    odds = propensity / (1.0 - propensity)
    p_high = odds * gamma / (1.0 + odds * gamma)
    p_low = (odds / gamma) / (1.0 + odds / gamma)
    if gamma == 1.0:
        q = np.full_like(propensity, 0.5)
    else:
        q = (propensity - p_low) / (p_high - p_low)
    return p_high, p_low, q


def _generate_stratum(stratum: SyntheticStratum, spec: SyntheticSpec, weight: float) -> StratumSample:
    rng = _stratum_rng(spec.seed, stratum.stratum_id)
    n = stratum.n_obs

    logit = np.log(stratum.propensity / (1.0 - stratum.propensity))
    if stratum.propensity_spread > 0:
        logit = logit + stratum.propensity_spread * rng.standard_normal(n)
    propensity = np.clip(1.0 / (1.0 + np.exp(-np.full(n, logit))), 1e-6, 1.0 - 1e-6)

    p_high, p_low, q = _latent_split(propensity, spec.confounding_gamma)
    latent = rng.random(n) < q
    treated = rng.random(n) < np.where(latent, p_high, p_low)

    shift = spec.outcome_tilt * (latent.astype(np.float64) - q)
    mu0 = stratum.mu0 + shift
    mu1 = stratum.mu1 + shift
    if np.any((mu0 < 0) | (mu0 > 1) | (mu1 < 0) | (mu1 > 1)):
        raise DatasetError(
            f"stratum {stratum.stratum_id!r}: outcome_tilt={spec.outcome_tilt} pushes a "
            "conditional outcome probability outside [0, 1]"
        )
    y1 = rng.random(n) < mu1
    y0 = rng.random(n) < mu0
    outcome = np.where(treated, y1, y0).astype(np.float64)

    return StratumSample(stratum.stratum_id, weight, treated, outcome, propensity)


def generate_observational(spec: SyntheticSpec) -> Dataset:
    """Draw one observational dataset from the synthetic population."""
    weights = stratum_weights(spec)
    strata: List[StratumSample] = [
        _generate_stratum(s, spec, float(w)) for s, w in zip(spec.strata, weights)
    ]
    for s in strata:
        logger.debug(f"Stratum {s.stratum_id}: {s.n_treated} treated of {s.n}")
    logger.info(f"Generated {spec.K} strata, {sum(s.n for s in strata)} units (G={spec.confounding_gamma})")
    return validate_dataset(strata)
