import os
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from rctdesign.config.settings import DesignConfig, SyntheticSpec
from rctdesign.design.types import StratumSample
from rctdesign.regions.ellipse import Ellipse
from rctdesign.regions.region import VarianceRegion

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


def make_sample(treated, outcome, propensity, stratum_id="s", weight=1.0) -> StratumSample:
    n = len(treated)
    if np.ndim(propensity) == 0:
        propensity = np.full(n, float(propensity))
    return StratumSample(stratum_id, weight, np.asarray(treated, bool), np.asarray(outcome, float), propensity)


def random_sample(rng, n, p_treated=0.4, mu0=0.3, mu1=0.5, stratum_id="s", spread=0.0) -> StratumSample:
    """Both arms guaranteed nonempty."""
    treated = rng.random(n) < p_treated
    treated[0], treated[1] = True, False
    outcome = np.where(treated, rng.random(n) < mu1, rng.random(n) < mu0)
    logit = np.log(p_treated / (1 - p_treated)) + spread * rng.standard_normal(n)
    propensity = 1.0 / (1.0 + np.exp(-logit))
    return make_sample(treated, outcome, propensity, stratum_id=stratum_id)


def disk_region(center, radius, lo=(1e-8, 1e-8), hi=(0.25, 0.25), stratum_id="r") -> VarianceRegion:
    ellipse = Ellipse(np.asarray(center, float), np.eye(2) / radius ** 2)
    return VarianceRegion(ellipse, np.asarray(lo, float), np.asarray(hi, float), stratum_id=stratum_id)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def small_config():
    return DesignConfig(gamma=1.2, alpha=0.10, bootstrap_reps=50, n_r=1000, seed=3)


@pytest.fixture
def four_strata_spec():
    """Four strata with expected treated counts 263/421/564/739 of 1000."""
    return SyntheticSpec.model_validate({
        "strata": [
            {"stratum_id": "s1", "mu0": 0.20, "mu1": 0.30, "n_obs": 1000, "propensity": 0.263},
            {"stratum_id": "s2", "mu0": 0.45, "mu1": 0.50, "n_obs": 1000, "propensity": 0.421},
            {"stratum_id": "s3", "mu0": 0.70, "mu1": 0.60, "n_obs": 1000, "propensity": 0.564},
            {"stratum_id": "s4", "mu0": 0.35, "mu1": 0.55, "n_obs": 1000, "propensity": 0.739},
        ],
        "confounding_gamma": 1.2,
        "seed": 7,
        "reps": 200,
        "gamma_grid": [1.0, 1.2],
    })


@pytest.fixture
def four_strata_dataset(four_strata_spec):
    from rctdesign.simulation.generator import generate_observational

    return generate_observational(four_strata_spec)
