import itertools

import numpy as np
import pytest

from conftest import make_sample

from rctdesign.design.types import Arm, UnitRecord
from rctdesign.errors import DatasetError
from rctdesign.sensitivity.sipw import mean_extrema, sipw_mean, weight_bounds, weight_interval


def _brute_force(outcome, lower, upper):
    values = []
    for choice in itertools.product((0, 1), repeat=len(outcome)):
        v = np.where(np.array(choice, bool), upper, lower)
        values.append(np.dot(outcome, v) / v.sum())
    return min(values), max(values)


class TestWeightInterval:
    def test_no_confounding(self):
        interval = weight_interval(UnitRecord(treated=True, outcome=1, propensity=0.5), 1.0, Arm.TREATED)
        assert (interval.lower, interval.upper) == (2.0, 2.0)

    def test_treated_gamma_two(self):
        interval = weight_interval(0.5, 2.0, Arm.TREATED)
        assert (interval.lower, interval.upper) == pytest.approx((1.5, 3.0))

    def test_control_gamma_two(self):
        interval = weight_interval(0.8, 2.0, Arm.CONTROL)
        assert (interval.lower, interval.upper) == pytest.approx((3.0, 9.0))

    def test_lower_strictly_above_one(self, rng):
        p = rng.uniform(0.01, 0.99, size=100)
        for arm in Arm:
            lower, upper = weight_bounds(p, 1.7, arm)
            assert np.all(lower > 1.0) and np.all(lower < upper)

    @pytest.mark.parametrize("p", [0.0, 1.0, 1.2])
    def test_propensity_out_of_range(self, p):
        with pytest.raises(DatasetError):
            weight_interval(p, 1.5, Arm.TREATED)

    def test_gamma_below_one(self):
        with pytest.raises(DatasetError):
            weight_interval(0.5, 0.9, Arm.TREATED)


class TestSipwMean:
    def test_equal_weights(self):
        sample = make_sample([1, 1, 1], [1, 0, 1], 0.5)
        assert sipw_mean(sample, Arm.TREATED) == pytest.approx(2 / 3)

    def test_all_successes(self):
        sample = make_sample([1, 1, 0], [1, 1, 0], [0.3, 0.6, 0.5])
        assert sipw_mean(sample, Arm.TREATED) == 1.0

    def test_unequal_weights(self):
        sample = make_sample([1, 1], [1, 0], [0.25, 0.75])
        assert sipw_mean(sample, Arm.TREATED) == pytest.approx(0.75)

    def test_control_arm_uses_one_minus_p(self):
        sample = make_sample([0, 0, 1], [1, 0, 1], [0.75, 0.25, 0.5])
        # control weights 1/(1-p) = 4, 4/3
        assert sipw_mean(sample, Arm.CONTROL) == pytest.approx(0.75)

    def test_empty_arm(self):
        with pytest.raises(DatasetError, match="empty"):
            sipw_mean(make_sample([1, 1], [1, 0], 0.5), Arm.CONTROL)


class TestMeanExtrema:
    def test_gamma_one_collapses(self):
        bounds = mean_extrema(make_sample([1, 1, 1], [1, 0, 1], 0.5), Arm.TREATED, 1.0)
        assert bounds.mu_lower == pytest.approx(2 / 3)
        assert bounds.mu_upper == pytest.approx(2 / 3)

    def test_gamma_two(self):
        bounds = mean_extrema(make_sample([1, 1, 1], [1, 0, 1], 0.5), Arm.TREATED, 2.0)
        assert (bounds.mu_lower, bounds.mu_upper) == pytest.approx((0.5, 0.8))

    def test_all_failures(self):
        bounds = mean_extrema(make_sample([1, 1, 0], [0, 0, 1], 0.4), Arm.TREATED, 3.0)
        assert (bounds.mu_lower, bounds.mu_upper) == (0.0, 0.0)

    def test_matches_vertex_enumeration(self, rng):
        for _ in range(200):
            n = int(rng.integers(1, 13))
            outcome = (rng.random(n) < rng.random()).astype(float)
            propensity = rng.uniform(0.05, 0.95, size=n)
            gamma = float(rng.uniform(1.0, 4.0))
            arm = Arm.TREATED if rng.random() < 0.5 else Arm.CONTROL
            treated = np.full(n, arm == Arm.TREATED)
            sample = make_sample(treated, outcome, propensity)

            bounds = mean_extrema(sample, arm, gamma)
            lower, upper = weight_bounds(propensity, gamma, arm)
            lo, hi = _brute_force(outcome, lower, upper)
            assert abs(bounds.mu_lower - lo) <= 1e-12
            assert abs(bounds.mu_upper - hi) <= 1e-12

    def test_nested_in_gamma(self, rng):
        sample = make_sample(rng.random(60) < 0.5, rng.random(60) < 0.4, rng.uniform(0.1, 0.9, 60))
        previous = None
        for gamma in (1.0, 1.1, 1.5, 2.0, 5.0):
            for arm in Arm:
                bounds = mean_extrema(sample, arm, gamma)
                if previous is not None and arm in previous:
                    assert bounds.mu_lower <= previous[arm].mu_lower + 1e-15
                    assert bounds.mu_upper >= previous[arm].mu_upper - 1e-15
            previous = {arm: mean_extrema(sample, arm, gamma) for arm in Arm}

    def test_gamma_one_equals_point_estimate(self, rng):
        sample = make_sample(rng.random(40) < 0.5, rng.random(40) < 0.6, rng.uniform(0.2, 0.8, 40))
        for arm in Arm:
            bounds = mean_extrema(sample, arm, 1.0)
            assert bounds.mu_lower == pytest.approx(sipw_mean(sample, arm), abs=1e-14)
            assert bounds.mu_upper == pytest.approx(sipw_mean(sample, arm), abs=1e-14)

    def test_order_invariant(self, rng):
        treated = rng.random(30) < 0.5
        treated[:2] = [True, False]
        outcome = rng.random(30) < 0.5
        propensity = rng.uniform(0.1, 0.9, 30)
        perm = rng.permutation(30)
        a = make_sample(treated, outcome, propensity)
        b = make_sample(treated[perm], outcome[perm], propensity[perm])
        for arm in Arm:
            x, y = mean_extrema(a, arm, 1.8), mean_extrema(b, arm, 1.8)
            assert x.mu_lower == pytest.approx(y.mu_lower, abs=1e-14)
            assert x.mu_upper == pytest.approx(y.mu_upper, abs=1e-14)
