import numpy as np
import pytest

from conftest import make_sample

from rctdesign.config.settings import DefaultRule, DesignConfig
from rctdesign.design.allocation import default_allocation, l2_loss, risk, round_allocation, validate_dataset
from rctdesign.design.types import AllocationPlan, StratumSample, UnitRecord
from rctdesign.errors import DatasetError
from rctdesign.optimizer.objective import naive_allocation


def _strata(weights):
    return [
        make_sample([1, 0, 1, 0], [1, 0, 0, 1], 0.5, stratum_id=f"k{i}", weight=w)
        for i, w in enumerate(weights)
    ]


class TestValidateDataset:
    def test_weights_normalized(self):
        dataset = validate_dataset(_strata([2.0, 2.0]))
        assert dataset.weights.tolist() == [0.5, 0.5]
        assert dataset.stratum_ids == ("k0", "k1")

    def test_all_treated_rejected(self):
        sample = make_sample([1, 1, 1], [1, 0, 1], 0.5)
        with pytest.raises(DatasetError, match="no control units"):
            validate_dataset([sample])

    def test_no_treated_rejected(self):
        sample = make_sample([0, 0], [1, 0], 0.5)
        with pytest.raises(DatasetError, match="no treated units"):
            validate_dataset([sample])

    def test_propensity_at_one_rejected(self):
        sample = make_sample([1, 0], [1, 0], [1.0, 0.5])
        with pytest.raises(DatasetError, match="propensity out of range"):
            validate_dataset([sample])

    def test_non_binary_outcome_rejected(self):
        sample = make_sample([1, 0], [1, 0.5], 0.5)
        with pytest.raises(DatasetError, match="non-binary outcome"):
            validate_dataset([sample])

    def test_duplicate_ids_rejected(self):
        a = make_sample([1, 0], [1, 0], 0.5, stratum_id="k0")
        b = make_sample([0, 1], [1, 1], 0.4, stratum_id="k0")
        with pytest.raises(DatasetError, match="duplicate stratum id"):
            validate_dataset([a, b])

    def test_empty_stratum_rejected(self):
        with pytest.raises(DatasetError, match="is empty"):
            validate_dataset([make_sample([], [], np.array([]))])

    def test_no_strata_rejected(self):
        with pytest.raises(DatasetError):
            validate_dataset([])


def test_unit_record_validation():
    assert UnitRecord(treated=True, outcome=1, propensity=0.3).propensity == 0.3
    with pytest.raises(ValueError):
        UnitRecord(treated=True, outcome=2, propensity=0.3)
    with pytest.raises(ValueError):
        UnitRecord(treated=False, outcome=0, propensity=0.0)


def test_sample_from_units_keeps_columns():
    units = [UnitRecord(treated=t, outcome=y, propensity=p) for t, y, p in [(True, 1, 0.2), (False, 0, 0.7)]]
    sample = StratumSample.from_units("a", units, weight=3.0)
    assert sample.n == 2 and sample.n_treated == 1 and sample.n_control == 1
    assert sample.units() == units
    with pytest.raises(ValueError):
        sample.outcome[0] = 0.0


class TestDefaultAllocation:
    def test_equal_four_strata(self):
        dataset = validate_dataset(_strata([1, 2, 3, 4]))
        plan = default_allocation(DesignConfig(n_r=1000), dataset)
        assert np.allclose(plan.treated, 125.0)
        assert np.allclose(plan.control, 125.0)
        assert plan.treated_int.tolist() == [125] * 4
        assert plan.n_r == 1000

    def test_weighted_is_halved(self):
        dataset = validate_dataset(_strata([0.6, 0.4]))
        plan = default_allocation(DesignConfig(n_r=100, default_rule=DefaultRule.WEIGHTED), dataset)
        assert plan.treated == pytest.approx([30.0, 20.0])
        assert plan.control == pytest.approx([30.0, 20.0])
        assert plan.treated.sum() + plan.control.sum() == pytest.approx(100.0)

    def test_equal_thirty_strata_continuous(self):
        dataset = validate_dataset(_strata([1.0] * 30))
        plan = default_allocation(DesignConfig(n_r=1000), dataset)
        assert plan.treated == pytest.approx([1000 / 60] * 30)
        assert plan.treated.sum() + plan.control.sum() == pytest.approx(1000.0)
        assert plan.n_r == 1000
        assert plan.treated_int.min() >= 16 and plan.control_int.max() <= 17

    def test_budget_below_two_per_stratum(self):
        dataset = validate_dataset(_strata([1.0] * 4))
        with pytest.raises(DatasetError):
            default_allocation(DesignConfig(n_r=6), dataset)

    def test_equal_ignores_weights(self):
        a = default_allocation(DesignConfig(n_r=200), validate_dataset(_strata([0.9, 0.1])))
        b = default_allocation(DesignConfig(n_r=200), validate_dataset(_strata([0.1, 0.9])))
        assert np.array_equal(a.treated, b.treated)

    def test_weighted_proportional_to_weights(self):
        config = DesignConfig(n_r=1000, default_rule="Weighted")
        plan = default_allocation(config, validate_dataset(_strata([0.1, 0.2, 0.7])))
        assert plan.treated / plan.treated.sum() == pytest.approx([0.1, 0.2, 0.7])


class TestRounding:
    def test_largest_remainder(self):
        assert round_allocation(np.array([33.4, 33.3, 33.3]), 100).tolist() == [34, 33, 33]

    def test_floor_of_one_taken_from_largest(self):
        assert round_allocation(np.array([0.2, 9.8]), 10).tolist() == [1, 9]

    def test_ties_go_to_lower_index(self):
        assert round_allocation(np.array([2.5, 2.5]), 5).tolist() == [3, 2]

    def test_too_small_budget(self):
        with pytest.raises(DatasetError):
            round_allocation(np.array([1.0, 1.0, 1.0]), 2)

    def test_sums_and_floor_on_random_counts(self, rng):
        for _ in range(50):
            m = int(rng.integers(2, 20))
            n_r = int(rng.integers(m, 500))
            counts = rng.dirichlet(np.full(m, 0.3)) * n_r
            rounded = round_allocation(counts, n_r)
            assert rounded.sum() == n_r
            assert rounded.min() >= 1


class TestRisk:
    def test_single_stratum(self):
        plan = AllocationPlan.from_continuous(("a",), [50.0], [50.0], 100)
        assert risk(plan, [0.25], [0.25], [1.0]) == pytest.approx(0.01)

    def test_zero_variance(self):
        plan = AllocationPlan.from_continuous(("a", "b"), [20.0, 30.0], [25.0, 25.0], 100)
        assert risk(plan, [0.0, 0.0], [0.0, 0.0], [0.5, 0.5]) == 0.0

    def test_closed_form_at_optimal_allocation(self):
        w = [0.5, 0.5]
        plan = naive_allocation([0.4, 0.2], [0.3, 0.1], w, 100)
        value = risk(plan, [0.16, 0.04], [0.09, 0.01], w)
        closed = (np.sum(np.sqrt(w) * (np.array([0.4, 0.2]) + np.array([0.3, 0.1])))) ** 2 / 100
        assert value == pytest.approx(0.005)
        assert value == pytest.approx(closed)

    def test_zero_arm_count_rejected(self):
        plan = AllocationPlan(("a",), [0.0], [10.0], [1], [9])
        with pytest.raises(DatasetError):
            risk(plan, [0.1], [0.1], [1.0])

    def test_strictly_decreasing_in_arm_count(self):
        smaller = AllocationPlan.from_continuous(("a", "b"), [20.0, 30.0], [25.0, 25.0], 100)
        larger = AllocationPlan(("a", "b"), [21.0, 30.0], [25.0, 25.0], [21, 30], [25, 25])
        args = ([0.1, 0.2], [0.15, 0.05], [0.5, 0.5])
        assert risk(larger, *args) < risk(smaller, *args)

    def test_integer_counts(self):
        plan = AllocationPlan.from_continuous(("a",), [49.6], [50.4], 100)
        assert risk(plan, [0.25], [0.25], [1.0], integer=True) == pytest.approx(0.25 / 50 * 2)


class TestL2Loss:
    def test_identity(self):
        assert l2_loss([0.1, 0.2], [0.1, 0.2], [0.5, 0.5]) == 0.0

    def test_weighted(self):
        assert l2_loss([0.1, -0.1], [0.0, 0.0], [0.5, 0.5]) == pytest.approx(0.01)

    def test_single_unweighted(self):
        assert l2_loss([0.32], [0.30], [1.0]) == pytest.approx(4e-4)

    def test_length_mismatch(self):
        with pytest.raises(DatasetError):
            l2_loss([0.1, 0.2], [0.1], [0.5, 0.5])
