import numpy as np
import pytest

from rctdesign.sensitivity.sipw import MeanBounds
from rctdesign.sensitivity.variance import VarBounds, bernoulli_variance, variance_bounds


@pytest.mark.parametrize(
    "interval, expected",
    [
        ((0.2, 0.3), (0.16, 0.21)),
        ((0.6, 0.7), (0.21, 0.24)),
        ((0.4, 0.6), (0.24, 0.25)),
        ((0.5, 0.5), (0.25, 0.25)),
    ],
)
def test_three_branches(interval, expected):
    bounds = variance_bounds(MeanBounds(*interval))
    assert (bounds.var_lower, bounds.var_upper) == pytest.approx(expected)


@pytest.mark.parametrize("mu, expected", [(0.5, 0.25), (0.1, 0.09), (0.0, 0.0), (1.0, 0.0)])
def test_bernoulli_variance(mu, expected):
    assert bernoulli_variance(mu) == pytest.approx(expected)


def test_bernoulli_variance_vectorized():
    assert bernoulli_variance(np.array([0.5, 0.1])) == pytest.approx([0.25, 0.09])


def test_invalid_bounds_rejected():
    with pytest.raises(ValueError):
        VarBounds(0.2, 0.1)
    with pytest.raises(ValueError):
        VarBounds(0.1, 0.3)


def _random_intervals(rng, n):
    # half the intervals hug 0, 1/2 or 1, where the branches meet
    ends = np.sort(rng.random((n, 2)), axis=1)
    anchors = rng.choice([0.0, 0.5, 1.0], size=n // 2)
    ends[: n // 2] = np.sort(np.clip(anchors[:, None] + rng.normal(scale=0.05, size=(n // 2, 2)), 0, 1), axis=1)
    return ends


def test_matches_dense_grid_image(rng):
    intervals = _random_intervals(rng, 10000)
    t = np.linspace(0.0, 1.0, 1000)
    lo, hi = intervals[:, :1], intervals[:, 1:]
    # grid over each interval, plus 1/2 wherever the interval holds it
    grid = np.hstack([lo + t * (hi - lo), np.clip(0.5, lo, hi)])
    values = grid * (1.0 - grid)

    for (a, b), vmin, vmax in zip(intervals, values.min(axis=1), values.max(axis=1)):
        bounds = variance_bounds(MeanBounds(float(a), float(b)))
        assert bounds.var_lower == pytest.approx(vmin, abs=1e-9)
        assert bounds.var_upper == pytest.approx(vmax, abs=1e-9)


def test_both_ends_attained(rng):
    for a, b in _random_intervals(rng, 2000):
        bounds = variance_bounds(MeanBounds(float(a), float(b)))
        candidates = bernoulli_variance(np.array([a, b, min(max(0.5, a), b)]))
        assert np.abs(candidates - bounds.var_lower).min() <= 1e-9
        assert np.abs(candidates - bounds.var_upper).min() <= 1e-9


def test_mirrored_interval_has_same_image(rng):
    for a, b in _random_intervals(rng, 2000):
        direct = variance_bounds(MeanBounds(float(a), float(b)))
        mirrored = variance_bounds(MeanBounds(float(1 - b), float(1 - a)))
        assert mirrored.var_lower == pytest.approx(direct.var_lower, abs=1e-12)
        assert mirrored.var_upper == pytest.approx(direct.var_upper, abs=1e-12)


def test_wider_mean_interval_gives_wider_variance_interval(rng):
    for a, b in _random_intervals(rng, 2000):
        grow = rng.uniform(0.0, 0.2, size=2)
        outer = (max(0.0, a - grow[0]), min(1.0, b + grow[1]))
        inner = variance_bounds(MeanBounds(float(a), float(b)))
        wide = variance_bounds(MeanBounds(*map(float, outer)))
        assert wide.var_lower <= inner.var_lower + 1e-15
        assert wide.var_upper >= inner.var_upper - 1e-15
