from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thzlink import (
    continuous_allocation,
    discretize_allocation,
    min_subarray_objective,
    serving_users,
    sum_channel_gains,
    synthesize_channel,
    uniform_allocation,
)


def _compositions(total: int, parts: int):
    """All ways to write `total` as an ordered sum of `parts` positive integers."""
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def test_sum_channel_gains_brute_force(tiny_cfg):
    real = synthesize_channel(tiny_cfg, np.random.default_rng(0))
    got = sum_channel_gains(real)
    brute = np.array(
        [sum(abs(real.gains[n, k]) ** 2 for k in range(tiny_cfg.subcarrier_count))
         for n in range(tiny_cfg.user_count)]
    )
    np.testing.assert_allclose(got, brute, rtol=1e-12)
    assert np.all(got > 0)


def test_continuous_equal_gains_split_evenly():
    np.testing.assert_allclose(continuous_allocation(np.array([2.0, 2.0]), 8), [4.0, 4.0])
    np.testing.assert_allclose(
        continuous_allocation(np.array([0.5, 0.5, 0.5, 0.5]), 16), [4.0] * 4
    )


def test_continuous_inverse_gain_example():
    counts = continuous_allocation(np.array([1.0, 3.0]), 4)
    np.testing.assert_allclose(counts, [3.0, 1.0], rtol=1e-12)
    products = np.array([1.0, 3.0]) * counts
    assert np.ptp(products) <= 1e-12 * products.max()
    assert counts.sum() == pytest.approx(4.0, rel=1e-12)


def test_continuous_matches_grid_search_two_users():
    rng = np.random.default_rng(11)
    for _ in range(10):
        alpha = rng.uniform(0.1, 10.0, 2)
        n_rf = 8
        counts = continuous_allocation(alpha, n_rf)
        s1 = np.linspace(1e-6, n_rf - 1e-6, 200_001)
        objective = np.minimum(alpha[0] * s1, alpha[1] * (n_rf - s1))
        best = s1[np.argmax(objective)]
        assert counts[0] == pytest.approx(best, abs=1e-4)
        # closed-form optimum value
        assert objective.max() <= n_rf / np.sum(1.0 / alpha) + 1e-9


def test_continuous_rejects_bad_gains():
    with pytest.raises(ValueError):
        continuous_allocation(np.array([1.0, 0.0]), 4)
    with pytest.raises(ValueError):
        continuous_allocation(np.array([1.0, -2.0]), 4)


def test_discretize_integral_solution_kept():
    alloc = discretize_allocation(np.array([3.0, 1.0]), 4)
    assert alloc.counts == (3, 1)
    assert alloc.ranges == ((1, 3), (4, 4))
    assert alloc.continuous_counts == (3.0, 1.0)


def test_discretize_remainder_to_last_user():
    alloc = discretize_allocation(np.array([0.4, 7.6]), 8)
    assert alloc.counts == (1, 7)  # floor would starve user 0; repair lifts it to 1
    alloc = discretize_allocation(np.array([2.5, 5.5]), 8)
    assert alloc.counts == (2, 6)


def test_discretize_four_user_example():
    # weaker far users end up with larger shares; floors plus remainder
    alloc = discretize_allocation(np.array([2.5, 3.4, 5.2, 4.9]), 16)
    assert alloc.counts == (2, 3, 5, 6)
    assert alloc.ranges == ((1, 2), (3, 5), (6, 10), (11, 16))


def test_discretize_repair_multiple_zeros():
    alloc = discretize_allocation(np.array([0.4, 0.5, 7.1]), 8)
    assert alloc.counts == (1, 1, 6)
    assert min(alloc.counts) >= 1
    assert sum(alloc.counts) == 8


def test_discretize_single_user():
    alloc = discretize_allocation(np.array([6.0]), 6)
    assert alloc.counts == (6,)
    assert alloc.ranges == ((1, 6),)


def test_discretize_too_many_users():
    with pytest.raises(ValueError, match="cannot serve"):
        discretize_allocation(np.array([1.0, 1.0, 1.0]), 2)


def test_uniform_examples():
    assert uniform_allocation(4, 16).counts == (4, 4, 4, 4)
    assert uniform_allocation(3, 8).counts == (3, 3, 2)
    assert uniform_allocation(1, 5).counts == (5,)
    alloc = uniform_allocation(3, 8)
    assert alloc.ranges == ((1, 3), (4, 6), (7, 8))
    assert alloc.continuous_counts == (8 / 3,) * 3
    with pytest.raises(ValueError):
        uniform_allocation(9, 8)


def test_serving_users_covers_each_subarray_once():
    alloc = discretize_allocation(np.array([2.5, 3.4, 5.2, 4.9]), 16)
    owners = serving_users(alloc)
    assert owners.shape == (16,)
    for n, count in enumerate(alloc.counts):
        assert np.sum(owners == n) == count
    assert np.all(np.diff(owners) >= 0)  # consecutive blocks


@settings(max_examples=200, deadline=None)
@given(
    alpha=st.lists(st.floats(min_value=1e-3, max_value=1e3), min_size=1, max_size=8),
    n_rf=st.integers(min_value=1, max_value=32),
)
def test_continuous_properties(alpha, n_rf):
    alpha = np.array(alpha)
    if alpha.size > n_rf:
        n_rf = alpha.size
    counts = continuous_allocation(alpha, n_rf)
    assert counts.sum() == pytest.approx(n_rf, rel=1e-12)
    assert np.all(counts > 0)
    products = alpha * counts
    assert np.ptp(products) <= 1e-9 * products.max()
    # weaker aggregate gain never gets fewer subarrays (with a float-gap guard)
    for i, j in itertools.combinations(range(alpha.size), 2):
        if alpha[i] < alpha[j] * (1 - 1e-9):
            assert counts[i] > counts[j]


@settings(max_examples=200, deadline=None)
@given(
    alpha=st.lists(st.floats(min_value=1e-3, max_value=1e3), min_size=1, max_size=6),
    extra=st.integers(min_value=0, max_value=20),
)
def test_discretize_properties(alpha, extra):
    alpha = np.array(alpha)
    n_rf = alpha.size + extra
    alloc = discretize_allocation(continuous_allocation(alpha, n_rf), n_rf)
    assert sum(alloc.counts) == n_rf
    assert min(alloc.counts) >= 1
    assert alloc.ranges[0][0] == 1
    assert alloc.ranges[-1][1] == n_rf
    for (a, b), count in zip(alloc.ranges, alloc.counts):
        assert b - a + 1 == count


@settings(max_examples=150, deadline=None)
@given(
    alpha=st.lists(st.floats(min_value=1e-2, max_value=1e2), min_size=1, max_size=3),
    extra=st.integers(min_value=0, max_value=9),
)
def test_optimality_sandwich_small_instances(alpha, extra):
    alpha = np.array(alpha)
    n_rf = min(alpha.size + extra, 12)
    continuous = continuous_allocation(alpha, n_rf)
    disc = discretize_allocation(continuous, n_rf)
    best_integer = max(
        min_subarray_objective(alpha, np.array(c)) for c in _compositions(n_rf, alpha.size)
    )
    cont_obj = min_subarray_objective(alpha, continuous)
    disc_obj = min_subarray_objective(alpha, np.array(disc.counts))
    assert cont_obj >= best_integer * (1 - 1e-12)
    assert best_integer >= disc_obj


@settings(max_examples=200, deadline=None)
@given(
    alpha=st.lists(st.floats(min_value=1e-3, max_value=1e3), min_size=1, max_size=8),
    extra=st.integers(min_value=0, max_value=24),
)
def test_continuous_dominates_uniform(alpha, extra):
    alpha = np.array(alpha)
    n_rf = alpha.size + extra
    cont_obj = min_subarray_objective(alpha, continuous_allocation(alpha, n_rf))
    unif_obj = min_subarray_objective(
        alpha, np.array(uniform_allocation(alpha.size, n_rf).counts)
    )
    assert cont_obj >= unif_obj * (1 - 1e-12)
