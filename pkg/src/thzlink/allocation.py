"""Max-min fair assignment of subarrays to users.

The fairness objective is the minimum over users of (aggregate squared channel
gain) x (number of owned subarrays).  Its continuous relaxation has a closed
form -- counts proportional to the inverse aggregate gain, which equalizes the
per-user products -- and is discretized by flooring all but the last user.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization


@dataclass(frozen=True)
class Allocation:
    """Integer subarray ownership: consecutive 1-based ranges, one per user."""

    counts: tuple[int, ...]
    ranges: tuple[tuple[int, int], ...]  # inclusive (first, last) subarray ids
    continuous_counts: tuple[float, ...]


def sum_channel_gains(real: ChannelRealization) -> np.ndarray:
    """Per-user aggregate squared gain across all subcarriers."""
    return np.sum(np.abs(real.gains) ** 2, axis=1)


def continuous_allocation(alpha_tilde: np.ndarray, n_rf: int) -> np.ndarray:
    """Real-valued optimum of the max-min objective (counts sum to n_rf)."""
    alpha_tilde = np.asarray(alpha_tilde, dtype=float)
    if alpha_tilde.ndim != 1 or alpha_tilde.size == 0:
        raise ValueError("alpha_tilde must be a non-empty 1-D array")
    if np.any(alpha_tilde <= 0.0) or not np.all(np.isfinite(alpha_tilde)):
        raise ValueError("aggregate gains must be positive and finite")
    inverse = 1.0 / alpha_tilde
    # normalize before scaling so a single user gets exactly n_rf (x/x == 1.0)
    return n_rf * (inverse / inverse.sum())


def discretize_allocation(continuous: np.ndarray, n_rf: int) -> Allocation:
    """Floor all users but the last, hand the remainder to the last user.

    A repair pass then lifts any zero count to one, paying for it by
    decrementing the currently largest count (lowest index on ties), so every
    user keeps at least one subarray.
    """
    continuous = np.asarray(continuous, dtype=float)
    n_users = continuous.size
    if n_users > n_rf:
        raise ValueError(f"cannot serve {n_users} users with {n_rf} subarrays")
    counts = [int(np.floor(c)) for c in continuous[:-1]]
    counts.append(n_rf - sum(counts))
    while min(counts) < 1:
        needy = counts.index(min(counts))
        donor = counts.index(max(counts))
        counts[needy] += 1
        counts[donor] -= 1
    return Allocation(
        counts=tuple(counts),
        ranges=_ranges_from_counts(counts),
        continuous_counts=tuple(float(c) for c in continuous),
    )


def uniform_allocation(n_users: int, n_rf: int) -> Allocation:
    """Equal split baseline; leftover subarrays go to the lowest-index users."""
    if not 1 <= n_users <= n_rf:
        raise ValueError(f"cannot serve {n_users} users with {n_rf} subarrays")
    base, leftover = divmod(n_rf, n_users)
    counts = [base + 1 if n < leftover else base for n in range(n_users)]
    return Allocation(
        counts=tuple(counts),
        ranges=_ranges_from_counts(counts),
        continuous_counts=(n_rf / n_users,) * n_users,
    )


def serving_users(alloc: Allocation) -> np.ndarray:
    """Owner (0-based user index) of each subarray, ordered by subarray id."""
    owners = np.empty(sum(alloc.counts), dtype=int)
    for n, (first, last) in enumerate(alloc.ranges):
        owners[first - 1 : last] = n
    return owners


def _ranges_from_counts(counts: list[int]) -> tuple[tuple[int, int], ...]:
    ranges = []
    start = 1
    for c in counts:
        ranges.append((start, start + c - 1))
        start += c
    return tuple(ranges)
