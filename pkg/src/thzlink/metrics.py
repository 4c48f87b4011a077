"""Rates, beamforming-gain profiles, analytical rate caps, and empirical CDFs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization
from .config import SystemConfig


@dataclass(frozen=True)
class RateReport:
    """Per-user spectral efficiencies (summed over subcarriers) and rate caps."""

    rates: np.ndarray  # (N,) bits/s/Hz
    min_rate: float
    bound_asymptotic: np.ndarray  # (N,) large-array cap
    bound_finite: np.ndarray  # (N,) finite-array cap


@dataclass(frozen=True)
class GainProfile:
    """Average serving-subarray beamforming gain per subcarrier.

    ``raw`` averages |coupling| over subarrays (so a perfectly matched analog
    stage gives 1/rf_chain_count); ``normalized`` rescales that to 1.0.
    """

    raw: np.ndarray  # (K,)
    normalized: np.ndarray  # (K,)


@dataclass(frozen=True)
class CdfSeries:
    """Empirical CDF support points: P(X <= values[i]) = probs[i]."""

    values: np.ndarray
    probs: np.ndarray


def achievable_rates(
    eff_tensor: np.ndarray, weights: np.ndarray, snr_linear: float
) -> np.ndarray:
    """Per-user sum rate over the band with inter-user interference.

    ``eff_tensor`` is the (K, N, n_rf) effective channel stack and ``weights``
    the (K, n_rf, N) digital stack; transmit power splits evenly across users.
    """
    n_users = eff_tensor.shape[1]
    received = np.matmul(eff_tensor, weights)  # (K, N, N): row n hit by column n'
    power = (snr_linear / n_users) * np.abs(received) ** 2
    signal = np.diagonal(power, axis1=1, axis2=2)
    interference = power.sum(axis=2) - signal
    sinr = signal / (interference + 1.0)
    return np.sum(np.log2(1.0 + sinr), axis=0)


def achievable_rate(
    eff_tensor: np.ndarray, weights: np.ndarray, snr_linear: float, n: int
) -> float:
    """Sum rate of user n (0-based)."""
    return float(achievable_rates(eff_tensor, weights, snr_linear)[n])


def gain_profile(couplings: np.ndarray, owners: np.ndarray) -> GainProfile:
    """Beamforming-gain profile from coupling magnitudes of serving pairs."""
    n_rf = couplings.shape[1]
    serving = np.abs(couplings[owners, np.arange(n_rf), :])  # (n_rf, K)
    raw = serving.mean(axis=0)
    normalized = raw * n_rf
    raw.setflags(write=False)
    normalized.setflags(write=False)
    return GainProfile(raw=raw, normalized=normalized)


def average_subarray_gain(
    couplings: np.ndarray, owners: np.ndarray, k: int
) -> tuple[float, float]:
    """(raw, normalized) gain at subcarrier k (1-based)."""
    if not 1 <= k <= couplings.shape[2]:
        raise IndexError(
            f"subcarrier index {k} outside 1..{couplings.shape[2]}"
        )
    profile = gain_profile(couplings, owners)
    return float(profile.raw[k - 1]), float(profile.normalized[k - 1])


def asymptotic_rate_bounds(
    alpha_tilde: np.ndarray, counts: np.ndarray, cfg: SystemConfig, omega: float
) -> np.ndarray:
    """Large-array rate cap: ideal analog stage and interference removed.

    Scales with the fairness objective alpha_tilde * counts, so max-min
    allocation maximizes the smallest entry.
    """
    coeff = (
        cfg.snr_linear
        * omega
        * cfg.receive_antennas
        * cfg.transmit_antennas
        / (np.log(2.0) * cfg.user_count)
    )
    counts = np.asarray(counts, dtype=float)
    return coeff * (counts / cfg.rf_chain_count) * np.asarray(alpha_tilde, dtype=float)


def finite_size_rate_bounds(
    channel: ChannelRealization,
    couplings: np.ndarray,
    cfg: SystemConfig,
    omega: float,
) -> np.ndarray:
    """Finite-array rate cap from realized coupling energy (valid at any size)."""
    coeff = (
        cfg.snr_linear
        * omega
        * cfg.receive_antennas
        * cfg.transmit_antennas
        / (np.log(2.0) * cfg.user_count)
    )
    coupling_energy = np.sum(np.abs(couplings) ** 2, axis=1)  # (N, K)
    return coeff * np.sum(np.abs(channel.gains) ** 2 * coupling_energy, axis=1)


def min_subarray_objective(alpha_tilde: np.ndarray, counts: np.ndarray) -> float:
    """Smallest per-user product of aggregate gain and owned-subarray count."""
    products = np.asarray(alpha_tilde, dtype=float) * np.asarray(counts, dtype=float)
    return float(products.min())


def empirical_cdf(samples: np.ndarray) -> CdfSeries:
    """Step CDF of a non-empty sample: sorted values vs (i+1)/n."""
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise ValueError("cannot build an empirical CDF from zero samples")
    values = np.sort(samples)
    probs = np.arange(1, samples.size + 1, dtype=float) / samples.size
    values.setflags(write=False)
    probs.setflags(write=False)
    return CdfSeries(values=values, probs=probs)
