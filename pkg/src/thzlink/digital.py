"""Per-subcarrier digital stage: effective channel, zero-forcing, power scaling.

Because every channel is rank one and the analog stage is block diagonal with
unit-modulus blocks, the combined link collapses to an effective
(user_count x rf_chain_count) matrix per subcarrier whose rows are scaled
coupling vectors; all digital processing happens at that size.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .allocation import Allocation
from .analog import AnalogPrecoder, coupling_tensor
from .channel import ChannelRealization
from .config import SubcarrierGrid, SystemConfig

ZF_GUARD = 1e-10  # smallest/largest singular value ratio treated as singular


class SingularChannelError(RuntimeError):
    """Effective channel too close to rank deficient for zero forcing."""


@dataclass(frozen=True)
class DigitalPrecoder:
    """Digital weights for every subcarrier plus the realized column-power cap."""

    weights: np.ndarray  # (K, rf_chain_count, user_count) complex
    omega: float  # max over k, n of ||column n at k||^2
    fallback_used: bool
    fallback_count: int = 0


def effective_channel_tensor(
    channel: ChannelRealization,
    precoder: AnalogPrecoder,
    grid: SubcarrierGrid,
    cfg: SystemConfig,
    couplings: np.ndarray | None = None,
) -> np.ndarray:
    """(K, user_count, rf_chain_count) stack of effective channel matrices.

    Row n at subcarrier k is the receive-combined channel of user n through
    the analog stage: sqrt(Nt*Nr) * gain * delay phase * coupling row.
    """
    if couplings is None:
        couplings = coupling_tensor(channel, precoder, grid, cfg)
    scale = (
        np.sqrt(cfg.transmit_antennas * cfg.receive_antennas)
        * channel.gains
        * np.exp(-2j * np.pi * grid.freqs[None, :] * channel.tau_s[:, None])
    )  # (N, K)
    return (couplings * scale[:, None, :]).transpose(2, 0, 1)


def effective_channel(
    channel: ChannelRealization,
    precoder: AnalogPrecoder,
    grid: SubcarrierGrid,
    cfg: SystemConfig,
    k: int,
    couplings: np.ndarray | None = None,
) -> np.ndarray:
    """Effective (user_count x rf_chain_count) matrix at subcarrier k (1-based)."""
    return effective_channel_tensor(channel, precoder, grid, cfg, couplings)[k - 1]


def zf_precoder(eff: np.ndarray) -> np.ndarray:
    """Right pseudo-inverse of the effective channel (zero inter-user leakage)."""
    u, s, vh = np.linalg.svd(eff, full_matrices=False)
    if s[0] == 0.0 or s[-1] < ZF_GUARD * s[0]:
        raise SingularChannelError(
            f"effective channel is numerically singular "
            f"(singular value ratio {0.0 if s[0] == 0.0 else s[-1] / s[0]:.3e})"
        )
    return (vh.conj().T * (1.0 / s)) @ u.conj().T


def matched_precoder(alloc: Allocation, n_rf: int) -> np.ndarray:
    """Interference-agnostic fallback: each user excites only its own subarrays."""
    weights = np.zeros((n_rf, len(alloc.counts)), dtype=complex)
    for n, (first, last) in enumerate(alloc.ranges):
        weights[first - 1 : last, n] = 1.0 / np.sqrt(last - first + 1)
    return weights


def normalize_power(weights: np.ndarray) -> np.ndarray:
    """Scale digital weights so the transmitted power equals user_count.

    The analog stage is block diagonal with unit-modulus blocks, so each of its
    columns has squared norm 1/rf_chain_count and the transmit power is
    ||weights||_F^2 / rf_chain_count regardless of the analog phases/delays.
    """
    n_rf, n_users = weights.shape
    fro = np.linalg.norm(weights)
    if fro == 0.0:
        raise ValueError("cannot normalize all-zero digital weights")
    return weights * (np.sqrt(n_users * n_rf) / fro)


def max_column_power(weights: np.ndarray) -> float:
    """Largest per-user column squared norm across all subcarriers.

    Accepts one (n_rf x n_users) matrix or a (K, n_rf, n_users) stack.
    """
    weights = np.asarray(weights)
    if weights.ndim == 2:
        weights = weights[None]
    return float(np.max(np.sum(np.abs(weights) ** 2, axis=1)))


def design_digital_precoder(eff_tensor: np.ndarray, alloc: Allocation) -> DigitalPrecoder:
    """Zero-forcing per subcarrier with a matched-precoder fallback.

    Subcarriers whose effective channel fails the conditioning guard fall back
    to the matched precoder; the result records whether that ever happened.
    """
    n_sub, _, n_rf = eff_tensor.shape
    weights = np.empty((n_sub, n_rf, eff_tensor.shape[1]), dtype=complex)
    fallback_count = 0
    for k0 in range(n_sub):
        try:
            w = zf_precoder(eff_tensor[k0])
        except SingularChannelError:
            w = matched_precoder(alloc, n_rf)
            fallback_count += 1
        weights[k0] = normalize_power(w)
    weights.setflags(write=False)
    return DigitalPrecoder(
        weights=weights,
        omega=max_column_power(weights),
        fallback_used=fallback_count > 0,
        fallback_count=fallback_count,
    )
