"""Frequency-selective line-of-sight channel synthesis and array responses.

Each user's channel is rank one per subcarrier: a receive steering vector
times a transmit steering vector, scaled by a distance/frequency dependent
complex gain and the propagation-delay phase ramp.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import SPEED_OF_LIGHT, SubcarrierGrid, SystemConfig, build_subcarrier_grid


@dataclass(frozen=True)
class ChannelRealization:
    """One random draw of the multi-user downlink channel.

    ``psi``/``phi`` are sines of the departure/arrival angles, ``tau_s`` the
    line-of-sight delays, and ``gains[n, k]`` the complex gain of user ``n``
    on subcarrier ``k+1``.
    """

    psi: np.ndarray  # (N,)
    phi: np.ndarray  # (N,)
    tau_s: np.ndarray  # (N,)
    gains: np.ndarray  # (N, K) complex


def synthesize_channel(cfg: SystemConfig, rng: np.random.Generator) -> ChannelRealization:
    """Draw one channel realization; identical (cfg, rng state) => identical draw.

    Departure and arrival angles are uniform on [-pi/2, pi/2]; each user gets a
    single uniform phase applied across all subcarriers.  Gain magnitude follows
    free-space spreading at each subcarrier frequency times molecular
    absorption over the user distance.
    """
    n_users = cfg.user_count
    distances = np.asarray(cfg.user_distances_m, dtype=float)
    if np.any(distances <= 0.0):
        raise ValueError("user distances must be positive")
    aod = rng.uniform(-np.pi / 2.0, np.pi / 2.0, n_users)
    aoa = rng.uniform(-np.pi / 2.0, np.pi / 2.0, n_users)
    theta = rng.uniform(0.0, 2.0 * np.pi, n_users)
    psi = np.sin(aod)
    phi = np.sin(aoa)
    tau = distances / SPEED_OF_LIGHT
    freqs = build_subcarrier_grid(cfg).freqs
    spreading = SPEED_OF_LIGHT / (4.0 * np.pi * freqs[None, :] * distances[:, None])
    absorption = np.exp(-0.5 * cfg.absorption_coeff_per_m * distances)
    gains = spreading * absorption[:, None] * np.exp(1j * theta)[:, None]
    for arr in (psi, phi, tau, gains):
        arr.setflags(write=False)
    return ChannelRealization(psi=psi, phi=phi, tau_s=tau, gains=gains)


def tx_array_response(grid: SubcarrierGrid, psi: float, k: int, n_t: int) -> np.ndarray:
    """Unit-norm transmit steering vector at subcarrier k (1-based)."""
    xi = grid.ratios[_check_k(grid, k) - 1]
    phase = xi * psi * np.arange(n_t, dtype=float)
    return np.exp(-1j * np.pi * phase) / np.sqrt(n_t)


def rx_array_response(grid: SubcarrierGrid, phi: float, k: int, n_r: int) -> np.ndarray:
    """Unit-norm receive steering vector at subcarrier k (1-based)."""
    xi = grid.ratios[_check_k(grid, k) - 1]
    phase = xi * phi * np.arange(n_r, dtype=float)
    return np.exp(-1j * np.pi * phase) / np.sqrt(n_r)


def subarray_response(
    grid: SubcarrierGrid, psi: float, k: int, l: int, cfg: SystemConfig
) -> np.ndarray:
    """Slice of the transmit steering vector seen by subarray l (1-based).

    Concatenating the slices for l = 1..rf_chain_count reproduces
    :func:`tx_array_response`; each slice has squared norm 1/rf_chain_count.
    """
    if not 1 <= l <= cfg.rf_chain_count:
        raise IndexError(f"subarray index {l} outside 1..{cfg.rf_chain_count}")
    xi = grid.ratios[_check_k(grid, k) - 1]
    size = cfg.elements_per_subarray
    idx = (l - 1) * size + np.arange(size, dtype=float)
    return np.exp(-1j * np.pi * xi * (idx * psi)) / np.sqrt(cfg.transmit_antennas)


def channel_matrix(
    real: ChannelRealization,
    grid: SubcarrierGrid,
    k: int,
    n: int,
    cfg: SystemConfig,
) -> np.ndarray:
    """Explicit (receive_antennas x transmit_antennas) channel of user n at k.

    Rank one by construction; mainly used by tests and small-scale audits --
    the simulator itself works with steering-vector inner products instead.
    """
    u = tx_array_response(grid, float(real.psi[n]), k, cfg.transmit_antennas)
    v = rx_array_response(grid, float(real.phi[n]), k, cfg.receive_antennas)
    f_k = grid.freqs[k - 1]
    scale = (
        np.sqrt(cfg.transmit_antennas * cfg.receive_antennas)
        * real.gains[n, k - 1]
        * np.exp(-2j * np.pi * f_k * real.tau_s[n])
    )
    return scale * np.outer(v, u.conj())


def write_channel_dump(real: ChannelRealization, path: str | Path) -> None:
    """Dump a realization as CSV rows (user, psi, phi, tau_s, k, re/im gain)."""
    path = Path(path)
    n_users, n_sub = real.gains.shape
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["user", "psi", "phi", "tau_s", "k", "re_alpha", "im_alpha"])
        for n in range(n_users):
            for k0 in range(n_sub):
                writer.writerow(
                    [
                        n + 1,
                        repr(float(real.psi[n])),
                        repr(float(real.phi[n])),
                        repr(float(real.tau_s[n])),
                        k0 + 1,
                        repr(float(real.gains[n, k0].real)),
                        repr(float(real.gains[n, k0].imag)),
                    ]
                )


def _check_k(grid: SubcarrierGrid, k: int) -> int:
    if not 1 <= k <= grid.count:
        raise IndexError(f"subcarrier index {k} outside 1..{grid.count}")
    return k
