"""Per-subarray delay/phase optimization and analog precoder assembly.

Hardware model: each subarray l applies, to subcarrier k, a unit-modulus
vector whose element (m, p) is exp(j*pi*x[m,p]) * exp(-2j*pi*f_k*t[m]) --
``phase_shifters_per_ttd`` static phase shifts hanging off each of
``ttds_per_subarray`` delay lines.  The design target is the subarray's
steering slice for its served user, whose element phases are
-pi * xi_k * slope, with per-element slope (antenna index) * psi.

Matching target and hardware phases in the exponent domain gives a separable
least-squares problem per delay line: alternate a closed-form delay update, a
snap onto the realizable delay grid, and a closed-form phase update until the
iterate movement (normalized, NMSE) drops below the configured threshold.
The delay entering the phase update is the quantized current one by default;
``jacobi_phase_update`` reproduces the variant that uses the previous
iterate's delay instead.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .allocation import Allocation, serving_users
from .channel import ChannelRealization, subarray_response
from .config import SubcarrierGrid, SystemConfig, TtdGrid, build_ttd_grid, quantize_delay

ALGORITHM1 = "algorithm1"
IDEAL = "ideal"


@dataclass(frozen=True)
class SolverOptions:
    """Knobs for the alternating solver (defaults match the hardware model)."""

    quantize: bool = True
    jacobi_phase_update: bool = False


DEFAULT_OPTIONS = SolverOptions()


@dataclass(frozen=True)
class SubarraySolution:
    """Optimized delays (seconds) and phase-shift values (units of pi) for one subarray."""

    delays: np.ndarray  # (ttds_per_subarray,)
    phases: np.ndarray  # (ttds_per_subarray, phase_shifters_per_ttd)
    iterations_used: int  # worst delay line
    final_nmse: float  # worst delay line
    clamp_count: int = 0  # delay proposals outside the realizable grid
    proposal_count: int = 0


@dataclass(frozen=True)
class AnalogPrecoder:
    """Block-diagonal analog stage: one unit-modulus column per subarray."""

    method: str  # ALGORITHM1 or IDEAL
    serving_user: tuple[int, ...]  # 0-based owner of each subarray
    serving_psi: np.ndarray  # (rf_chain_count,)
    solutions: tuple[SubarraySolution, ...] | None  # None in IDEAL mode


def steering_phase_coeffs(psi: float, l: int, cfg: SystemConfig) -> np.ndarray:
    """Target phase slope (units of pi) per element of subarray l, as (m, p) grid."""
    m_cnt = cfg.ttds_per_subarray
    p_cnt = cfg.phase_shifters_per_ttd
    base = (l - 1) * m_cnt * p_cnt
    idx = base + np.arange(m_cnt, dtype=float)[:, None] * p_cnt + np.arange(p_cnt, dtype=float)
    return idx * psi


def delay_update(
    phases: np.ndarray, slopes: np.ndarray, grid: SubcarrierGrid, carrier_hz: float
) -> float:
    """Closed-form band-wide least-squares delay for one delay line.

    ``phases`` and ``slopes`` are that line's current phase-shift values and
    target slope coefficients (both units of pi, length phase_shifters_per_ttd).
    """
    p_cnt = slopes.size
    return float(
        (np.sum(phases) / grid.gamma_factor + np.sum(slopes))
        / (2.0 * carrier_hz * p_cnt)
    )


def phase_update(delay_s: float, slopes: np.ndarray, carrier_hz: float) -> np.ndarray:
    """Closed-form band-wide least-squares phase shifts given the line's delay."""
    return 2.0 * carrier_hz * delay_s - slopes


def optimize_subarray(
    grid: SubcarrierGrid,
    psi: float,
    l: int,
    ttd_grid: TtdGrid,
    cfg: SystemConfig,
    options: SolverOptions = DEFAULT_OPTIONS,
    trace: list | None = None,
) -> SubarraySolution:
    """Alternating delay/phase fit for subarray l toward direction ``psi``.

    Every delay line starts from (0, 0) and iterates at most
    ``max_iterations - 1`` rounds; a round whose NMSE has a zero denominator
    counts as converged.  ``trace`` (if given) collects rows
    (l, m, iteration, delay_s, nmse).
    """
    carrier = cfg.carrier_frequency_hz
    coeffs = steering_phase_coeffs(psi, l, cfg)
    delays = np.zeros(cfg.ttds_per_subarray)
    phases = np.zeros((cfg.ttds_per_subarray, cfg.phase_shifters_per_ttd))
    top = float(ttd_grid.values[-1])
    iterations_used = 0
    final_nmse = 0.0
    clamps = 0
    proposals = 0
    for m0 in range(cfg.ttds_per_subarray):
        slopes = coeffs[m0]
        t_prev = 0.0
        x_prev = np.zeros(cfg.phase_shifters_per_ttd)
        t_cur, x_cur = t_prev, x_prev
        rounds = 0
        nmse = 0.0
        for i in range(1, cfg.max_iterations):
            t_cur = delay_update(x_prev, slopes, grid, carrier)
            if options.quantize:
                proposals += 1
                if t_cur < 0.0 or t_cur > top:
                    clamps += 1
                t_cur = quantize_delay(t_cur, ttd_grid)
            x_cur = phase_update(t_prev if options.jacobi_phase_update else t_cur, slopes, carrier)
            rounds = i
            num = float(np.sum((x_cur - x_prev) ** 2) + (t_cur - t_prev) ** 2)
            den = float(np.sum(x_cur**2) + t_cur**2)
            nmse = num / den if den > 0.0 else 0.0
            if trace is not None:
                trace.append((l, m0 + 1, i, t_cur, nmse))
            if nmse <= cfg.nmse_threshold:
                break
            t_prev, x_prev = t_cur, x_cur
        delays[m0] = t_cur
        phases[m0] = x_cur
        iterations_used = max(iterations_used, rounds)
        final_nmse = max(final_nmse, nmse)
    delays.setflags(write=False)
    phases.setflags(write=False)
    return SubarraySolution(
        delays=delays,
        phases=phases,
        iterations_used=iterations_used,
        final_nmse=final_nmse,
        clamp_count=clamps,
        proposal_count=proposals,
    )


def ideal_subprecoder(
    grid: SubcarrierGrid, psi: float, k: int, l: int, cfg: SystemConfig
) -> np.ndarray:
    """Per-subcarrier matched subarray vector (no hardware constraint)."""
    return subarray_response(grid, psi, k, l, cfg)


def design_analog_precoder(
    grid: SubcarrierGrid,
    channel: ChannelRealization,
    alloc: Allocation,
    cfg: SystemConfig,
    method: str = ALGORITHM1,
    options: SolverOptions = DEFAULT_OPTIONS,
    trace: list | None = None,
) -> AnalogPrecoder:
    """Point every subarray at its owner's direction with the chosen method."""
    if method not in (ALGORITHM1, IDEAL):
        raise ValueError(f"unknown analog method {method!r}")
    owners = serving_users(alloc)
    psi = channel.psi[owners].copy()
    psi.setflags(write=False)
    solutions = None
    if method == ALGORITHM1:
        ttd_grid = build_ttd_grid(cfg)
        solutions = tuple(
            optimize_subarray(grid, float(psi[l0]), l0 + 1, ttd_grid, cfg, options, trace)
            for l0 in range(cfg.rf_chain_count)
        )
    return AnalogPrecoder(
        method=method,
        serving_user=tuple(int(n) for n in owners),
        serving_psi=psi,
        solutions=solutions,
    )


def subprecoder_vector(
    precoder: AnalogPrecoder, grid: SubcarrierGrid, k: int, l: int, cfg: SystemConfig
) -> np.ndarray:
    """Unit-modulus vector applied by subarray l at subcarrier k (1-based)."""
    profile = _phase_profile(precoder, grid, l, cfg)[k - 1]
    return np.exp(1j * np.pi * profile) / np.sqrt(cfg.transmit_antennas)


def assemble_analog_precoder(
    precoder: AnalogPrecoder, grid: SubcarrierGrid, k: int, cfg: SystemConfig
) -> np.ndarray:
    """Dense (transmit_antennas x rf_chain_count) block-diagonal matrix at k."""
    size = cfg.elements_per_subarray
    out = np.zeros((cfg.transmit_antennas, cfg.rf_chain_count), dtype=complex)
    for l0 in range(cfg.rf_chain_count):
        out[l0 * size : (l0 + 1) * size, l0] = subprecoder_vector(
            precoder, grid, k, l0 + 1, cfg
        )
    return out


def coupling_tensor(
    channel: ChannelRealization,
    precoder: AnalogPrecoder,
    grid: SubcarrierGrid,
    cfg: SystemConfig,
) -> np.ndarray:
    """Inner products of every user's subarray slice with every applied vector.

    Shape (user_count, rf_chain_count, subcarrier_count); entry [n, l, k0] is
    the conjugated steering slice of user n on subarray l+1 dotted with that
    subarray's precoding vector at subcarrier k0+1.  These scalars carry all
    channel/precoder interaction: effective channels, gains, and bounds are
    built from them.
    """
    n_users = channel.psi.size
    out = np.empty((n_users, cfg.rf_chain_count, grid.count), dtype=complex)
    for l0 in range(cfg.rf_chain_count):
        profile = _phase_profile(precoder, grid, l0 + 1, cfg)  # (K, MP)
        for n in range(n_users):
            target = _steering_profile(grid, float(channel.psi[n]), l0 + 1, cfg)
            out[n, l0] = np.exp(1j * np.pi * (target + profile)).sum(axis=1)
    out /= cfg.transmit_antennas
    return out


def _steering_profile(
    grid: SubcarrierGrid, psi: float, l: int, cfg: SystemConfig
) -> np.ndarray:
    """(K, MP) target phases (units of pi, sign as in the steering slice conjugate)."""
    coeffs = steering_phase_coeffs(psi, l, cfg).ravel()
    return grid.ratios[:, None] * coeffs[None, :]


def _phase_profile(
    precoder: AnalogPrecoder, grid: SubcarrierGrid, l: int, cfg: SystemConfig
) -> np.ndarray:
    """(K, MP) applied phases (units of pi) of subarray l across the band."""
    if precoder.method == IDEAL:
        return -_steering_profile(grid, float(precoder.serving_psi[l - 1]), l, cfg)
    sol = precoder.solutions[l - 1]
    flat_phases = sol.phases.ravel()
    line_delays = np.repeat(sol.delays, cfg.phase_shifters_per_ttd)
    return flat_phases[None, :] - 2.0 * grid.freqs[:, None] * line_delays[None, :]
