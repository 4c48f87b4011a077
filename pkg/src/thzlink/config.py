"""System configuration, OFDM subcarrier grid, and quantized delay grid.

All downstream modules consume a validated :class:`SystemConfig` plus the two
derived grids built here.  Subcarrier indices handed to formula-level helpers
are 1-based; array storage is 0-based.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0  # m/s


class ConfigError(ValueError):
    """A configuration file or parameter set violates a structural constraint."""


@dataclass(frozen=True)
class SystemConfig:
    """Static description of one downlink scenario.

    The transmit array is partitioned into ``rf_chain_count`` non-overlapping
    subarrays; each subarray feeds ``ttds_per_subarray`` delay lines and each
    delay line fans out to ``phase_shifters_per_ttd`` antennas.
    """

    carrier_frequency_hz: float
    bandwidth_hz: float
    subcarrier_count: int
    user_count: int
    rf_chain_count: int
    ttds_per_subarray: int
    phase_shifters_per_ttd: int
    transmit_antennas: int
    receive_antennas: int
    snr_linear: float
    ttd_quantization_levels: int
    ttd_step_seconds: float
    max_iterations: int
    nmse_threshold: float
    user_distances_m: tuple[float, ...]
    absorption_coeff_per_m: float = 0.0033

    @property
    def elements_per_subarray(self) -> int:
        return self.ttds_per_subarray * self.phase_shifters_per_ttd


@dataclass(frozen=True)
class SubcarrierGrid:
    """Absolute subcarrier frequencies and their ratios to the carrier.

    ``gamma_factor`` is the mean of ``ratios**2`` over the grid; it shows up as
    the curvature constant of the delay-fitting objective.
    """

    freqs: np.ndarray  # (K,) Hz
    ratios: np.ndarray  # (K,) dimensionless, freqs / carrier
    gamma_factor: float

    @property
    def count(self) -> int:
        return int(self.freqs.size)


@dataclass(frozen=True)
class TtdGrid:
    """Realizable delay values: uniform levels 0, step, ..., (levels-1)*step."""

    values: np.ndarray  # (Q,) seconds, ascending

    @property
    def levels(self) -> int:
        return int(self.values.size)

    @property
    def step(self) -> float:
        if self.values.size < 2:
            return 0.0
        return float(self.values[1] - self.values[0])


def validate_config(cfg: SystemConfig) -> SystemConfig:
    """Check structural invariants; return the config unchanged when valid."""
    ints = {
        "subcarrier_count": cfg.subcarrier_count,
        "user_count": cfg.user_count,
        "rf_chain_count": cfg.rf_chain_count,
        "ttds_per_subarray": cfg.ttds_per_subarray,
        "phase_shifters_per_ttd": cfg.phase_shifters_per_ttd,
        "transmit_antennas": cfg.transmit_antennas,
        "receive_antennas": cfg.receive_antennas,
        "ttd_quantization_levels": cfg.ttd_quantization_levels,
        "max_iterations": cfg.max_iterations,
    }
    for name, value in ints.items():
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            raise ConfigError(f"{name} must be a positive integer, got {value!r}")
    positives = {
        "carrier_frequency_hz": cfg.carrier_frequency_hz,
        "bandwidth_hz": cfg.bandwidth_hz,
        "snr_linear": cfg.snr_linear,
        "ttd_step_seconds": cfg.ttd_step_seconds,
        "nmse_threshold": cfg.nmse_threshold,
        "absorption_coeff_per_m": cfg.absorption_coeff_per_m,
    }
    for name, value in positives.items():
        if not math.isfinite(value) or value <= 0.0:
            raise ConfigError(f"{name} must be a positive finite number, got {value!r}")
    if cfg.subcarrier_count % 2 != 1:
        raise ConfigError(
            f"subcarrier_count must be odd so a central subcarrier sits exactly on "
            f"the carrier, got {cfg.subcarrier_count}"
        )
    expected = cfg.rf_chain_count * cfg.ttds_per_subarray * cfg.phase_shifters_per_ttd
    if cfg.transmit_antennas != expected:
        raise ConfigError(
            f"transmit_antennas={cfg.transmit_antennas} does not equal "
            f"rf_chain_count*ttds_per_subarray*phase_shifters_per_ttd={expected}"
        )
    if cfg.user_count > cfg.rf_chain_count:
        raise ConfigError(
            f"user_count={cfg.user_count} exceeds rf_chain_count={cfg.rf_chain_count}; "
            f"every user needs at least one subarray"
        )
    if len(cfg.user_distances_m) != cfg.user_count:
        raise ConfigError(
            f"user_distances_m has {len(cfg.user_distances_m)} entries for "
            f"user_count={cfg.user_count}"
        )
    for d in cfg.user_distances_m:
        if not math.isfinite(d) or d <= 0.0:
            raise ConfigError(f"user distances must be positive and finite, got {d!r}")
    return cfg


def build_subcarrier_grid(cfg: SystemConfig) -> SubcarrierGrid:
    """Uniform grid of ``subcarrier_count`` tones centred on the carrier."""
    k = cfg.subcarrier_count
    fc = cfg.carrier_frequency_hz
    bw = cfg.bandwidth_hz
    offsets = np.arange(k, dtype=float) - (k - 1) / 2.0
    freqs = fc + (bw / k) * offsets
    ratios = freqs / fc
    gamma = 1.0 + bw * bw * (k * k - 1.0) / (12.0 * fc * fc * k * k)
    freqs.setflags(write=False)
    ratios.setflags(write=False)
    return SubcarrierGrid(freqs=freqs, ratios=ratios, gamma_factor=gamma)


def build_ttd_grid(cfg: SystemConfig) -> TtdGrid:
    values = cfg.ttd_step_seconds * np.arange(cfg.ttd_quantization_levels, dtype=float)
    values.setflags(write=False)
    return TtdGrid(values=values)


def quantize_delay(delay_s: float, grid: TtdGrid) -> float:
    """Snap a delay to the nearest grid level, ties resolved to the smaller one.

    Out-of-range proposals clamp to the boundary levels.
    """
    values = grid.values
    if values.size == 1:
        return float(values[0])
    step = float(values[1] - values[0])
    base = math.floor(delay_s / step)
    lo = min(max(base - 1, 0), values.size - 1)
    hi = min(max(base + 1, 0), values.size - 1)
    best = lo
    for idx in range(lo + 1, hi + 1):
        if abs(delay_s - values[idx]) < abs(delay_s - values[best]):
            best = idx
    return float(values[best])


_CONFIG_KEYS = (
    "carrier_frequency_hz",
    "bandwidth_hz",
    "subcarrier_count",
    "user_count",
    "rf_chain_count",
    "ttds_per_subarray",
    "phase_shifters_per_ttd",
    "transmit_antennas",
    "receive_antennas",
    "transmit_snr_db",
    "ttd_quantization_levels",
    "ttd_step_seconds",
    "max_iterations",
    "nmse_threshold",
    "user_distances_m",
)
_OPTIONAL_KEYS = ("absorption_coeff_per_m",)


def load_config(path: str | Path) -> SystemConfig:
    """Read a JSON config file and return a validated :class:`SystemConfig`.

    The file holds one flat object whose keys match the documented schema
    (see ``configs/desk.json``); SNR is given in dB and converted to linear.
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"config file {path} must contain a JSON object")
    missing = [key for key in _CONFIG_KEYS if key not in raw]
    if missing:
        raise ConfigError(f"config file {path} is missing keys: {', '.join(missing)}")
    unknown = [key for key in raw if key not in _CONFIG_KEYS + _OPTIONAL_KEYS]
    if unknown:
        raise ConfigError(f"config file {path} has unknown keys: {', '.join(unknown)}")

    def _as_int(key: str) -> int:
        value = raw[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{key} must be an integer, got {value!r}")
        if isinstance(value, float):
            if not value.is_integer():
                raise ConfigError(f"{key} must be an integer, got {value!r}")
            value = int(value)
        return value

    def _as_float(key: str, default: float | None = None) -> float:
        if key not in raw:
            return float(default)  # type: ignore[arg-type]
        value = raw[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{key} must be a number, got {value!r}")
        return float(value)

    distances = raw["user_distances_m"]
    if not isinstance(distances, list) or not all(
        isinstance(d, (int, float)) and not isinstance(d, bool) for d in distances
    ):
        raise ConfigError("user_distances_m must be a list of numbers")
    cfg = SystemConfig(
        carrier_frequency_hz=_as_float("carrier_frequency_hz"),
        bandwidth_hz=_as_float("bandwidth_hz"),
        subcarrier_count=_as_int("subcarrier_count"),
        user_count=_as_int("user_count"),
        rf_chain_count=_as_int("rf_chain_count"),
        ttds_per_subarray=_as_int("ttds_per_subarray"),
        phase_shifters_per_ttd=_as_int("phase_shifters_per_ttd"),
        transmit_antennas=_as_int("transmit_antennas"),
        receive_antennas=_as_int("receive_antennas"),
        snr_linear=10.0 ** (_as_float("transmit_snr_db") / 10.0),
        ttd_quantization_levels=_as_int("ttd_quantization_levels"),
        ttd_step_seconds=_as_float("ttd_step_seconds"),
        max_iterations=_as_int("max_iterations"),
        nmse_threshold=_as_float("nmse_threshold"),
        user_distances_m=tuple(float(d) for d in distances),
        absorption_coeff_per_m=_as_float("absorption_coeff_per_m", 0.0033),
    )
    return validate_config(cfg)


def to_json_dict(cfg: SystemConfig) -> dict:
    """File-schema echo of a config (inverse of :func:`load_config`)."""
    return {
        "carrier_frequency_hz": cfg.carrier_frequency_hz,
        "bandwidth_hz": cfg.bandwidth_hz,
        "subcarrier_count": cfg.subcarrier_count,
        "user_count": cfg.user_count,
        "rf_chain_count": cfg.rf_chain_count,
        "ttds_per_subarray": cfg.ttds_per_subarray,
        "phase_shifters_per_ttd": cfg.phase_shifters_per_ttd,
        "transmit_antennas": cfg.transmit_antennas,
        "receive_antennas": cfg.receive_antennas,
        "transmit_snr_db": 10.0 * math.log10(cfg.snr_linear),
        "ttd_quantization_levels": cfg.ttd_quantization_levels,
        "ttd_step_seconds": cfg.ttd_step_seconds,
        "max_iterations": cfg.max_iterations,
        "nmse_threshold": cfg.nmse_threshold,
        "user_distances_m": list(cfg.user_distances_m),
        "absorption_coeff_per_m": cfg.absorption_coeff_per_m,
    }
