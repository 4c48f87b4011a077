from __future__ import annotations

import json
from pathlib import Path

import pytest

from thzlink import SystemConfig, load_config, to_json_dict

REPO = Path(__file__).resolve().parents[1]


@pytest.fixture(scope="session")
def desk_cfg() -> SystemConfig:
    return load_config(REPO / "configs" / "desk.json")


@pytest.fixture(scope="session")
def full_cfg() -> SystemConfig:
    return load_config(REPO / "configs" / "full.json")


@pytest.fixture(scope="session")
def tiny_cfg() -> SystemConfig:
    """Small enough for explicit-matrix oracles, still structurally non-trivial."""
    return SystemConfig(
        carrier_frequency_hz=3.0e11,
        bandwidth_hz=3.0e10,
        subcarrier_count=33,
        user_count=2,
        rf_chain_count=4,
        ttds_per_subarray=4,
        phase_shifters_per_ttd=2,
        transmit_antennas=32,
        receive_antennas=2,
        snr_linear=10.0,
        ttd_quantization_levels=400,
        ttd_step_seconds=4.0e-12,
        max_iterations=50,
        nmse_threshold=0.01,
        user_distances_m=(5.0, 9.0),
    )


def write_config(cfg: SystemConfig, path: Path) -> Path:
    path.write_text(json.dumps(to_json_dict(cfg), indent=2), encoding="utf-8")
    return path


@pytest.fixture()
def tiny_cfg_path(tiny_cfg, tmp_path) -> Path:
    return write_config(tiny_cfg, tmp_path / "tiny.json")
