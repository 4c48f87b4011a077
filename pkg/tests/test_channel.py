from __future__ import annotations

import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thzlink import (
    SPEED_OF_LIGHT,
    SystemConfig,
    build_subcarrier_grid,
    channel_matrix,
    rx_array_response,
    subarray_response,
    synthesize_channel,
    tx_array_response,
    write_channel_dump,
)


def test_delay_follows_distance(tiny_cfg):
    real = synthesize_channel(tiny_cfg, np.random.default_rng(0))
    np.testing.assert_array_equal(real.tau_s, np.array([5.0, 9.0]) / SPEED_OF_LIGHT)


def test_gain_magnitude_formula(tiny_cfg):
    real = synthesize_channel(tiny_cfg, np.random.default_rng(1))
    freqs = build_subcarrier_grid(tiny_cfg).freqs
    for n, d in enumerate(tiny_cfg.user_distances_m):
        expected = (
            SPEED_OF_LIGHT
            / (4.0 * np.pi * freqs * d)
            * np.exp(-0.5 * tiny_cfg.absorption_coeff_per_m * d)
        )
        np.testing.assert_allclose(np.abs(real.gains[n]), expected, rtol=1e-12)


def test_gain_decays_with_distance_and_frequency(tiny_cfg):
    real = synthesize_channel(tiny_cfg, np.random.default_rng(2))
    mags = np.abs(real.gains)
    assert np.all(mags[0] > mags[1])  # user 0 is closer
    assert np.all(np.diff(mags, axis=1) < 0)  # higher subcarrier frequency, lower gain
    assert np.all(mags > 0)


def test_same_seed_same_realization(tiny_cfg):
    a = synthesize_channel(tiny_cfg, np.random.default_rng(77))
    b = synthesize_channel(tiny_cfg, np.random.default_rng(77))
    for field in ("psi", "phi", "tau_s", "gains"):
        np.testing.assert_array_equal(getattr(a, field), getattr(b, field))
    c = synthesize_channel(tiny_cfg, np.random.default_rng(78))
    assert not np.array_equal(a.psi, c.psi)


def test_direction_sines_in_unit_interval(tiny_cfg):
    rng = np.random.default_rng(3)
    for _ in range(50):
        real = synthesize_channel(tiny_cfg, rng)
        assert np.all(np.abs(real.psi) <= 1.0)
        assert np.all(np.abs(real.phi) <= 1.0)


def test_nonpositive_distance_rejected(tiny_cfg):
    bad = dataclasses.replace(tiny_cfg, user_distances_m=(5.0, -1.0))
    with pytest.raises(ValueError, match="positive"):
        synthesize_channel(bad, np.random.default_rng(0))


def test_tx_response_broadside_and_norm(tiny_cfg):
    grid = build_subcarrier_grid(tiny_cfg)
    u = tx_array_response(grid, 0.0, 1, tiny_cfg.transmit_antennas)
    np.testing.assert_array_equal(u, np.full(32, 1.0 / np.sqrt(32), dtype=complex))
    u = tx_array_response(grid, 0.71, 17, tiny_cfg.transmit_antennas)
    assert np.linalg.norm(u) == pytest.approx(1.0, rel=1e-12)


def test_tx_response_entry_spot_check(tiny_cfg):
    grid = build_subcarrier_grid(tiny_cfg)
    mid = (tiny_cfg.subcarrier_count + 1) // 2  # ratio exactly 1 there
    u = tx_array_response(grid, 0.5, mid, 4)
    # element 3 (1-based): phase -pi * 1 * 0.5 * 2 = -pi
    assert u[2] == pytest.approx(-0.5 + 0j, abs=1e-12)
    assert u[0] == pytest.approx(0.5 + 0j, abs=1e-15)


def test_rx_response_entry_spot_check(tiny_cfg):
    grid = build_subcarrier_grid(tiny_cfg)
    mid = (tiny_cfg.subcarrier_count + 1) // 2
    v = rx_array_response(grid, -1.0, mid, 2)
    # element 2: phase -pi * (-1) * 1 = +pi
    assert v[1] == pytest.approx((-1.0 + 0j) / np.sqrt(2), abs=1e-12)


def test_subcarrier_index_is_one_based(tiny_cfg):
    grid = build_subcarrier_grid(tiny_cfg)
    with pytest.raises(IndexError):
        tx_array_response(grid, 0.0, 0, 4)
    with pytest.raises(IndexError):
        tx_array_response(grid, 0.0, tiny_cfg.subcarrier_count + 1, 4)
    with pytest.raises(IndexError):
        subarray_response(grid, 0.0, 1, 5, tiny_cfg)


def test_subarray_slices_concatenate_to_full_response(tiny_cfg):
    grid = build_subcarrier_grid(tiny_cfg)
    for k in (1, 9, 33):
        full = tx_array_response(grid, -0.37, k, tiny_cfg.transmit_antennas)
        parts = [
            subarray_response(grid, -0.37, k, l, tiny_cfg)
            for l in range(1, tiny_cfg.rf_chain_count + 1)
        ]
        np.testing.assert_allclose(np.concatenate(parts), full, atol=1e-12)
        for part in parts:
            assert np.linalg.norm(part) ** 2 == pytest.approx(
                1.0 / tiny_cfg.rf_chain_count, rel=1e-12
            )


@settings(max_examples=60, deadline=None)
@given(
    psi=st.floats(min_value=-1.0, max_value=1.0),
    k=st.integers(min_value=1, max_value=33),
    l=st.integers(min_value=1, max_value=4),
)
def test_subarray_slice_matches_full_slice(psi, k, l):
    cfg = SystemConfig(
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
        ttd_step_seconds=4e-12,
        max_iterations=50,
        nmse_threshold=0.01,
        user_distances_m=(5.0, 9.0),
    )
    grid = build_subcarrier_grid(cfg)
    size = cfg.elements_per_subarray
    full = tx_array_response(grid, psi, k, cfg.transmit_antennas)
    part = subarray_response(grid, psi, k, l, cfg)
    np.testing.assert_allclose(part, full[(l - 1) * size : l * size], atol=1e-12)


def test_channel_matrix_rank_one_and_norm(tiny_cfg):
    grid = build_subcarrier_grid(tiny_cfg)
    real = synthesize_channel(tiny_cfg, np.random.default_rng(5))
    for k in (1, 17, 33):
        h = channel_matrix(real, grid, k, 1, tiny_cfg)
        assert h.shape == (2, 32)
        s = np.linalg.svd(h, compute_uv=False)
        assert s[1] <= 1e-12 * s[0]
        expected = np.sqrt(32 * 2) * np.abs(real.gains[1, k - 1])
        assert np.linalg.norm(h) == pytest.approx(expected, rel=1e-12)


def test_channel_matrix_beamforming_identity(tiny_cfg):
    # steering toward the user's own direction collects the full array gain
    grid = build_subcarrier_grid(tiny_cfg)
    real = synthesize_channel(tiny_cfg, np.random.default_rng(6))
    k = 17
    h = channel_matrix(real, grid, k, 0, tiny_cfg)
    u = tx_array_response(grid, float(real.psi[0]), k, tiny_cfg.transmit_antennas)
    v = rx_array_response(grid, float(real.phi[0]), k, tiny_cfg.receive_antennas)
    scale = (
        np.sqrt(32 * 2)
        * real.gains[0, k - 1]
        * np.exp(-2j * np.pi * grid.freqs[k - 1] * real.tau_s[0])
    )
    np.testing.assert_allclose(h @ u, scale * v, rtol=1e-12)


def test_channel_matrix_linear_in_gain(tiny_cfg):
    grid = build_subcarrier_grid(tiny_cfg)
    real = synthesize_channel(tiny_cfg, np.random.default_rng(7))
    doubled = dataclasses.replace(real, gains=2.0 * real.gains)
    h1 = channel_matrix(real, grid, 3, 0, tiny_cfg)
    h2 = channel_matrix(doubled, grid, 3, 0, tiny_cfg)
    np.testing.assert_allclose(h2, 2.0 * h1, rtol=1e-12)


def test_channel_dump_schema(tiny_cfg, tmp_path):
    real = synthesize_channel(tiny_cfg, np.random.default_rng(8))
    path = tmp_path / "chan.csv"
    write_channel_dump(real, path)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "user,psi,phi,tau_s,k,re_alpha,im_alpha"
    assert len(lines) == 1 + tiny_cfg.user_count * tiny_cfg.subcarrier_count
    first = lines[1].split(",")
    assert first[0] == "1" and first[4] == "1"
    assert float(first[5]) == real.gains[0, 0].real
