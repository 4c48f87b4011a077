from __future__ import annotations

import numpy as np
import pytest

from thzlink import (
    ALGORITHM1,
    IDEAL,
    SingularChannelError,
    assemble_analog_precoder,
    build_subcarrier_grid,
    channel_matrix,
    design_analog_precoder,
    design_digital_precoder,
    effective_channel,
    effective_channel_tensor,
    matched_precoder,
    max_column_power,
    normalize_power,
    synthesize_channel,
    uniform_allocation,
    zf_precoder,
)


@pytest.fixture()
def tiny_setup(tiny_cfg):
    grid = build_subcarrier_grid(tiny_cfg)
    real = synthesize_channel(tiny_cfg, np.random.default_rng(21))
    alloc = uniform_allocation(tiny_cfg.user_count, tiny_cfg.rf_chain_count)
    precoder = design_analog_precoder(grid, real, alloc, tiny_cfg)
    return grid, real, alloc, precoder


def test_effective_channel_matches_explicit_matrices(tiny_cfg, tiny_setup):
    grid, real, _, precoder = tiny_setup
    for k in (1, 17, 33):
        eff = effective_channel(real, precoder, grid, tiny_cfg, k)
        full = assemble_analog_precoder(precoder, grid, k, tiny_cfg)
        for n in range(tiny_cfg.user_count):
            h = channel_matrix(real, grid, k, n, tiny_cfg)
            v = np.linalg.svd(h)[0][:, 0]  # dominant receive direction
            row = v.conj() @ h @ full
            # the receive combiner is unique up to phase; compare magnitudes
            np.testing.assert_allclose(np.abs(row), np.abs(eff[n]), rtol=1e-9, atol=1e-18)


def test_effective_row_reproduces_link_norm(tiny_cfg, tiny_setup):
    # |row . w| equals ||H F w|| for any digital column (rank-one channel)
    grid, real, _, precoder = tiny_setup
    rng = np.random.default_rng(22)
    for k in (1, 12, 33):
        eff = effective_channel(real, precoder, grid, tiny_cfg, k)
        full = assemble_analog_precoder(precoder, grid, k, tiny_cfg)
        for n in range(tiny_cfg.user_count):
            h = channel_matrix(real, grid, k, n, tiny_cfg)
            for _ in range(3):
                w = rng.normal(size=4) + 1j * rng.normal(size=4)
                assert abs(eff[n] @ w) == pytest.approx(
                    np.linalg.norm(h @ full @ w), rel=1e-9
                )


def test_effective_tensor_stacks_per_subcarrier(tiny_cfg, tiny_setup):
    grid, real, _, precoder = tiny_setup
    tensor = effective_channel_tensor(real, precoder, grid, tiny_cfg)
    assert tensor.shape == (33, 2, 4)
    np.testing.assert_array_equal(tensor[16], effective_channel(real, precoder, grid, tiny_cfg, 17))


def test_ideal_mode_concentrates_on_owned_subarrays(tiny_cfg):
    grid = build_subcarrier_grid(tiny_cfg)
    real = synthesize_channel(tiny_cfg, np.random.default_rng(40))
    # force well-separated directions so cross-coupling is weak
    import dataclasses

    real = dataclasses.replace(
        real, psi=np.array([-0.6, 0.7]), phi=real.phi, tau_s=real.tau_s, gains=real.gains
    )
    alloc = uniform_allocation(tiny_cfg.user_count, tiny_cfg.rf_chain_count)
    precoder = design_analog_precoder(grid, real, alloc, tiny_cfg, IDEAL)
    eff = effective_channel(real, precoder, grid, tiny_cfg, 17)
    for n, (first, last) in enumerate(alloc.ranges):
        own = np.abs(eff[n, first - 1 : last])
        others = np.delete(np.abs(eff[n]), np.s_[first - 1 : last])
        assert own.min() > 3.0 * others.max()


def test_zf_identity_passthrough():
    w = zf_precoder(np.eye(3, dtype=complex))
    np.testing.assert_allclose(w, np.eye(3), atol=1e-12)


def test_zf_cancels_interference():
    rng = np.random.default_rng(23)
    eff = rng.normal(size=(2, 4)) + 1j * rng.normal(size=(2, 4))
    w = zf_precoder(eff)
    np.testing.assert_allclose(eff @ w, np.eye(2), atol=1e-9)


def test_zf_rejects_rank_deficient_rows():
    row = np.array([1.0 + 0j, 2.0, 0.5, -1.0])
    eff = np.vstack([row, row])
    with pytest.raises(SingularChannelError):
        zf_precoder(eff)


def test_matched_precoder_indicator_columns():
    alloc = uniform_allocation(2, 4)
    w = matched_precoder(alloc, 4)
    expected = np.array(
        [[1, 0], [1, 0], [0, 1], [0, 1]], dtype=complex
    ) / np.sqrt(2)
    np.testing.assert_array_equal(w, expected)


def test_normalize_power_exact_constraint(tiny_cfg, tiny_setup):
    grid, real, alloc, precoder = tiny_setup
    rng = np.random.default_rng(24)
    for k in (1, 33):
        full = assemble_analog_precoder(precoder, grid, k, tiny_cfg)
        w = rng.normal(size=(4, 2)) + 1j * rng.normal(size=(4, 2))
        scaled = normalize_power(w)
        assert np.linalg.norm(full @ scaled) ** 2 == pytest.approx(
            tiny_cfg.user_count, rel=1e-12
        )
        # scale invariance and idempotence
        np.testing.assert_allclose(normalize_power(17.0 * w), scaled, rtol=1e-12)
        np.testing.assert_allclose(normalize_power(scaled), scaled, rtol=1e-12)


def test_normalize_power_rejects_zero():
    with pytest.raises(ValueError):
        normalize_power(np.zeros((4, 2), dtype=complex))


def test_max_column_power_examples():
    assert max_column_power(np.eye(4, dtype=complex)) == 1.0
    w = np.array([[1.0, 0.0], [0.0, 2.0]], dtype=complex)
    assert max_column_power(w) == 4.0
    rng = np.random.default_rng(25)
    stack = rng.normal(size=(5, 4, 3)) + 1j * rng.normal(size=(5, 4, 3))
    brute = max(
        float(np.sum(np.abs(stack[k][:, n]) ** 2))
        for k in range(5)
        for n in range(3)
    )
    assert max_column_power(stack) == pytest.approx(brute, rel=1e-12)


def test_design_digital_precoder_zero_forces_all_subcarriers(tiny_cfg, tiny_setup):
    grid, real, alloc, precoder = tiny_setup
    tensor = effective_channel_tensor(real, precoder, grid, tiny_cfg)
    digital = design_digital_precoder(tensor, alloc)
    assert digital.weights.shape == (33, 4, 2)
    assert not digital.fallback_used
    assert digital.omega == pytest.approx(max_column_power(digital.weights), rel=1e-12)
    assert digital.omega <= tiny_cfg.user_count * tiny_cfg.rf_chain_count * (1 + 1e-12)
    for k0 in range(33):
        received = tensor[k0] @ digital.weights[k0]
        c = received[0, 0]
        assert abs(c) > 0
        np.testing.assert_allclose(received, c * np.eye(2), atol=1e-6 * abs(c))
        # power constraint via the block structure
        assert np.linalg.norm(digital.weights[k0]) ** 2 == pytest.approx(
            tiny_cfg.user_count * tiny_cfg.rf_chain_count, rel=1e-12
        )


def test_design_digital_precoder_fallback_on_singular_subcarrier(tiny_cfg, tiny_setup):
    grid, real, alloc, precoder = tiny_setup
    tensor = np.array(effective_channel_tensor(real, precoder, grid, tiny_cfg))
    tensor[5, 1] = tensor[5, 0]  # duplicate rows: singular at one subcarrier
    digital = design_digital_precoder(tensor, alloc)
    assert digital.fallback_used
    assert digital.fallback_count == 1
    np.testing.assert_allclose(
        digital.weights[5], normalize_power(matched_precoder(alloc, 4)), rtol=1e-12
    )
    received = tensor[6] @ digital.weights[6]
    np.testing.assert_allclose(received, received[0, 0] * np.eye(2), atol=1e-6 * abs(received[0, 0]))
