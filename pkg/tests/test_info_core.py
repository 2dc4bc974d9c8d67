"""Unit tests for capacities, log-dets and MAC subset rates."""

import math

import numpy as np
import pytest

from wyner_rates import (
    GaussianMac,
    awgn_capacity,
    log_det_psd,
    mac_region_contains,
    mac_subset_rate,
    subset_rate_table,
)
from wyner_rates.info_core import DefinitenessError, SizeError, subset_rates_for_masks


def test_awgn_capacity_values():
    assert awgn_capacity(0.0) == 0.0
    assert abs(awgn_capacity(10.0) - 0.5 * math.log2(11.0)) < 1e-15
    assert abs(awgn_capacity(3.0) - 1.0) < 1e-15
    with pytest.raises(ValueError):
        awgn_capacity(-0.1)


def test_log_det_psd_matches_numpy():
    rng = np.random.default_rng(0)
    for _ in range(20):
        n = rng.integers(1, 6)
        a = rng.normal(size=(n, n))
        m = np.eye(n) + a @ a.T
        expected = math.log2(np.linalg.det(m))
        assert abs(log_det_psd(m) - expected) < 1e-8


def test_log_det_psd_rejects_bad_input():
    with pytest.raises(DefinitenessError):
        log_det_psd(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(DefinitenessError):
        log_det_psd(np.array([[1.0, 2.0], [2.0, 1.0]]))  # indefinite
    with pytest.raises(ValueError):
        log_det_psd(np.ones((2, 3)))


def test_mac_subset_rate_single_antenna():
    # Scalar channel: f({0}) must be the AWGN capacity at SNR h^2 P / K.
    mac = GaussianMac(np.array([[0.7]]), 5.0, np.array([[2.0]]))
    expected = awgn_capacity(0.7 ** 2 * 5.0 / 2.0)
    assert abs(mac_subset_rate(mac, [0]) - expected) < 1e-14
    assert mac_subset_rate(mac, []) == 0.0


def test_subset_rate_table_matches_direct():
    rng = np.random.default_rng(1)
    for _ in range(10):
        nt = int(rng.integers(1, 7))
        nr = int(rng.integers(1, 5))
        h = rng.normal(size=(nr, nt))
        a = rng.normal(size=(nr, nr))
        k = np.eye(nr) + 0.3 * (a @ a.T)
        mac = GaussianMac(h, float(rng.uniform(0.1, 20.0)), k)
        table = subset_rate_table(mac)
        for mask in range(1 << nt):
            cols = [i for i in range(nt) if mask >> i & 1]
            assert abs(table[mask] - mac_subset_rate(mac, cols)) < 1e-9


def test_subset_rates_for_masks_agrees_with_table():
    rng = np.random.default_rng(2)
    h = rng.normal(size=(3, 6))
    mac = GaussianMac(h, 4.0, np.eye(3))
    table = subset_rate_table(mac)
    masks = [1, 5, 63, 40]
    got = subset_rates_for_masks(mac, masks)
    assert np.allclose(got, table[masks], atol=1e-10)


def test_enumeration_guard():
    h = np.zeros((1, 21))
    h[0, :] = 1.0
    mac = GaussianMac(h, 1.0, np.eye(1))
    with pytest.raises(SizeError):
        subset_rate_table(mac)


def test_region_membership():
    mac = GaussianMac(np.array([[1.0, 0.5]]), 10.0, np.eye(1))
    f1 = mac_subset_rate(mac, [0])
    f12 = mac_subset_rate(mac, [0, 1])
    assert mac_region_contains(mac, [f1, f12 - f1])
    assert not mac_region_contains(mac, [f1 + 0.01, f12 - f1])
    with pytest.raises(ValueError):
        mac_region_contains(mac, [-0.1, 0.0])


def test_polymatroid_axioms_sample():
    # Normalized, monotone, submodular on a few random instances; the
    # acceptance suite repeats this at the mandated scale.
    rng = np.random.default_rng(3)
    for _ in range(10):
        nt = int(rng.integers(1, 7))
        nr = int(rng.integers(1, 4))
        h = rng.normal(size=(nr, nt))
        mac = GaussianMac(h, float(rng.uniform(0.5, 10)), np.eye(nr))
        table = subset_rate_table(mac)
        masks = np.arange(1 << nt)
        assert table[0] == 0.0
        for i in range(nt):
            bit = 1 << i
            off = masks[(masks & bit) == 0]
            assert np.all(table[off] <= table[off | bit] + 1e-9)
        s, t = np.meshgrid(masks, masks)
        assert np.all(table[s] + table[t] >= table[s | t] + table[s & t] - 1e-9)
