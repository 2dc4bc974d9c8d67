"""Tests for the per-scheme rate computations."""

import math

import numpy as np
import pytest

from wyner_rates import (
    CellArrayModel,
    Dimension,
    GaussianMac,
    awgn_capacity,
    evaluate_scheme,
    hk_region_constraints,
    hk_single_cell_rate,
    mac_subset_rate,
    multilayer_scheduled_rate,
    naive_rate,
    nonoverlap_cluster_rate,
    overlap_full_rate,
    overlap_scheduled_rate,
    overlap_simplified_rate,
    scheduled_digital_rate,
    time_sharing_rate,
    wyner_bound,
)
from wyner_rates.info_core import SizeError
from wyner_rates.schemes import (
    _hk_matrices,
    _scheme_mac,
    hk_closed_form_rate,
    overlap_scheduled_phase2_rate,
)
from wyner_rates.topology import build_overlap_simplified, cluster_channel

M1 = CellArrayModel(Dimension.LINE_1D, 0.5, 10.0)
M2 = CellArrayModel(Dimension.HEX_2D, 0.5, 10.0)

# Frozen quadrature oracle: composite Simpson with 10^6 panels on the 1-D
# bound integrand at alpha = 0.5, P = 10.
WYNER_1D_ORACLE = 1.491983006248571


def test_wyner_bound_oracle():
    assert abs(wyner_bound(M1) - WYNER_1D_ORACLE) < 1e-10


def test_wyner_2d_consistent_with_riemann():
    # Midpoint rule on a 400x400 grid agrees to well under its own error.
    t = (np.arange(400) + 0.5) / 400.0
    t1, t2 = np.meshgrid(t, t)
    g = 1.0 + 2.0 * 0.5 * (np.cos(2 * np.pi * t1) + np.cos(2 * np.pi * t2)
                           + np.cos(2 * np.pi * (t1 + t2)))
    riemann = float((0.5 * np.log2(1.0 + g * g * 10.0)).mean())
    assert abs(wyner_bound(M2) - riemann) < 1e-6


def test_naive_values():
    assert abs(naive_rate(M1) - awgn_capacity(10.0 / 6.0)) < 1e-15
    assert abs(naive_rate(M2) - awgn_capacity(0.625)) < 1e-15
    # monotone degradation in alpha
    prev = math.inf
    for alpha in np.linspace(0.0, 1.0, 21):
        r = naive_rate(CellArrayModel(Dimension.LINE_1D, float(alpha), 10.0))
        assert r <= prev + 1e-12
        prev = r


def test_time_sharing_values():
    assert abs(time_sharing_rate(M1) - 0.25 * math.log2(21.0)) < 1e-15
    assert abs(time_sharing_rate(M2) - math.log2(31.0) / 6.0) < 1e-15


def test_scheduled_formula():
    expected = 0.5 * (awgn_capacity(10.0 / 6.0) + awgn_capacity(10.0))
    assert abs(scheduled_digital_rate(M1) - expected) < 1e-12
    expected2 = (awgn_capacity(10.0 / 16.0) + awgn_capacity(10.0 / 8.5)
                 + awgn_capacity(10.0)) / 3.0
    assert abs(scheduled_digital_rate(M2) - expected2) < 1e-12
    assert scheduled_digital_rate(M1) >= naive_rate(M1)


def test_hk_closed_form_matches_lp():
    res = hk_single_cell_rate(M1)
    assert abs(res.rate - res.diagnostics["closed_form_rate"]) < 1e-7
    for lam in (0.0, 0.2, 0.7, 1.0):
        from wyner_rates.polymatroid import max_grouped_rate
        mac, grouping = _hk_matrices(M1, lam)
        lp = max_grouped_rate(mac, grouping, refine=False).objective
        assert abs(lp - hk_closed_form_rate(0.5, 10.0, lam)) < 1e-10


def test_hk_region_constraints_identity():
    rng = np.random.default_rng(12)
    for _ in range(50):
        a = float(rng.uniform(0, 1))
        p = float(rng.uniform(0.1, 50))
        lam = float(rng.uniform(0, 1))
        mac, _ = _hk_matrices(CellArrayModel(Dimension.LINE_1D, a, p), lam)
        bounds = dict(hk_region_constraints(a, p, lam))
        generic = {
            "ud": mac_subset_rate(mac, {2}),
            "d_1": mac_subset_rate(mac, {0}),
            "d_2": mac_subset_rate(mac, {0, 3}) / 2.0,
            "d_3": mac_subset_rate(mac, {0, 1, 3}) / 3.0,
            "d1_ud": mac_subset_rate(mac, {0, 2}),
            "d2_ud": mac_subset_rate(mac, {0, 2, 3}),
            "d3_ud": mac_subset_rate(mac, {0, 1, 2, 3}),
        }
        for key, val in generic.items():
            assert abs(val - bounds[key]) < 1e-10


def test_hk_region_endpoints():
    bounds0 = dict(hk_region_constraints(0.4, 10.0, 0.0))
    assert bounds0["d_1"] == 0.0 and bounds0["d_3"] == 0.0
    m = CellArrayModel(Dimension.LINE_1D, 0.4, 10.0)
    assert abs(bounds0["ud"] - naive_rate(m)) < 1e-12
    bounds1 = dict(hk_region_constraints(0.4, 10.0, 1.0))
    assert bounds1["ud"] == 0.0


def test_hk_reduction_claims():
    # On a dense closed-form grid: the per-stream headroom of the two-d
    # combined bound never exceeds the one-d combined bound's headroom, so
    # the two-d instance binds first; and the LP optimum is attained with
    # the ud rate at its individual bound.
    a = np.linspace(0.0, 1.0, 50)[:, None, None]
    p = np.linspace(0.1, 50.0, 50)[None, :, None]
    lam = np.linspace(0.0, 1.0, 50)[None, None, :]
    d = 1.0 + 2.0 * a ** 2 * (1.0 - lam) * p
    c = lambda x: 0.5 * np.log2(1.0 + x)
    ud = c((1.0 - lam) * p / d)
    d1_ud = c(((1.0 - lam) + a ** 2 * lam) * p / d)
    d2_ud = c(((1.0 - lam) + 2.0 * a ** 2 * lam) * p / d)
    assert np.all((d2_ud - ud) / 2.0 <= (d1_ud - ud) + 1e-12)

    from wyner_rates.polymatroid import max_grouped_rate
    rng = np.random.default_rng(13)
    for _ in range(60):
        av = float(rng.uniform(0, 1))
        pv = float(rng.uniform(0.1, 50))
        lv = float(rng.uniform(0, 1))
        mac, grouping = _hk_matrices(
            CellArrayModel(Dimension.LINE_1D, av, pv), lv)
        lp = max_grouped_rate(mac, grouping, refine=False).objective
        assert abs(lp - hk_closed_form_rate(av, pv, lv)) < 1e-8
        # the closed form puts the ud rate at its individual bound by
        # construction, so agreement certifies an optimum with that property


def test_nonoverlap_naive_crosscheck():
    res = nonoverlap_cluster_rate(M1, "naive")
    h, h_inter = cluster_channel(M1)
    k = np.eye(3) + 10.0 * (h_inter @ h_inter.T)
    mac = GaussianMac(h, 10.0, k)
    assert abs(res.rate - mac_subset_rate(mac, {0, 1, 2}) / 3.0) < 1e-12
    with pytest.raises(ValueError):
        nonoverlap_cluster_rate(M1, "bogus")


def test_nonoverlap_hk_dominates_naive():
    rng = np.random.default_rng(14)
    for dim in (Dimension.LINE_1D, Dimension.HEX_2D):
        for _ in range(4):
            m = CellArrayModel(dim, float(rng.uniform(0, 1)),
                               float(rng.uniform(0.5, 30)))
            hk = nonoverlap_cluster_rate(m, "hk").rate
            naive = nonoverlap_cluster_rate(m, "naive").rate
            assert hk >= naive - 1e-9


def test_overlap_simplified_lambda_zero_endpoint():
    # At lambda = 0 only the center's ud part is decoded: the LP value must
    # equal the 3-antenna matched-filter capacity with everything else noise.
    sm = build_overlap_simplified(M1, 0.0)
    mac = _scheme_mac(sm, 10.0)
    from wyner_rates.polymatroid import max_grouped_rate
    lp = max_grouped_rate(mac, sm.grouping, refine=False).objective
    h = sm.h_d[:, 2]
    snr = 10.0 * float(h @ np.linalg.solve(mac.noise_cov, h))
    assert abs(lp - awgn_capacity(snr)) < 1e-10


def test_overlap_simplified_beats_single_cell():
    r_overlap = overlap_simplified_rate(M1).rate
    r_hk = hk_single_cell_rate(M1).rate
    assert r_overlap >= r_hk - 1e-9


def test_overlap_full_recorded_comparison():
    res = overlap_full_rate(0.5, 10.0)
    assert 0.0 <= res.rate <= wyner_bound(M1) + 1e-6
    assert len(res.optimal_split.weights) == 3
    with pytest.raises(ValueError):
        evaluate_scheme("overlap-full", M2)


def test_overlap_scheduled_dominates_scheduled():
    assert (overlap_scheduled_rate(M1).rate
            >= scheduled_digital_rate(M1) - 1e-9)


def test_overlap_scheduled_phase2():
    assert overlap_scheduled_phase2_rate(0.7, 10.0, 1.0) == 0.0
    # printed SNR expression at a hand value
    lam, a, p = 0.4, 0.5, 10.0
    expected = awgn_capacity(
        (1 - lam) * p * (1.0 + 2 * a * a / (1.0 + (1 - lam) * a * a * p)))
    assert abs(overlap_scheduled_phase2_rate(a, p, lam) - expected) < 1e-15


def test_multilayer_identities():
    for m in (M1, M2):
        assert multilayer_scheduled_rate(m, 1).rate == scheduled_digital_rate(m)
        assert (multilayer_scheduled_rate(m, 4).rate
                >= multilayer_scheduled_rate(m, 1).rate - 1e-9)
    with pytest.raises(ValueError):
        multilayer_scheduled_rate(M1, 0)
    with pytest.raises(SizeError):
        multilayer_scheduled_rate(M1, 17)


def test_multilayer_two_layer_lattice_oracle():
    # Exhaustive 10^-3-step scan over both 2-layer allocations.
    a, p = 0.5, 10.0
    le1 = np.linspace(0.0, 1.0, 1001)[:, None]
    lo1 = np.linspace(0.0, 1.0, 1001)[None, :]
    le2, lo2 = 1.0 - le1, 1.0 - lo1
    c = lambda x: 0.5 * np.log2(1.0 + x)
    a2 = a * a
    val = 0.5 * (c(le1 * p / (1 + p * le2 + 2 * a2 * p * (lo1 + lo2)))
                 + c(le2 * p / (1 + 2 * a2 * p * lo2))
                 + c(lo1 * p / (1 + p * lo2 + 2 * a2 * p * le2))
                 + c(lo2 * p))
    oracle = float(val.max())
    got = multilayer_scheduled_rate(M1, 2).rate
    assert abs(got - oracle) < 1e-4
    assert got >= oracle - 1e-9


def test_multilayer_alpha_zero_any_allocation():
    # With no interference the layered sums telescope to C(P).
    from wyner_rates.schemes import _layer_phase_rates
    rates = _layer_phase_rates(0.0, 10.0, ((0.3, 0.5, 0.2), (0.1, 0.1, 0.8)))
    for r in rates:
        assert abs(r - awgn_capacity(10.0)) < 1e-12


def test_evaluate_scheme_dispatch():
    assert evaluate_scheme("naive", M1).rate == naive_rate(M1)
    with pytest.raises(ValueError):
        evaluate_scheme("nope", M1)
