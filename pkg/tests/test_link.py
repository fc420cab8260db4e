import numpy as np
import pytest

from uavnoma.config import SystemConfig, dbm_to_watts
from uavnoma.link import (harvested_power, relay_power, sic_decode_set, sinr_first_hop,
                          sinr_second_hop, thresholds)


def test_harvested_power_examples(table1):
    assert harvested_power(0.0, table1) == 0.0
    knee = table1.p_th / table1.p_t
    expected = 2 * table1.eta * table1.rho * table1.p_th / (1 - table1.rho)
    assert harvested_power(knee, table1) == pytest.approx(expected, rel=1e-15)
    assert harvested_power(knee * (1 + 1e-12), table1) == pytest.approx(expected, rel=1e-15)
    assert harvested_power(10.0, table1) == pytest.approx(6.67591950479991e-4, rel=1e-12)


def test_harvested_power_monotone_bounded(table1):
    g = np.sort(np.random.default_rng(0).exponential(0.05, 10_000))
    p = harvested_power(g, table1)
    cap = 2 * table1.eta * table1.rho * table1.p_th / (1 - table1.rho)
    assert np.all(np.diff(p) >= 0)
    assert np.all(p <= cap * (1 + 1e-15))


def test_sinr_first_hop_examples(table1):
    assert sinr_first_hop(0.0, 0, table1) == 0.0
    cfg = table1.replace(k_l=0.0)
    # last SIC stage has no interference term: grows without bound as noise vanishes
    assert sinr_first_hop(1.0, 1, cfg.replace(sigma2_l=1e-30)) > 1e25
    g = 100 * table1.sigma2_l / table1.p_t
    assert sinr_first_hop(g, 0, table1) == pytest.approx(80 / 23.25, rel=1e-12)
    assert sinr_first_hop(g, 0, table1) == pytest.approx(3.441, abs=5e-4)


def test_sinr_second_hop_examples(table1):
    assert sinr_second_hop(0.0, 0.3, 0, table1) == 0.0
    knee = table1.chi
    a = sinr_second_hop(1e-4, knee, 0, table1)
    b = sinr_second_hop(1e-4, knee * (1 + 1e-13), 0, table1)
    assert a == pytest.approx(b, rel=1e-12)
    # saturated branch, last message: alpha2 S / (k^2 S + sigma^2), S = eta rho P_th g_n
    g_n = 2e-4
    S = table1.eta * table1.rho * table1.p_th * g_n
    expected = table1.alpha[1] * S / (table1.k_n ** 2 * S + table1.sigma2_n)
    assert sinr_second_hop(g_n, 10 * knee, 1, table1) == pytest.approx(expected, rel=1e-12)


def test_slot_factor_scales_relay_power(table1):
    plain = relay_power(1e-4, table1)
    scaled = relay_power(1e-4, table1.replace(slot_factor=True))
    assert scaled == pytest.approx(plain * 2 / (1 - table1.rho), rel=1e-14)
    assert relay_power(1e-4, table1.replace(relay_power=0.5)) == 0.5


def test_hwi_ceiling(table1):
    g = np.logspace(-12, 3, 400)
    for n in range(2):
        share = sum(table1.alpha[n + 1:])
        cap1 = table1.alpha[n] / (share + table1.k_l ** 2)
        cap2 = table1.alpha[n] / (share + table1.k_n ** 2)
        assert np.all(sinr_first_hop(g, n, table1) < cap1)
        assert np.all(sinr_second_hop(g, g, n, table1) < cap2)


def test_sinr_scale_consistency(table1):
    rng = np.random.default_rng(5)
    for _ in range(50):
        c = rng.uniform(1e-3, 1e3)
        g = rng.exponential(1e-3)
        cfg2 = table1.replace(p_t=table1.p_t * c, sigma2_l=table1.sigma2_l * c)
        assert sinr_first_hop(g, 0, cfg2) == pytest.approx(sinr_first_hop(g, 0, table1), rel=1e-12)
        cfg3 = table1.replace(p_th=table1.p_th * c, p_t=table1.p_t * c, sigma2_n=table1.sigma2_n * c)
        assert sinr_second_hop(g, 0.4, 1, cfg3) == pytest.approx(sinr_second_hop(g, 0.4, 1, table1), rel=1e-12)


def test_thresholds_examples(table1):
    th = thresholds(table1)
    assert th.phi == pytest.approx([1.0, 1.0])
    den1 = 0.8 - 0.2 - 0.0225
    assert den1 == pytest.approx(0.5775)
    assert th.mho_l[0] == pytest.approx(table1.sigma2_l / (den1 * table1.p_t), rel=1e-14)
    assert th.chi == pytest.approx(table1.p_th / table1.p_t)
    assert th.feasible.all()

    zero = thresholds(table1.replace(target_rates=(0.0, 0.0)))
    for arr in (zero.mho_l, zero.mho_a, zero.mho_b):
        assert np.all(arr == 0)

    bad = thresholds(table1.replace(k_l=0.5, k_n=0.5))
    assert not bad.feasible[1] and np.isinf(bad.mho_a[1])
    assert bad.feasible[0]


def test_paper_literal_threshold_sign(table1):
    lit = thresholds(table1.replace(theorem1_variant="paper-literal"))
    den = 0.8 - 0.2 + 0.0225
    assert lit.mho_l[0] == pytest.approx(table1.sigma2_l / (den * table1.p_t), rel=1e-14)


def test_sic_decode_sets():
    assert sic_decode_set(0, "relay", 2) == [0, 1]
    assert sic_decode_set(0, "device", 2) == [0]
    assert sic_decode_set(1, "device", 2) == [0, 1]
    with pytest.raises(IndexError):
        sic_decode_set(2, "device", 2)


@pytest.mark.parametrize("slot", [False, True])
def test_threshold_event_equivalence(table1, slot):
    cfg = table1.replace(slot_factor=slot, p_t=dbm_to_watts(10.0))
    th = thresholds(cfg)
    rng = np.random.default_rng(9)
    T = 100_000
    g_l = rng.gamma(1.5, 1e-3 / 1.5, T)
    g_h = rng.gamma(1.5, 1e-3 / 1.5, T)
    g_n = rng.gamma(1.5, 1e-4 / 1.5, T)
    unsat = cfg.p_t * g_h <= cfg.p_th
    for n in range(2):
        ok1 = sinr_first_hop(g_l, n, cfg) >= th.phi[n]
        assert np.array_equal(ok1, g_l >= th.mho_l[n])
        ok2 = sinr_second_hop(g_n, g_h, n, cfg) >= th.phi[n]
        by_threshold = np.where(unsat, g_n * g_h >= th.mho_a[n], g_n >= th.mho_b[n])
        # equality only fails on exact ties at floating-point resolution
        assert np.mean(ok2 != by_threshold) < 1e-4
