import math

import numpy as np
import pytest
from scipy import stats as sps

from uavnoma.channel import (ChannelStats, cluster_channels, los_probability, make_stats,
                             pathloss_a2a, pathloss_a2g, power_gain_cdf, sample_power_gain)
from uavnoma.config import SystemConfig, distance

# slant range CMU (15,25,30) -> q1 (65,74,0) and its reference values, evaluated
# from the closed forms in 30-digit arithmetic
D_CMU_Q1 = 76.16429609731846
LOS_CMU_Q1 = 0.33467950690485086
A2G_CMU_Q1 = 8.06315472373523e-05


def test_pathloss_a2a_examples():
    assert pathloss_a2a(1.0, 1.0, 2.0) == 1.0
    assert pathloss_a2a(10.0, 1.0, 2.0) == pytest.approx(0.01)
    d = distance((40, 20, 50), (15, 25, 30))
    assert d == pytest.approx(32.40, abs=5e-3)
    assert pathloss_a2a(d, 1.0, 2.0) == pytest.approx(9.5238e-4, rel=1e-4)


def test_pathloss_a2a_domain():
    with pytest.raises(ValueError):
        pathloss_a2a(0.0, 1.0, 2.0)


def test_los_probability_examples():
    assert los_probability(5.0, 5.0, 9.6, 0.28) == pytest.approx(0.999999998395152, abs=1e-12)
    # elevation equal to xi1 degrees makes the exponent vanish
    h = 10.0 * math.sin(math.radians(9.6))
    assert los_probability(h, 10.0, 9.6, 0.28) == pytest.approx(1 / 10.6, rel=1e-12)
    assert los_probability(20.0, D_CMU_Q1, 9.6, 0.28) == pytest.approx(LOS_CMU_Q1, rel=1e-12)


@pytest.mark.parametrize("h,d", [(30.0, 20.0), (1.0, 0.0), (0.0, 5.0)])
def test_los_probability_domain(h, d):
    with pytest.raises(ValueError):
        los_probability(h, d, 9.6, 0.28)


def test_los_probability_increasing_in_elevation():
    angles = np.linspace(0.5, 89.5, 400)
    p = [los_probability(math.sin(math.radians(a)), 1.0, 9.6, 0.28) for a in angles]
    assert np.all(np.diff(p) > 0)


def test_pathloss_a2g_examples():
    d = 7.0
    assert pathloss_a2g(d, d, 1.0, 0.2, 2.0, 9.6, 0.28) == pytest.approx(d ** -2, rel=1e-8)
    for h in (1.0, 3.0, 6.5):
        assert pathloss_a2g(d, h, 0.4, 0.4, 2.0, 9.6, 0.28) == pytest.approx(0.4 * d ** -2, rel=1e-14)
    assert pathloss_a2g(D_CMU_Q1, 20.0, 1.0, 0.2, 2.0, 9.6, 0.28) == pytest.approx(A2G_CMU_Q1, rel=1e-12)


def test_pathloss_a2g_mixture_bounds():
    rng = np.random.default_rng(3)
    for _ in range(500):
        d = rng.uniform(1, 500)
        h = rng.uniform(1e-3, 1) * d
        z2, z1 = sorted(rng.uniform(0, 1, 2))
        v = pathloss_a2g(d, h, z1, z2, 2.3, 9.6, 0.28)
        assert z2 * d ** -2.3 * (1 - 1e-12) <= v <= z1 * d ** -2.3 * (1 + 1e-12)


def test_make_stats(table1):
    a2a = make_stats("a2a", distance(table1.chu_pos, table1.cmu_pos[0]), 1.5, table1)
    assert a2a.m == 1.5 and a2a.omega == pytest.approx(1 / 1050, rel=1e-12)
    a2g = make_stats("a2g", D_CMU_Q1, 1.5, table1)
    assert a2g.omega == pytest.approx(A2G_CMU_Q1, rel=1e-12)
    assert make_stats("a2a", 1.0, 2.0, table1) == ChannelStats(2.0, 1.0)
    with pytest.raises(ValueError):
        make_stats("a2x", 1.0, 2.0, table1)


def test_cluster_channels(table1):
    ch = cluster_channels(table1, 0)
    assert ch.harvest is ch.hop1
    assert ch.devices[0].omega == pytest.approx(A2G_CMU_Q1, rel=1e-12)
    ge = cluster_channels(table1.replace(harvest_channel="distinct-ge", m_e=2.0), 0)
    assert ge.harvest.m == 2.0
    assert ge.harvest.omega != ge.hop1.omega
    # clusters are rigid translates: device links identical, hop-1 differs
    ch3 = cluster_channels(table1, 3)
    assert ch3.devices[1].omega == pytest.approx(ch.devices[1].omega, rel=1e-12)
    assert ch3.hop1.omega != ch.hop1.omega


def test_omega_in_unit_interval(table1):
    for l in range(table1.L):
        ch = cluster_channels(table1, l)
        for s in (ch.hop1, *ch.devices):
            assert 0 < s.omega <= 1


def test_power_gain_cdf_examples():
    s = ChannelStats(1.0, 2.5)
    assert power_gain_cdf(s, 0.0) == 0.0
    assert power_gain_cdf(s, 2.5) == pytest.approx(1 - math.exp(-1), abs=1e-14)
    with pytest.raises(ValueError):
        power_gain_cdf(s, -1.0)


def test_sample_rayleigh_special_case():
    s = ChannelStats(1.0, 3e-4)
    g = sample_power_gain(s, np.random.default_rng(0), 100_000)
    assert np.mean(g <= s.omega) == pytest.approx(1 - math.exp(-1), abs=0.01)


@pytest.mark.parametrize("m", [1.0, 1.5, 2.0])
def test_sample_moments(m):
    s = ChannelStats(m, 7e-4)
    g = s.sample(np.random.default_rng(int(m * 10)), 1_000_000)
    assert g.min() >= 0
    assert g.mean() == pytest.approx(s.omega, rel=0.01)
    assert g.var() == pytest.approx(s.omega ** 2 / m, rel=0.03)


@pytest.mark.parametrize("m", [1.0, 1.5, 2.0])
@pytest.mark.parametrize("omega", [1e-5, 1e-3, 1.0])
def test_cdf_describes_samples_ks(m, omega):
    s = ChannelStats(m, omega)
    g = s.sample(np.random.default_rng(17), 100_000)
    res = sps.kstest(g, s.cdf)
    assert res.statistic < 0.006
    assert res.pvalue > 0.01
