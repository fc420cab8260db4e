import math

import pytest
from hypothesis import given, strategies as st

from uavnoma.config import (Position3D, SystemConfig, dbm_to_watts, distance, replicate_cmus,
                            validate, watts_to_dbm)
from uavnoma.scenario import ScenarioError, dump_scenario, parse_scenario


def test_dbm_to_watts_examples():
    assert dbm_to_watts(30.0) == 1.0
    assert dbm_to_watts(0.0) == pytest.approx(1e-3, rel=1e-15)
    assert dbm_to_watts(5.0) == pytest.approx(0.003162, abs=1e-6)


@given(st.floats(min_value=1e-12, max_value=1e3))
def test_dbm_roundtrip(x):
    assert dbm_to_watts(watts_to_dbm(x)) == pytest.approx(x, rel=1e-12)


def test_distance_examples():
    assert distance((0, 0, 0), (0, 0, 0)) == 0
    assert distance((0, 0, 0), (3, 4, 0)) == 5
    assert distance((15, 25, 30), (65, 74, 0)) == pytest.approx(76.16, abs=5e-3)


coords = st.floats(min_value=-1e4, max_value=1e4)
points = st.tuples(coords, coords, coords)


@given(points, points, points)
def test_distance_triangle_inequality(a, b, c):
    assert distance(a, c) <= distance(a, b) + distance(b, c) + 1e-9
    assert distance(a, b) == distance(b, a)


def test_table1_is_valid(table1):
    rep = validate(table1)
    assert rep.ok, str(rep)
    assert table1.L == 5 and table1.M == 2
    assert table1.alpha == (0.8, 0.2)


def test_validate_reports_alpha_sum():
    rep = validate(SystemConfig(alpha=(0.5, 0.6)))
    assert any("alpha sum" in v for v in rep.violations)


def test_validate_reports_rho():
    rep = validate(SystemConfig(rho=1.0))
    assert any("rho must be < 1" in v for v in rep.violations)


def test_validate_collects_everything_without_mutation(table1):
    bad = table1.replace(alpha=(0.2, 0.8), m_l=-1.0, eta=2.0, target_rates=(0.5,))
    rep = validate(bad)
    assert len(rep.violations) >= 4
    assert bad.alpha == (0.2, 0.8)


@given(st.permutations(range(3)))
def test_device_permutation_keeps_validity(perm):
    devices = (Position3D(65, 74, 0), Position3D(55, 70, 0), Position3D(60, 60, 0))
    rates = (0.3, 0.4, 0.5)
    cfg = SystemConfig(device_pos=devices, alpha=(0.7, 0.2, 0.1), target_rates=rates)
    assert validate(cfg).ok
    permuted = cfg.replace(device_pos=tuple(devices[i] for i in perm),
                           target_rates=tuple(rates[i] for i in perm))
    assert validate(permuted).ok


def test_replicate_cmus():
    ps = replicate_cmus((15, 25, 30), 3)
    assert ps == (Position3D(15, 25, 30), Position3D(25, 25, 30), Position3D(35, 25, 30))
    cfg = SystemConfig(cmu_pos=ps)
    assert cfg.devices_of(2)[0] == Position3D(85, 74, 0)


def test_scenario_roundtrip(table1):
    back = parse_scenario(dump_scenario(table1))
    for name in ("chu_pos", "cmu_pos", "device_pos", "alpha", "target_rates", "theorem1_variant",
                 "harvest_channel", "relay_power", "k_l", "m_e", "slot_factor"):
        assert getattr(back, name) == getattr(table1, name)
    for name in ("p_t", "p_th", "sigma2_l", "sigma2_n"):
        assert math.isclose(getattr(back, name), getattr(table1, name), rel_tol=1e-12)


def test_scenario_parsing():
    cfg = parse_scenario("""
        # comment
        cmu_pos = 15, 25, 30
        L = 3
        cmu_offset = 0, 5, 0
        p_t_dbm = 30
        k = 0.05
        m = 2
        target_rates = 0.25
        mode = paper-literal
        relay_power_dbm = 10
    """)
    assert cfg.L == 3 and cfg.cmu_pos[2] == Position3D(15, 35, 30)
    assert cfg.p_t == 1.0
    assert cfg.k_l == cfg.k_n == 0.05
    assert cfg.m_l == cfg.m_n == cfg.m_e == 2.0
    assert cfg.target_rates == (0.25, 0.25)
    assert cfg.theorem1_variant == "paper-literal"
    assert cfg.relay_power == pytest.approx(0.01)


@pytest.mark.parametrize("text", ["bogus = 1", "p_t_dbm 20", "chu_pos = 1, 2", "slot_factor = maybe"])
def test_scenario_errors(text):
    with pytest.raises(ScenarioError):
        parse_scenario(text)
