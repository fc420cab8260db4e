"""Path loss and Nakagami-m power-gain statistics for A2A and A2G links."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import SystemConfig, distance
from .specfun import gamma_pdf, reg_lower_gamma


def pathloss_a2a(d: float, zeta0: float, beta: float) -> float:
    """Pure-LoS air-to-air coefficient ``zeta0 * d**-beta``."""
    if not d > 0:
        raise ValueError(f"distance must be > 0, got {d}")
    return zeta0 * d ** (-beta)


def los_probability(h: float, d: float, xi1: float, xi2: float) -> float:
    """Sigmoid LoS probability; the elevation angle is taken in degrees."""
    if not d > 0:
        raise ValueError(f"distance must be > 0, got {d}")
    if not 0 < h <= d:
        raise ValueError(f"need 0 < h <= d, got h={h}, d={d}")
    theta = math.degrees(math.asin(h / d))
    return 1.0 / (1.0 + xi1 * math.exp(-xi2 * (theta - xi1)))


def pathloss_a2g(d: float, h: float, zeta1: float, zeta2: float, beta: float,
                 xi1: float, xi2: float) -> float:
    p_los = los_probability(h, d, xi1, xi2)
    return (zeta1 * p_los + zeta2 * (1.0 - p_los)) * d ** (-beta)


@dataclass(frozen=True)
class ChannelStats:
    """Nakagami-m power gain |g|^2 ~ Gamma(shape=m, scale=omega/m)."""

    m: float
    omega: float

    def __post_init__(self):
        if not (self.m > 0 and self.omega > 0):
            raise ValueError(f"invalid channel stats m={self.m}, omega={self.omega}")

    @property
    def scale(self) -> float:
        return self.omega / self.m

    def cdf(self, x):
        return power_gain_cdf(self, x)

    def pdf(self, x):
        return gamma_pdf(self.m, self.scale, x)

    def sample(self, rng: np.random.Generator, size=None):
        return sample_power_gain(self, rng, size)


def make_stats(link: str, d: float, m: float, cfg: SystemConfig) -> ChannelStats:
    """Channel statistics of a link of slant range ``d``.

    A2G links use the scenario altitude ``cfg.altitude`` as the elevation
    height in the LoS model.
    """
    if link == "a2a":
        omega = pathloss_a2a(d, cfg.zeta0, cfg.beta)
    elif link == "a2g":
        omega = pathloss_a2g(d, cfg.altitude, cfg.zeta1, cfg.zeta2, cfg.beta, cfg.xi1, cfg.xi2)
    else:
        raise ValueError(f"unknown link class {link!r}")
    return ChannelStats(m, omega)


def sample_power_gain(stats: ChannelStats, rng: np.random.Generator, size=None):
    return rng.gamma(stats.m, stats.scale, size)


def power_gain_cdf(stats: ChannelStats, x):
    if np.any(np.asarray(x) < 0):
        raise ValueError("power_gain_cdf domain error: x must be >= 0")
    return reg_lower_gamma(stats.m, np.multiply(x, stats.m / stats.omega))


@dataclass(frozen=True)
class ClusterChannels:
    """Every link statistic that one CMU cluster needs."""

    hop1: ChannelStats          # CHU -> CMU
    harvest: ChannelStats       # gain that drives the EH branch
    devices: tuple              # CMU -> device n


def cluster_channels(cfg: SystemConfig, l: int = 0) -> ClusterChannels:
    cmu = cfg.cmu_pos[l]
    hop1 = make_stats("a2a", distance(cfg.chu_pos, cmu), cfg.m_l, cfg)
    devices = tuple(make_stats("a2g", distance(cmu, dev), cfg.m_n, cfg) for dev in cfg.devices_of(l))
    if cfg.harvest_channel == "distinct-ge":
        harvest = make_stats("a2g", distance(cfg.pb_pos, cmu), cfg.m_e, cfg)
    else:
        harvest = hop1
    return ClusterChannels(hop1, harvest, devices)
