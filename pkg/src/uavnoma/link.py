"""Per-realization physics: non-linear EH, SIC SINRs and outage thresholds."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import SystemConfig


def slot_gain(cfg: SystemConfig) -> float:
    """Energy-to-power factor applied to harvested power inside the SINR.

    1 uses the harvested power as is (default); ``2 / (1 - rho)`` when
    ``cfg.slot_factor`` converts harvested energy over the relay half-slot.
    """
    return 2.0 / (1.0 - cfg.rho) if cfg.slot_factor else 1.0


def harvested_power(g_e2, cfg: SystemConfig):
    """Relay transmit power from the piecewise-linear (saturating) harvester."""
    received = np.minimum(np.multiply(cfg.p_t, g_e2), cfg.p_th)
    out = 2.0 * cfg.eta * cfg.rho * received / (1.0 - cfg.rho)
    return out if np.ndim(out) else float(out)


def relay_power(g_h2, cfg: SystemConfig):
    """Power the relay actually transmits with in the second hop."""
    if cfg.relay_power is not None:
        return np.full_like(np.asarray(g_h2, dtype=float), cfg.relay_power) if np.ndim(g_h2) else cfg.relay_power
    received = np.minimum(np.multiply(cfg.p_t, g_h2), cfg.p_th)
    out = slot_gain(cfg) * cfg.eta * cfg.rho * received
    return out if np.ndim(out) else float(out)


def interference_share(alpha, n: int) -> float:
    """Sum of allocations of messages decoded after message ``n`` (0-based)."""
    return float(sum(alpha[n + 1:]))


def _sinr(signal_power, n, alpha, k, sigma2):
    s = np.asarray(signal_power, dtype=float)
    out = s * alpha[n] / (s * interference_share(alpha, n) + k * k * s + sigma2)
    return out if np.ndim(out) else float(out)


def sinr_first_hop(g_l2, n: int, cfg: SystemConfig):
    """SINR of message ``n`` (0-based) at the CMU."""
    return _sinr(cfg.iota * cfg.p_t * np.asarray(g_l2, dtype=float), n, cfg.alpha, cfg.k_l, cfg.sigma2_l)


def sinr_second_hop(g_n2, g_harvest2, n: int, cfg: SystemConfig):
    """SINR of message ``n`` at a ground device, relay powered per ``cfg``."""
    p = relay_power(g_harvest2, cfg)
    return _sinr(np.multiply(p, g_n2), n, cfg.alpha, cfg.k_n, cfg.sigma2_n)


def sic_decode_set(n: int, role: str, M: int) -> list:
    """Messages (0-based) a node must decode: all at the relay, 0..n at device n."""
    if not 0 <= n < M:
        raise IndexError(f"device index {n} outside 0..{M - 1}")
    if role == "relay":
        return list(range(M))
    if role == "device":
        return list(range(n + 1))
    raise ValueError(f"unknown role {role!r}")


@dataclass(frozen=True)
class OutageThresholds:
    """Gain thresholds below which each message fails, per hop.

    ``mho_l``: CHU->CMU gain; ``mho_a``: product of device gain and
    harvesting gain (unsaturated branch); ``mho_b``: device gain (saturated
    branch); ``mho_fixed``: device gain under a fixed relay power (``nan``
    without one). Infinite thresholds mean the hop always fails.
    """

    phi: np.ndarray
    mho_l: np.ndarray
    mho_a: np.ndarray
    mho_b: np.ndarray
    mho_fixed: np.ndarray
    chi: float
    feasible_l: np.ndarray
    feasible_n: np.ndarray

    @property
    def feasible(self) -> np.ndarray:
        return self.feasible_l & self.feasible_n


def _threshold(num, den, power):
    # num = sigma^2 * phi; zero target rate never fails, zero power always does
    if num == 0:
        return 0.0
    if power <= 0 or den <= 0:
        return np.inf
    return num / (den * power)


def thresholds(cfg: SystemConfig) -> OutageThresholds:
    """Outage thresholds for every message.

    Feasibility always uses ``alpha_n - phi_n (sum_{i>n} alpha_i + k^2) > 0``.
    The threshold denominator uses that same (derived) sign in corrected
    mode and ``+ k^2 phi_n`` in paper-literal mode.
    """
    M = len(cfg.alpha)
    literal = cfg.theorem1_variant == "paper-literal"
    phi = np.array([2.0 ** (2.0 * r) - 1.0 for r in cfg.target_rates])
    s = slot_gain(cfg)
    out = {k: np.empty(M) for k in ("l", "a", "b", "f")}
    feas_l = np.empty(M, dtype=bool)
    feas_n = np.empty(M, dtype=bool)
    for n in range(M):
        share = interference_share(cfg.alpha, n)
        base = cfg.alpha[n] - phi[n] * share
        den_l = base - phi[n] * cfg.k_l ** 2
        den_n = base - phi[n] * cfg.k_n ** 2
        feas_l[n] = den_l > 0 or phi[n] == 0
        feas_n[n] = den_n > 0 or phi[n] == 0
        if literal:
            den_l = base + phi[n] * cfg.k_l ** 2
            den_n = base + phi[n] * cfg.k_n ** 2
        out["l"][n] = _threshold(cfg.sigma2_l * phi[n], den_l, cfg.iota * cfg.p_t)
        out["a"][n] = _threshold(cfg.sigma2_n * phi[n], den_n, s * cfg.eta * cfg.rho * cfg.p_t)
        out["b"][n] = _threshold(cfg.sigma2_n * phi[n], den_n, s * cfg.eta * cfg.rho * cfg.p_th)
        if cfg.relay_power is None:
            out["f"][n] = np.nan
        else:
            out["f"][n] = _threshold(cfg.sigma2_n * phi[n], den_n, cfg.relay_power)
    return OutageThresholds(phi, out["l"], out["a"], out["b"], out["f"], cfg.chi, feas_l, feas_n)
