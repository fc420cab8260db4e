"""Analytical outage probabilities: per hop, end-to-end, per CMU and network.

Two evaluation variants are supported through ``cfg.theorem1_variant``:

``corrected``
    Exact under the system model that the Monte Carlo oracle simulates. The
    unsaturated-branch integral runs over the harvesting gain (the variable
    whose value selects the branch), SIC requirements on a device combine as
    the maximum threshold of its decode set, and CMU outage accounts for the
    harvesting gain shared by all devices in a cluster.

``paper-literal``
    The product-form closed expressions: the integration variable carries the
    device-link density, per-message factors are multiplied, the threshold
    denominator uses ``+ k^2 phi`` and the CMU outage is the product over
    devices.

Devices and CMUs are indexed from 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelStats, ClusterChannels, cluster_channels
from .config import SystemConfig
from .link import OutageThresholds, sic_decode_set, thresholds
from .specfun import QuadratureError, QuadratureSpec, integrate, reg_lower_gamma

DEFAULT_QUAD = QuadratureSpec()
_PROB_SLACK = 1e-12


def _prob(p: float) -> float:
    if not (-_PROB_SLACK <= p <= 1.0 + _PROB_SLACK):
        raise ArithmeticError(f"probability {p!r} outside [0, 1] before clamping")
    return min(max(p, 0.0), 1.0)


def _bounded(value: float, bound: float, err: float) -> float:
    """Clamp a quadrature value to its analytic upper bound, within the error estimate."""
    if value > bound + err + _PROB_SLACK:
        raise ArithmeticError(f"integral {value!r} exceeds its bound {bound!r} by more than {err!r}")
    return _prob(min(value, bound))


def _upper_tail_cut(stats: ChannelStats) -> float:
    # beyond this the Gamma upper tail is below ~1e-17 for every shape we use
    m = stats.m
    return stats.scale * (m + 45.0 + 12.0 * math.sqrt(m))


@dataclass
class BranchTerms:
    """Branch decomposition of one second-hop outage factor: unsaturated term, saturated term, saturation CDF."""

    aleph1: float
    aleph2: float
    aleph3: float
    quad_error: float = 0.0
    converged: bool = True

    @property
    def outage(self) -> float:
        return _prob(self.aleph1 + self.aleph2 * (1.0 - self.aleph3))


def _mixture_integral(density: ChannelStats, inner, upper: float, quad: QuadratureSpec,
                      hints=()):
    """``integral_0^upper inner(x) f(x) dx`` for ``f`` the Gamma density of ``density``.

    Integration runs in units of the density scale. Returns
    ``(value, error_bound, converged)``.
    """
    theta = density.scale
    u_max = min(upper, _upper_tail_cut(density)) / theta
    if u_max <= 0:
        return 0.0, 0.0, True
    m = density.m
    lg = math.lgamma(m)

    def integrand(u):
        with np.errstate(divide="ignore", over="ignore"):
            w = np.exp((m - 1.0) * np.log(u) - u - lg)
        return w * inner(theta * u)

    pts = [p / theta for p in hints if p > 0] + [m, 0.1 * m, 1e-3 * u_max]
    pts = [p for p in pts if 0 < p < u_max]
    try:
        res = integrate(integrand, 0.0, u_max, quad, points=pts)
        return res.value, res.error, True
    except QuadratureError as exc:
        return exc.value, exc.error, False


def _cdf_of_ratio(stats: ChannelStats, gamma_hat: float):
    """``x -> F(gamma_hat / x)`` for the power gain described by ``stats``."""
    rate = stats.m / stats.omega

    def inner(x):
        with np.errstate(divide="ignore"):
            arg = gamma_hat * rate / x
        return reg_lower_gamma(stats.m, arg)

    return inner


def _aleph_corrected(ch: ClusterChannels, dev: ChannelStats, mho_a: float, mho_b: float,
                     chi: float, quad: QuadratureSpec) -> BranchTerms:
    aleph3 = float(reg_lower_gamma(ch.harvest.m, ch.harvest.m * chi / ch.harvest.omega))
    aleph2 = 1.0 if math.isinf(mho_b) else float(reg_lower_gamma(dev.m, dev.m * mho_b / dev.omega))
    if mho_a == 0:
        aleph1, err, ok = 0.0, 0.0, True
    elif math.isinf(mho_a):
        aleph1, err, ok = aleph3, 0.0, True
    else:
        aleph1, err, ok = _mixture_integral(ch.harvest, _cdf_of_ratio(dev, mho_a), chi, quad,
                                            hints=(mho_a / dev.omega,))
        aleph1 = _bounded(aleph1, aleph3, err)
    return BranchTerms(_prob(aleph1), aleph2, aleph3, err, ok)


def _aleph_literal(ch: ClusterChannels, dev: ChannelStats, mho_a: float, mho_b: float,
                   chi: float, quad: QuadratureSpec) -> BranchTerms:
    # literal roles: density in x from the device link, CDF from the CHU->CMU link
    aleph3 = float(reg_lower_gamma(ch.hop1.m, ch.hop1.m * chi / ch.hop1.omega))
    aleph2 = 1.0 if math.isinf(mho_b) else float(reg_lower_gamma(dev.m, dev.m * mho_b / dev.omega))
    if mho_a == 0:
        aleph1, err, ok = 0.0, 0.0, True
    elif math.isinf(mho_a):
        aleph1 = float(reg_lower_gamma(dev.m, dev.m * chi / dev.omega))
        err, ok = 0.0, True
    else:
        aleph1, err, ok = _mixture_integral(dev, _cdf_of_ratio(ch.hop1, mho_a), chi, quad,
                                            hints=(mho_a / ch.hop1.omega,))
        aleph1 = _bounded(aleph1, float(reg_lower_gamma(dev.m, dev.m * chi / dev.omega)), err)
    return BranchTerms(_prob(aleph1), aleph2, aleph3, err, ok)


def aleph_terms(n: int, cfg: SystemConfig, quad: QuadratureSpec = DEFAULT_QUAD, l: int = 0,
                variant: str | None = None, th: OutageThresholds | None = None,
                ch: ClusterChannels | None = None) -> list:
    """Branch terms for device ``n``: one entry per factor of its second-hop outage.

    Corrected variant: a single entry built from the largest thresholds in
    the device's decode set. Paper-literal: one entry per decoded message.
    """
    variant = variant or cfg.theorem1_variant
    th = th if th is not None else thresholds(cfg)
    ch = ch if ch is not None else cluster_channels(cfg, l)
    dev = ch.devices[n]
    dset = sic_decode_set(n, "device", len(cfg.alpha))
    if variant == "corrected":
        a = max(th.mho_a[j] for j in dset)
        b = max(th.mho_b[j] for j in dset)
        return [_aleph_corrected(ch, dev, a, b, th.chi, quad)]
    return [_aleph_literal(ch, dev, th.mho_a[j], th.mho_b[j], th.chi, quad) for j in dset]


def aleph1(n: int, cfg: SystemConfig, quad: QuadratureSpec = DEFAULT_QUAD, l: int = 0) -> float:
    """Unsaturated-branch outage term of device ``n`` (own message thresholds)."""
    th = thresholds(cfg)
    ch = cluster_channels(cfg, l)
    if cfg.theorem1_variant == "corrected":
        t = _aleph_corrected(ch, ch.devices[n], th.mho_a[n], th.mho_b[n], th.chi, quad)
    else:
        t = _aleph_literal(ch, ch.devices[n], th.mho_a[n], th.mho_b[n], th.chi, quad)
    return t.aleph1


def hop1_outage(n: int, cfg: SystemConfig, l: int = 0, th: OutageThresholds | None = None,
                ch: ClusterChannels | None = None) -> float:
    """Probability the CMU fails to decode every superimposed message."""
    th = th if th is not None else thresholds(cfg)
    ch = ch if ch is not None else cluster_channels(cfg, l)
    dset = sic_decode_set(n, "relay", len(cfg.alpha))
    if not all(th.feasible_l[j] for j in dset):
        return 1.0
    g_hat = max(th.mho_l[j] for j in dset)
    if math.isinf(g_hat):
        return 1.0
    return _prob(float(reg_lower_gamma(ch.hop1.m, ch.hop1.m * g_hat / ch.hop1.omega)))


def _hop2_fixed(n: int, cfg: SystemConfig, th: OutageThresholds, ch: ClusterChannels,
                variant: str) -> float:
    dev = ch.devices[n]
    dset = sic_decode_set(n, "device", len(cfg.alpha))
    cdf = lambda t: 1.0 if math.isinf(t) else float(reg_lower_gamma(dev.m, dev.m * t / dev.omega))
    if variant == "corrected":
        return _prob(cdf(max(th.mho_fixed[j] for j in dset)))
    return _prob(1.0 - math.prod(1.0 - cdf(th.mho_fixed[j]) for j in dset))


def hop2_outage(n: int, cfg: SystemConfig, quad: QuadratureSpec = DEFAULT_QUAD, l: int = 0,
                th: OutageThresholds | None = None, ch: ClusterChannels | None = None) -> float:
    """Probability device ``n`` fails to decode its decode set from the relay."""
    th = th if th is not None else thresholds(cfg)
    ch = ch if ch is not None else cluster_channels(cfg, l)
    dset = sic_decode_set(n, "device", len(cfg.alpha))
    if not all(th.feasible_n[j] for j in dset):
        return 1.0
    if cfg.relay_power is not None:
        return _hop2_fixed(n, cfg, th, ch, cfg.theorem1_variant)
    terms = aleph_terms(n, cfg, quad, l, th=th, ch=ch)
    return _prob(1.0 - math.prod(1.0 - t.outage for t in terms))


def e2e_outage(n: int, cfg: SystemConfig, quad: QuadratureSpec = DEFAULT_QUAD, l: int = 0) -> float:
    th = thresholds(cfg)
    ch = cluster_channels(cfg, l)
    p1 = hop1_outage(n, cfg, l, th, ch)
    p2 = hop2_outage(n, cfg, quad, l, th, ch)
    return compose_hops(p1, p2)


def compose_hops(p1: float, p2: float) -> float:
    return _prob(1.0 - (1.0 - p1) * (1.0 - p2))


def _cluster_success_corrected(cfg: SystemConfig, th: OutageThresholds, ch: ClusterChannels,
                               quad: QuadratureSpec):
    """P(every device of the cluster decodes its set on hop 2), harvest gain shared."""
    M = len(cfg.alpha)
    sets = [sic_decode_set(n, "device", M) for n in range(M)]
    if not all(th.feasible_n[j] for s in sets for j in s):
        return 0.0, 0.0, True
    if cfg.relay_power is not None:
        ok = 1.0
        for n, s in enumerate(sets):
            ok *= 1.0 - _hop2_fixed(n, cfg, th, ch, "corrected")
        return ok, 0.0, True

    a_hat = [max(th.mho_a[j] for j in s) for s in sets]
    b_hat = [max(th.mho_b[j] for j in s) for s in sets]
    h = ch.harvest
    aleph3 = float(reg_lower_gamma(h.m, h.m * th.chi / h.omega))
    sat_ok = 1.0
    for dev, b in zip(ch.devices, b_hat):
        sat_ok *= 0.0 if math.isinf(b) else 1.0 - float(reg_lower_gamma(dev.m, dev.m * b / dev.omega))
    if any(math.isinf(a) for a in a_hat):
        return _prob((1.0 - aleph3) * sat_ok), 0.0, True

    inners = [_cdf_of_ratio(dev, a) for dev, a in zip(ch.devices, a_hat)]

    def any_fail(x):
        ok = np.ones_like(x)
        for f in inners:
            ok *= 1.0 - f(x)
        return 1.0 - ok

    # integrate the failure mass: small where it matters, exactly 0 when nothing fails
    hints = tuple(a / dev.omega for dev, a in zip(ch.devices, a_hat) if a > 0)
    unsat_fail, err, conv = _mixture_integral(h, any_fail, th.chi, quad, hints=hints)
    unsat_ok = aleph3 - _bounded(unsat_fail, aleph3, err)
    return _prob(unsat_ok + (1.0 - aleph3) * sat_ok), err, conv


def cmu_outage(l: int, cfg: SystemConfig, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Probability that at least one device served by CMU ``l`` is in outage."""
    return _cmu_detail(l, cfg, quad)[0]


def _cmu_detail(l, cfg, quad):
    th = thresholds(cfg)
    ch = cluster_channels(cfg, l)
    M = len(cfg.alpha)
    if cfg.theorem1_variant == "paper-literal":
        ok = 1.0
        for n in range(M):
            ok *= 1.0 - compose_hops(hop1_outage(n, cfg, l, th, ch), hop2_outage(n, cfg, quad, l, th, ch))
        return _prob(1.0 - ok), 0.0, True
    # the relay decode set is shared by all devices: one hop-1 event per cluster
    p1 = hop1_outage(0, cfg, l, th, ch)
    s2, err, conv = _cluster_success_corrected(cfg, th, ch, quad)
    return _prob(1.0 - (1.0 - p1) * s2), err, conv


def network_outage(cfg: SystemConfig, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Probability that at least one of the L CMU clusters is in outage."""
    ok = 1.0
    for l in range(cfg.L):
        ok *= 1.0 - cmu_outage(l, cfg, quad)
    return _prob(1.0 - ok)


def baseline_config(cfg: SystemConfig, relay_power: float | None = None) -> SystemConfig:
    """Same scenario with a non-harvesting relay at fixed power (default ``p_t``)."""
    return cfg.replace(relay_power=cfg.p_t if relay_power is None else relay_power)


def baseline_no_eh_outage(n: int, cfg: SystemConfig, quad: QuadratureSpec = DEFAULT_QUAD,
                          l: int = 0, relay_power: float | None = None) -> float:
    """End-to-end outage of device ``n`` when the relay transmits at a fixed power."""
    return e2e_outage(n, baseline_config(cfg, relay_power), quad, l)


@dataclass
class OutageReport:
    """Analytical outage at every level. Per-device arrays are indexed ``[l, n]``."""

    per_device_hop1: np.ndarray
    per_device_hop2: np.ndarray
    per_device_e2e: np.ndarray
    per_cmu: np.ndarray
    network: float
    diagnostics: dict = field(default_factory=dict)
    converged: bool = True


def outage_report(cfg: SystemConfig, quad: QuadratureSpec = DEFAULT_QUAD) -> OutageReport:
    """Evaluate every level of the hierarchy for ``cfg``.

    ``diagnostics[(l, n)]`` holds the corrected and paper-literal branch terms
    of each device side by side (empty lists under a fixed relay power).
    """
    L, M = cfg.L, len(cfg.alpha)
    h1 = np.empty((L, M))
    h2 = np.empty((L, M))
    e2e = np.empty((L, M))
    per_cmu = np.empty(L)
    diags = {}
    converged = True
    th = thresholds(cfg)
    th_lit = thresholds(cfg.replace(theorem1_variant="paper-literal"))
    for l in range(L):
        ch = cluster_channels(cfg, l)
        for n in range(M):
            h1[l, n] = hop1_outage(n, cfg, l, th, ch)
            h2[l, n] = hop2_outage(n, cfg, quad, l, th, ch)
            e2e[l, n] = compose_hops(h1[l, n], h2[l, n])
            if cfg.relay_power is None:
                corr = aleph_terms(n, cfg, quad, l, "corrected", th, ch)
                lit = aleph_terms(n, cfg, quad, l, "paper-literal", th_lit, ch)
                converged &= all(t.converged for t in corr + lit)
            else:
                corr, lit = [], []
            diags[(l, n)] = {"corrected": corr, "paper-literal": lit}
        p, _, conv = _cmu_detail(l, cfg, quad)
        per_cmu[l] = p
        converged &= conv
    network = _prob(1.0 - float(np.prod(1.0 - per_cmu)))
    return OutageReport(h1, h2, e2e, per_cmu, network, diags, converged)
