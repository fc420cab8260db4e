"""Monte Carlo outage oracle.

Every realization draws, per CMU cluster, the CHU->CMU gain, a harvesting
gain and one gain per device, then decodes all messages by SIC with SINRs
computed from those gains. Failure indicators are counted at the device,
CMU and network level.

Trials are split into fixed-size batches. Batch ``b`` draws from
``SeedSequence(seed).spawn(n_batches)[b]``, so results depend only on
``(cfg, trials, seed, batch_size)`` and never on the worker count.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._kernels import evaluate_cluster
from .channel import ClusterChannels, cluster_channels
from .config import SystemConfig
from .link import slot_gain

DEFAULT_BATCH = 1 << 17


@dataclass(frozen=True)
class McEstimate:
    p_hat: float
    trials: int
    std_err: float
    seed: int

    @classmethod
    def from_count(cls, count: int, trials: int, seed: int) -> "McEstimate":
        p = count / trials
        return cls(p, trials, math.sqrt(p * (1.0 - p) / trials), seed)


@dataclass
class McCounts:
    """Raw failure counts; per-device arrays are indexed ``[l, n]``."""

    trials: int
    seed: int
    hop1: np.ndarray
    hop2: np.ndarray
    e2e: np.ndarray
    a_fail: np.ndarray      # unsaturated branch and hop-2 failure
    sat: np.ndarray         # saturated branch, per cluster
    b_fail: np.ndarray      # saturated branch and hop-2 failure
    cmu: np.ndarray
    network: int

    @classmethod
    def zeros(cls, L: int, M: int, trials: int = 0, seed: int = 0) -> "McCounts":
        per_dev = lambda: np.zeros((L, M), dtype=np.int64)
        return cls(trials, seed, per_dev(), per_dev(), per_dev(), per_dev(),
                   np.zeros(L, dtype=np.int64), per_dev(), np.zeros(L, dtype=np.int64), 0)

    def estimate(self, level) -> McEstimate:
        """Estimate at ``level``.

        ``"network"``, ``("cmu", l)``, or ``(kind, l, n)`` with ``kind`` one of
        ``device`` (end-to-end), ``hop1``, ``hop2``, ``a_fail``, ``b_fail``.
        ``("sat", l)`` gives the saturated-branch probability.
        """
        if level == "network":
            c = self.network
        elif level[0] == "cmu":
            c = self.cmu[level[1]]
        elif level[0] == "sat":
            c = self.sat[level[1]]
        else:
            kind, l, n = level
            table = {"device": self.e2e, "e2e": self.e2e, "hop1": self.hop1, "hop2": self.hop2,
                     "a_fail": self.a_fail, "b_fail": self.b_fail}[kind]
            c = table[l, n]
        return McEstimate.from_count(int(c), self.trials, self.seed)

    def __add__(self, other: "McCounts") -> "McCounts":
        return McCounts(self.trials + other.trials, self.seed,
                        self.hop1 + other.hop1, self.hop2 + other.hop2, self.e2e + other.e2e,
                        self.a_fail + other.a_fail, self.sat + other.sat,
                        self.b_fail + other.b_fail, self.cmu + other.cmu,
                        self.network + other.network)


def _kernel_args(cfg: SystemConfig):
    alpha = np.asarray(cfg.alpha, dtype=np.float64)
    phi = np.array([2.0 ** (2.0 * r) - 1.0 for r in cfg.target_rates])
    fixed = cfg.relay_power if cfg.relay_power is not None else -1.0
    eh_gain = slot_gain(cfg) * cfg.eta * cfg.rho
    return (alpha, phi, cfg.p_t, cfg.iota, cfg.k_l, cfg.sigma2_l, cfg.k_n, cfg.sigma2_n,
            eh_gain, cfg.p_th, fixed)


def draw_cluster_gains(ch: ClusterChannels, rng: np.random.Generator, size: int):
    """Draw (g_l, g_h, g_n) for one cluster; g_h is always an independent draw."""
    g_l = rng.gamma(ch.hop1.m, ch.hop1.scale, size)
    g_h = rng.gamma(ch.harvest.m, ch.harvest.scale, size)
    g_n = np.empty((len(ch.devices), size))
    for n, dev in enumerate(ch.devices):
        g_n[n] = rng.gamma(dev.m, dev.scale, size)
    return g_l, g_h, g_n


def _run_batch(cfg: SystemConfig, channels, args, seed_seq, size: int, kernel) -> McCounts:
    rng = np.random.default_rng(seed_seq)
    L, M = cfg.L, len(cfg.alpha)
    out = McCounts.zeros(L, M, size)
    net = np.zeros(size, dtype=np.bool_)
    for l, ch in enumerate(channels):
        g_l, g_h, g_n = draw_cluster_gains(ch, rng, size)
        hop1, sat, hop2 = kernel(g_l, g_h, g_n, *args)
        e2e = hop2 | hop1[None, :]
        out.hop1[l] = hop1.sum()
        out.hop2[l] = hop2.sum(axis=1)
        out.e2e[l] = e2e.sum(axis=1)
        out.a_fail[l] = (hop2 & ~sat[None, :]).sum(axis=1)
        out.b_fail[l] = (hop2 & sat[None, :]).sum(axis=1)
        out.sat[l] = sat.sum()
        cmu_fail = e2e.any(axis=0)
        out.cmu[l] = cmu_fail.sum()
        net |= cmu_fail
    out.network = int(net.sum())
    return out


def simulate(cfg: SystemConfig, trials: int = 1_000_000, seed: int = 0, workers: int = 1,
             batch_size: int = DEFAULT_BATCH, kernel=None) -> McCounts:
    """Count failures at every level over ``trials`` independent realizations."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    kernel = kernel or evaluate_cluster
    channels = [cluster_channels(cfg, l) for l in range(cfg.L)]
    args = _kernel_args(cfg)
    n_batches = -(-trials // batch_size)
    children = np.random.SeedSequence(seed).spawn(n_batches)
    sizes = [batch_size] * (n_batches - 1) + [trials - batch_size * (n_batches - 1)]
    jobs = list(zip(children, sizes))

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda job: _run_batch(cfg, channels, args, job[0], job[1], kernel), jobs))
    else:
        parts = [_run_batch(cfg, channels, args, s, n, kernel) for s, n in jobs]

    total = parts[0]
    for p in parts[1:]:
        total = total + p
    total.seed = seed
    return total


def simulate_seeds(cfg: SystemConfig, trials: int, seeds=(1, 2, 3), **kw) -> McCounts:
    """Pool the counts of several independently seeded runs."""
    total = None
    for s in seeds:
        c = simulate(cfg, trials, s, **kw)
        total = c if total is None else total + c
    total.seed = seeds[0]
    return total


def estimate(cfg: SystemConfig, level, trials: int = 1_000_000, seed: int = 0, **kw) -> McEstimate:
    return simulate(cfg, trials, seed, **kw).estimate(level)


def branch_conditional_estimates(cfg: SystemConfig, trials: int = 1_000_000, seed: int = 0,
                                 n: int = 0, l: int = 0, **kw):
    """Empirical ``(P[A and fail], P[B], P[B and fail])`` of device ``n``'s second hop."""
    c = simulate(cfg, trials, seed, **kw)
    return c.estimate(("a_fail", l, n)), c.estimate(("sat", l)), c.estimate(("b_fail", l, n))


@dataclass
class Realization:
    """Outcome of one realization; arrays are ``[l, n]`` (branch is per cluster)."""

    hop1_fail: np.ndarray
    branch: list
    hop2_fail: np.ndarray
    e2e_fail: np.ndarray


def simulate_realization(cfg: SystemConfig, rng: np.random.Generator) -> Realization:
    args = _kernel_args(cfg)
    L, M = cfg.L, len(cfg.alpha)
    h1 = np.zeros((L, M), dtype=bool)
    h2 = np.zeros((L, M), dtype=bool)
    branch = []
    for l in range(L):
        g_l, g_h, g_n = draw_cluster_gains(cluster_channels(cfg, l), rng, 1)
        hop1, sat, hop2 = evaluate_cluster(g_l, g_h, g_n, *args)
        h1[l] = hop1[0]
        h2[l] = hop2[:, 0]
        branch.append("B" if sat[0] else "A")
    return Realization(h1, branch, h2, h1 | h2)
