"""Scenario parameterization, unit conversion and geometry."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Optional, Sequence

THEOREM1_VARIANTS = ("corrected", "paper-literal")
HARVEST_CHANNELS = ("alias-gl", "distinct-ge")


class Position3D(NamedTuple):
    x: float
    y: float
    z: float

    def shifted(self, dx: float, dy: float, dz: float) -> "Position3D":
        return Position3D(self.x + dx, self.y + dy, self.z + dz)


def dbm_to_watts(p_dbm: float) -> float:
    return 10.0 ** ((p_dbm - 30.0) / 10.0)


def watts_to_dbm(p_w: float) -> float:
    if p_w <= 0:
        raise ValueError("power must be positive to express in dBm")
    return 10.0 * math.log10(p_w) + 30.0


def distance(a: Sequence[float], b: Sequence[float]) -> float:
    return math.sqrt((a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2 + (a[2] - b[2]) ** 2)


def replicate_cmus(base: Sequence[float], count: int,
                   offset: Sequence[float] = (10.0, 0.0, 0.0)) -> tuple[Position3D, ...]:
    """Place ``count`` CMUs at ``base + l * offset`` for l = 0..count-1."""
    return tuple(Position3D(base[0] + l * offset[0], base[1] + l * offset[1],
                            base[2] + l * offset[2]) for l in range(count))


DEFAULT_CHU = Position3D(40.0, 20.0, 50.0)
DEFAULT_CMU = Position3D(15.0, 25.0, 30.0)
DEFAULT_DEVICES = (Position3D(65.0, 74.0, 0.0), Position3D(55.0, 70.0, 0.0))
DEFAULT_PB = Position3D(30.0, 40.0, 0.0)


@dataclass(frozen=True)
class SystemConfig:
    """One scenario: geometry, fading, EH, NOMA, HWI, rates and noise.

    All powers are linear watts. ``device_pos`` describes the devices of the
    first cluster; cluster ``l`` is the rigid translate of cluster 0 by
    ``cmu_pos[l] - cmu_pos[0]``. The power beacon is shared.

    ``relay_power`` is ``None`` for the energy-harvesting relay, or a fixed
    transmit power in watts for the non-EH baseline.
    """

    chu_pos: Position3D = DEFAULT_CHU
    cmu_pos: tuple = replicate_cmus(DEFAULT_CMU, 5)
    device_pos: tuple = DEFAULT_DEVICES
    pb_pos: Position3D = DEFAULT_PB
    altitude: float = 20.0

    beta: float = 2.0
    zeta0: float = 1.0
    zeta1: float = 1.0
    zeta2: float = 0.2
    xi1: float = 9.6
    xi2: float = 0.28

    rho: float = 0.1
    eta: float = 0.95
    p_th: float = dbm_to_watts(5.0)
    p_t: float = dbm_to_watts(20.0)
    sigma2_l: float = dbm_to_watts(-90.0)
    sigma2_n: float = dbm_to_watts(-90.0)

    k_l: float = 0.15
    k_n: float = 0.15
    iota: float = 1.0
    m_l: float = 1.5
    m_n: float = 1.5
    m_e: float = 1.5

    alpha: tuple = (0.8, 0.2)
    target_rates: tuple = (0.5, 0.5)

    theorem1_variant: str = "corrected"
    harvest_channel: str = "alias-gl"
    relay_power: Optional[float] = None
    slot_factor: bool = False

    def __post_init__(self):
        # normalize sequences so configs hash and compare by value
        object.__setattr__(self, "chu_pos", Position3D(*self.chu_pos))
        object.__setattr__(self, "pb_pos", Position3D(*self.pb_pos))
        object.__setattr__(self, "cmu_pos", tuple(Position3D(*p) for p in self.cmu_pos))
        object.__setattr__(self, "device_pos", tuple(Position3D(*p) for p in self.device_pos))
        object.__setattr__(self, "alpha", tuple(float(a) for a in self.alpha))
        object.__setattr__(self, "target_rates", tuple(float(r) for r in self.target_rates))

    @property
    def L(self) -> int:
        return len(self.cmu_pos)

    @property
    def M(self) -> int:
        return len(self.device_pos)

    @property
    def chi(self) -> float:
        return self.p_th / self.p_t

    def devices_of(self, l: int) -> tuple[Position3D, ...]:
        a, b = self.cmu_pos[l], self.cmu_pos[0]
        return tuple(p.shifted(a.x - b.x, a.y - b.y, a.z - b.z) for p in self.device_pos)

    def replace(self, **changes) -> "SystemConfig":
        return replace(self, **changes)

    def with_L(self, count: int, offset: Sequence[float] = (10.0, 0.0, 0.0)) -> "SystemConfig":
        return replace(self, cmu_pos=replicate_cmus(self.cmu_pos[0], count, offset))


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "valid"
        return "\n".join(self.violations)


def _finite(v) -> bool:
    return isinstance(v, (int, float)) and math.isfinite(v)


def validate(cfg: SystemConfig) -> ValidationReport:
    """Collect every invariant violation of ``cfg``; never raises."""
    out = []
    add = out.append

    if cfg.L < 1:
        add("L must be >= 1 (no CMU positions)")
    if cfg.M < 1:
        add("M must be >= 1 (no device positions)")
    if len(cfg.alpha) != cfg.M:
        add(f"alpha has {len(cfg.alpha)} entries, expected M={cfg.M}")
    if len(cfg.target_rates) != cfg.M:
        add(f"target_rates has {len(cfg.target_rates)} entries, expected M={cfg.M}")

    if cfg.alpha:
        if abs(sum(cfg.alpha) - 1.0) > 1e-12:
            add(f"alpha sum != 1 (got {sum(cfg.alpha):.15g})")
        if any(a <= 0 for a in cfg.alpha):
            add("alpha entries must be > 0")
        if any(a1 <= a2 for a1, a2 in zip(cfg.alpha, cfg.alpha[1:])):
            add("alpha must be strictly decreasing")
    if any(not _finite(r) or r < 0 for r in cfg.target_rates):
        add("target_rates must be finite and >= 0")

    if not (0.0 <= cfg.rho < 1.0):
        add("rho must be in [0, 1) (rho must be < 1)")
    if not (0.0 <= cfg.eta <= 1.0):
        add("eta must be in [0, 1]")
    for name in ("p_th", "p_t", "sigma2_l", "sigma2_n", "iota"):
        v = getattr(cfg, name)
        if not _finite(v) or v <= 0:
            add(f"{name} must be finite and > 0")
    for name in ("m_l", "m_n", "m_e"):
        v = getattr(cfg, name)
        if not _finite(v) or v <= 0:
            add(f"{name} must be > 0")
    for name in ("k_l", "k_n"):
        v = getattr(cfg, name)
        if not _finite(v) or v < 0:
            add(f"{name} must be >= 0")
    if not _finite(cfg.beta) or cfg.beta <= 0:
        add("beta must be > 0")
    if cfg.relay_power is not None and (not _finite(cfg.relay_power) or cfg.relay_power <= 0):
        add("relay_power must be > 0 when fixed")

    if cfg.theorem1_variant not in THEOREM1_VARIANTS:
        add(f"theorem1_variant must be one of {THEOREM1_VARIANTS}")
    if cfg.harvest_channel not in HARVEST_CHANNELS:
        add(f"harvest_channel must be one of {HARVEST_CHANNELS}")

    ground = [("pb_pos", cfg.pb_pos)] + [(f"device_pos[{i}]", p) for i, p in enumerate(cfg.device_pos)]
    for name, p in ground:
        if p.z != 0:
            add(f"{name} must be on the ground (z = 0)")
    for name, p in [("chu_pos", cfg.chu_pos)] + [(f"cmu_pos[{i}]", p) for i, p in enumerate(cfg.cmu_pos)]:
        if p.z < 0:
            add(f"{name} must have z >= 0")
    if cfg.altitude <= 0:
        add("altitude must be > 0")

    # every A2G link needs elevation <= slant range
    if cfg.L >= 1 and cfg.M >= 1 and cfg.altitude > 0:
        for l in range(cfg.L):
            for n, dev in enumerate(cfg.devices_of(l)):
                if distance(cfg.cmu_pos[l], dev) < cfg.altitude:
                    add(f"CMU {l} -> device {n} distance is below the altitude H")
            if cfg.harvest_channel == "distinct-ge" and distance(cfg.pb_pos, cfg.cmu_pos[l]) < cfg.altitude:
                add(f"PB -> CMU {l} distance is below the altitude H")
            if distance(cfg.chu_pos, cfg.cmu_pos[l]) <= 0:
                add(f"CHU and CMU {l} coincide")
    return ValidationReport(out)
