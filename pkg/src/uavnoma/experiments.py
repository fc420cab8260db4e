"""Parameter sweeps, analytic-vs-simulation comparison and figure recipes."""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import analysis, montecarlo
from .config import SystemConfig, dbm_to_watts, validate

AXES = ("p_t_dbm", "k", "p_th_dbm", "m", "L", "rho")
LEVELS = ("device", "cmu", "network")
METHODS = ("analytic", "mc", "both")

CSV_HEADER = ["axis", "value", "level", "analytic_p", "mc_p_hat", "mc_std_err",
              "aleph1", "aleph2", "aleph3", "seed", "status"]


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    values: tuple
    outputs: tuple = ("device", "cmu", "network")
    methods: str = "both"

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        if self.axis not in AXES:
            raise ValueError(f"axis must be one of {AXES}")
        if not self.values:
            raise ValueError("sweep values must be nonempty")
        if not all(math.isfinite(v) for v in self.values):
            raise ValueError("sweep values must be finite")
        if list(self.values) != sorted(self.values):
            raise ValueError("sweep values must be sorted ascending")
        if not set(self.outputs) <= set(LEVELS) or not self.outputs:
            raise ValueError(f"outputs must be drawn from {LEVELS}")
        if self.methods not in METHODS:
            raise ValueError(f"methods must be one of {METHODS}")


def parse_values(text: str) -> tuple:
    """``"0:40:2"`` (inclusive start:stop:step) or ``"4,6,8"``."""
    if ":" in text:
        start, stop, step = (float(t) for t in text.split(":"))
        if step <= 0:
            raise ValueError("step must be > 0")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return tuple(round(start + i * step, 12) for i in range(count))
    return tuple(float(t) for t in text.split(",") if t.strip())


def apply_axis(cfg: SystemConfig, axis: str, value: float, baseline_power: float | None = None) -> SystemConfig:
    """Return ``cfg`` with the sweep ``axis`` set to ``value``.

    A fixed-power baseline tracks ``p_t`` unless ``baseline_power`` pins it.
    """
    if axis == "p_t_dbm":
        cfg = cfg.replace(p_t=dbm_to_watts(value))
    elif axis == "k":
        cfg = cfg.replace(k_l=value, k_n=value)
    elif axis == "p_th_dbm":
        cfg = cfg.replace(p_th=dbm_to_watts(value))
    elif axis == "m":
        cfg = cfg.replace(m_l=value, m_n=value, m_e=value)
    elif axis == "L":
        if value != int(value) or value < 1:
            raise ValueError("L must be a positive integer")
        offset = (10.0, 0.0, 0.0)
        if cfg.L > 1:
            a, b = cfg.cmu_pos[0], cfg.cmu_pos[1]
            offset = (b.x - a.x, b.y - a.y, b.z - a.z)
        cfg = cfg.with_L(int(value), offset)
    elif axis == "rho":
        cfg = cfg.replace(rho=value)
    else:
        raise ValueError(f"unknown axis {axis!r}")
    if cfg.relay_power is not None:
        cfg = cfg.replace(relay_power=cfg.p_t if baseline_power is None else baseline_power)
    return cfg


@dataclass
class PointResult:
    value: float
    report: analysis.OutageReport | None
    counts: montecarlo.McCounts | None
    status: str = "ok"


def evaluate_point(cfg: SystemConfig, methods: str = "both", trials: int = 1_000_000,
                   seed: int = 0, quad=analysis.DEFAULT_QUAD) -> PointResult:
    report = counts = None
    status = "ok"
    if methods in ("analytic", "both"):
        report = analysis.outage_report(cfg, quad)
        if not report.converged:
            status = "quadrature-not-converged"
    if methods in ("mc", "both"):
        counts = montecarlo.simulate(cfg, trials, seed)
    return PointResult(float("nan"), report, counts, status)


def _fmt(x) -> str:
    return "" if x is None else repr(float(x))


def _rows(axis: str, pr: PointResult, outputs, cfg: SystemConfig, seed: int):
    rows = []
    rep, cnt = pr.report, pr.counts

    def row(level_id, p, est, terms=None):
        a = terms or (None, None, None)
        return [axis, repr(pr.value), level_id, _fmt(p),
                _fmt(est.p_hat) if est else "", _fmt(est.std_err) if est else "",
                _fmt(a[0]), _fmt(a[1]), _fmt(a[2]), str(seed), pr.status]

    if "device" in outputs:
        for l in range(cfg.L):
            for n in range(len(cfg.alpha)):
                terms = None
                if rep is not None:
                    t = rep.diagnostics[(l, n)][cfg.theorem1_variant]
                    if t:
                        terms = (t[-1].aleph1, t[-1].aleph2, t[-1].aleph3)
                rows.append(row(f"device:{l}:{n}", rep.per_device_e2e[l, n] if rep else None,
                                cnt.estimate(("device", l, n)) if cnt else None, terms))
    if "cmu" in outputs:
        for l in range(cfg.L):
            rows.append(row(f"cmu:{l}", rep.per_cmu[l] if rep else None,
                            cnt.estimate(("cmu", l)) if cnt else None))
    if "network" in outputs:
        rows.append(row("network", rep.network if rep else None,
                        cnt.estimate("network") if cnt else None))
    return rows


def run_sweep(cfg: SystemConfig, spec: SweepSpec, out=None, trials: int = 1_000_000,
              seed: int = 0, workers: int = 1, baseline_power: float | None = None) -> str:
    """Evaluate every sweep point and return (and optionally write) the CSV text.

    Rows come out in axis order whatever order the workers finish in.
    """
    report = validate(cfg)
    if not report.ok:
        raise ValueError(str(report))
    cfgs = [apply_axis(cfg, spec.axis, v, baseline_power) for v in spec.values]
    for c in cfgs:
        r = validate(c)
        if not r.ok:
            raise ValueError(str(r))

    def work(item):
        v, c = item
        pr = evaluate_point(c, spec.methods, trials, seed)
        pr.value = v
        return _rows(spec.axis, pr, spec.outputs, c, seed)

    items = list(zip(spec.values, cfgs))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            blocks = list(pool.map(work, items))
    else:
        blocks = [work(it) for it in items]

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for block in blocks:
        w.writerows(block)
    text = buf.getvalue()
    if out is not None:
        Path(out).write_text(text)
    return text


# ---------------------------------------------------------------- compare


@dataclass
class CompareRow:
    p_t_dbm: float
    level: str
    analytic: float
    analytic_other: float
    mc: float
    std_err: float
    trials: int

    @property
    def se_multiple(self) -> float:
        return se_multiple(self.analytic, self.mc, self.std_err, self.trials)


def se_multiple(analytic: float, p_hat: float, std_err: float, trials: int) -> float:
    """``|analytic - p_hat|`` in MC standard errors, floored at one-count resolution."""
    return abs(analytic - p_hat) / max(std_err, 1.0 / trials)


@dataclass
class CompareResult:
    rows: list = field(default_factory=list)
    db_gap: float | None = None

    @property
    def worst(self) -> float:
        return max((r.se_multiple for r in self.rows), default=0.0)

    def exceed(self, k: float) -> int:
        return sum(r.se_multiple > k for r in self.rows)

    def table(self) -> str:
        lines = [f"{'P_t[dBm]':>8} {'level':<14} {'analytic':>12} {'other-mode':>12} "
                 f"{'mc':>12} {'se':>10} {'|z|':>6}"]
        for r in self.rows:
            lines.append(f"{r.p_t_dbm:8.2f} {r.level:<14} {r.analytic:12.5e} {r.analytic_other:12.5e} "
                         f"{r.mc:12.5e} {r.std_err:10.3e} {r.se_multiple:6.2f}")
        gap = "n/a" if self.db_gap is None else f"{self.db_gap:+.2f} dB"
        lines.append(f"EH vs fixed-power baseline gap at CMU outage 1e-2: {gap} "
                     "(positive = EH needs less transmit power)")
        return "\n".join(lines)


def crossing_db(x_db, p, target: float = 1e-2) -> float | None:
    """First ``x`` where a decreasing curve ``p(x)`` drops to ``target`` (log-linear)."""
    x_db = np.asarray(x_db, dtype=float)
    lp = np.log10(np.clip(np.asarray(p, dtype=float), 1e-300, None))
    lt = math.log10(target)
    for i in range(len(x_db) - 1):
        if lp[i] >= lt >= lp[i + 1] and lp[i] != lp[i + 1]:
            return float(x_db[i] + (lt - lp[i]) * (x_db[i + 1] - x_db[i]) / (lp[i + 1] - lp[i]))
    return None


def eh_gap_db(cfg: SystemConfig, p_t_dbm, baseline_power: float | None = None,
              target: float = 1e-2, l: int = 0) -> float | None:
    """Transmit-power gap (dB) at which the baseline reaches ``target`` CMU outage later than EH."""
    eh = [analysis.cmu_outage(l, cfg.replace(p_t=dbm_to_watts(x), relay_power=None)) for x in p_t_dbm]
    base_cfg = cfg.replace(relay_power=cfg.p_t)
    base = [analysis.cmu_outage(l, apply_axis(base_cfg, "p_t_dbm", x, baseline_power)) for x in p_t_dbm]
    x_eh = crossing_db(p_t_dbm, eh, target)
    x_base = crossing_db(p_t_dbm, base, target)
    if x_eh is None or x_base is None:
        return None
    return x_base - x_eh


def compare(cfg: SystemConfig, p_t_dbm, trials: int = 1_000_000, seeds=(1, 2, 3),
            baseline_power: float | None = None, workers: int = 1) -> CompareResult:
    """Analytic outage (active variant, plus the other variant for reference)
    against MC counts pooled over ``seeds``, at each transmit power."""
    res = CompareResult()
    other_mode = "paper-literal" if cfg.theorem1_variant == "corrected" else "corrected"
    for x in p_t_dbm:
        c = apply_axis(cfg, "p_t_dbm", x, baseline_power)
        rep = analysis.outage_report(c)
        lit = analysis.outage_report(c.replace(theorem1_variant=other_mode))
        cnt = montecarlo.simulate_seeds(c, trials, seeds, workers=workers)
        pairs = []
        for l in range(c.L):
            for n in range(len(c.alpha)):
                pairs.append((f"device:{l}:{n}", rep.per_device_e2e[l, n], lit.per_device_e2e[l, n],
                              cnt.estimate(("device", l, n))))
            pairs.append((f"cmu:{l}", rep.per_cmu[l], lit.per_cmu[l], cnt.estimate(("cmu", l))))
        pairs.append(("network", rep.network, lit.network, cnt.estimate("network")))
        for level, a, a_lit, est in pairs:
            res.rows.append(CompareRow(x, level, a, a_lit, est.p_hat, est.std_err, est.trials))
    grid = np.arange(-80.0, max(max(p_t_dbm), 40.0) + 20.5, 2.0)
    res.db_gap = eh_gap_db(cfg, grid, baseline_power)
    return res


# ---------------------------------------------------------------- recipes

_PT_GRID = tuple(float(v) for v in range(0, 41, 2))


def recipes(name: str):
    """Curves behind each result figure as ``(tag, overrides, SweepSpec, baseline)``.

    ``overrides`` are keyword changes applied to the scenario before the sweep;
    ``baseline`` marks fixed-power (non-EH) curves.
    """
    pt = SweepSpec("p_t_dbm", _PT_GRID, ("device",))
    if name == "fig2":
        return [(f"pth{pth:g}_k{k:g}", {"p_th": dbm_to_watts(pth), "k_l": k, "k_n": k}, pt, False)
                for pth in (2.0, 5.0, 20.0) for k in (0.0, 0.15)]
    cmu = SweepSpec("p_t_dbm", _PT_GRID, ("cmu",))
    if name == "fig3":
        return [(f"pth{pth:g}_{'noeh' if base else 'eh'}", {"p_th": dbm_to_watts(pth), "k_l": 0.15, "k_n": 0.15},
                 cmu, base) for pth in (2.0, 5.0, 20.0) for base in (False, True)]
    if name == "fig4":
        return [(f"m{m:g}_{'noeh' if base else 'eh'}", {"m_l": m, "m_n": m, "m_e": m, "k_l": 0.15, "k_n": 0.15},
                 cmu, base) for m in (1.0, 1.5, 2.0) for base in (False, True)]
    net = SweepSpec("p_t_dbm", _PT_GRID, ("network",))
    if name == "fig6":
        return [(f"L{L}", {"L": L}, net, False) for L in (4, 6, 8)]
    if name == "fig7":
        ks = SweepSpec("k", parse_values("0:0.3:0.05"), ("network",))
        return [(f"pth{pth:g}", {"p_th": dbm_to_watts(pth), "p_t": dbm_to_watts(20.0)}, ks, False)
                for pth in (5.0, 30.0)]
    raise ValueError(f"unknown recipe {name!r}; choose from {RECIPES}")


RECIPES = ("fig2", "fig3", "fig4", "fig6", "fig7")


def run_recipe(cfg: SystemConfig, name: str, out_dir, trials: int = 1_000_000, seed: int = 0,
               workers: int = 1, methods: str = "both", baseline_power: float | None = None) -> list:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for tag, overrides, spec, base in recipes(name):
        overrides = dict(overrides)
        c = cfg
        if "L" in overrides:
            c = apply_axis(c, "L", overrides.pop("L"))
        c = c.replace(**overrides)
        if base:
            c = c.replace(relay_power=c.p_t if baseline_power is None else baseline_power)
        spec = SweepSpec(spec.axis, spec.values, spec.outputs, methods)
        path = out_dir / f"{name}_{tag}.csv"
        run_sweep(c, spec, path, trials, seed, workers, baseline_power)
        written.append(path)
    return written
