"""Flat ``name = value`` scenario files.

One parameter per line, ``#`` starts a comment. Positions are
comma-separated triples; lists of positions are separated by ``;``.
Powers are given in dBm and converted to watts on load.

Keys::

    chu_pos, pb_pos                   x, y, z
    cmu_pos                           one or more triples
    L, cmu_offset                     replicate a single cmu_pos L times, offset l*cmu_offset
    device_pos                        one triple per device (cluster 0)
    altitude                          H used for A2G elevation angles
    beta, zeta0, zeta1, zeta2, xi1, xi2
    rho, eta, iota
    p_t_dbm, p_th_dbm
    sigma2_dbm | sigma2_l_dbm, sigma2_n_dbm
    k | k_l, k_n
    m | m_l, m_n, m_e
    alpha                             comma list, one per device
    target_rates                      comma list, or one value for every device
    mode                              corrected | paper-literal
    harvest                           alias-gl | distinct-ge
    relay_power_dbm                   eh | <dBm>
    slot_factor                       true | false
"""
from __future__ import annotations

from pathlib import Path

from .config import (Position3D, SystemConfig, dbm_to_watts, replicate_cmus, watts_to_dbm)


class ScenarioError(ValueError):
    pass


_FLOATS = ("altitude", "beta", "zeta0", "zeta1", "zeta2", "xi1", "xi2", "rho", "eta", "iota")
_KNOWN = set(_FLOATS) | {
    "chu_pos", "pb_pos", "cmu_pos", "L", "cmu_offset", "device_pos", "p_t_dbm", "p_th_dbm",
    "sigma2_dbm", "sigma2_l_dbm", "sigma2_n_dbm", "k", "k_l", "k_n", "m", "m_l", "m_n", "m_e",
    "alpha", "target_rates", "mode", "harvest", "relay_power_dbm", "slot_factor",
}


def _triple(text: str) -> Position3D:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise ScenarioError(f"expected an x, y, z triple, got {text!r}")
    return Position3D(*(float(p) for p in parts))


def _triples(text: str) -> tuple:
    return tuple(_triple(t) for t in text.split(";") if t.strip())


def _floats(text: str) -> tuple:
    return tuple(float(t) for t in text.split(",") if t.strip())


def parse_scenario(text: str, base: SystemConfig | None = None) -> SystemConfig:
    raw = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ScenarioError(f"line {lineno}: expected 'name = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _KNOWN:
            raise ScenarioError(f"line {lineno}: unknown parameter {key!r}")
        raw[key] = value

    cfg = base or SystemConfig()
    kw = {}
    try:
        for key in _FLOATS:
            if key in raw:
                kw[key] = float(raw[key])
        for key in ("chu_pos", "pb_pos"):
            if key in raw:
                kw[key] = _triple(raw[key])
        if "device_pos" in raw:
            kw["device_pos"] = _triples(raw["device_pos"])
        cmus = _triples(raw["cmu_pos"]) if "cmu_pos" in raw else cfg.cmu_pos
        if "L" in raw:
            count = int(raw["L"])
            if "cmu_offset" in raw:
                offset = _triple(raw["cmu_offset"])
            elif len(cmus) > 1:
                offset = tuple(b - a for a, b in zip(cmus[0], cmus[1]))
            else:
                offset = (10.0, 0.0, 0.0)
            if len(cmus) != count:
                cmus = replicate_cmus(cmus[0], count, offset)
        kw["cmu_pos"] = cmus

        for key in ("p_t", "p_th"):
            if key + "_dbm" in raw:
                kw[key] = dbm_to_watts(float(raw[key + "_dbm"]))
        if "sigma2_dbm" in raw:
            kw["sigma2_l"] = kw["sigma2_n"] = dbm_to_watts(float(raw["sigma2_dbm"]))
        for key in ("sigma2_l", "sigma2_n"):
            if key + "_dbm" in raw:
                kw[key] = dbm_to_watts(float(raw[key + "_dbm"]))
        if "k" in raw:
            kw["k_l"] = kw["k_n"] = float(raw["k"])
        for key in ("k_l", "k_n"):
            if key in raw:
                kw[key] = float(raw[key])
        if "m" in raw:
            kw["m_l"] = kw["m_n"] = kw["m_e"] = float(raw["m"])
        for key in ("m_l", "m_n", "m_e"):
            if key in raw:
                kw[key] = float(raw[key])

        if "alpha" in raw:
            kw["alpha"] = _floats(raw["alpha"])
        n_dev = len(kw.get("device_pos", cfg.device_pos))
        if "target_rates" in raw:
            rates = _floats(raw["target_rates"])
            kw["target_rates"] = rates * n_dev if len(rates) == 1 else rates
        if "mode" in raw:
            kw["theorem1_variant"] = raw["mode"]
        if "harvest" in raw:
            kw["harvest_channel"] = raw["harvest"]
        if "relay_power_dbm" in raw:
            v = raw["relay_power_dbm"].lower()
            kw["relay_power"] = None if v == "eh" else dbm_to_watts(float(v))
        if "slot_factor" in raw:
            v = raw["slot_factor"].lower()
            if v not in ("true", "false", "1", "0", "yes", "no"):
                raise ScenarioError(f"slot_factor must be true or false, got {v!r}")
            kw["slot_factor"] = v in ("true", "1", "yes")
    except ValueError as exc:
        if isinstance(exc, ScenarioError):
            raise
        raise ScenarioError(str(exc)) from exc
    return cfg.replace(**kw)


def load_scenario(path, base: SystemConfig | None = None) -> SystemConfig:
    return parse_scenario(Path(path).read_text(), base)


def _fmt_triples(ps) -> str:
    return "; ".join(", ".join(repr(float(c)) for c in p) for p in ps)


def dump_scenario(cfg: SystemConfig) -> str:
    """Serialize ``cfg`` so that ``parse_scenario(dump_scenario(cfg)) == cfg``."""
    lines = [
        f"chu_pos = {_fmt_triples([cfg.chu_pos])}",
        f"cmu_pos = {_fmt_triples(cfg.cmu_pos)}",
        f"device_pos = {_fmt_triples(cfg.device_pos)}",
        f"pb_pos = {_fmt_triples([cfg.pb_pos])}",
    ]
    lines += [f"{k} = {getattr(cfg, k)!r}" for k in _FLOATS]
    lines += [
        f"p_t_dbm = {watts_to_dbm(cfg.p_t)!r}",
        f"p_th_dbm = {watts_to_dbm(cfg.p_th)!r}",
        f"sigma2_l_dbm = {watts_to_dbm(cfg.sigma2_l)!r}",
        f"sigma2_n_dbm = {watts_to_dbm(cfg.sigma2_n)!r}",
        f"k_l = {cfg.k_l!r}",
        f"k_n = {cfg.k_n!r}",
        f"m_l = {cfg.m_l!r}",
        f"m_n = {cfg.m_n!r}",
        f"m_e = {cfg.m_e!r}",
        f"alpha = {', '.join(repr(a) for a in cfg.alpha)}",
        f"target_rates = {', '.join(repr(r) for r in cfg.target_rates)}",
        f"mode = {cfg.theorem1_variant}",
        f"harvest = {cfg.harvest_channel}",
        "relay_power_dbm = " + ("eh" if cfg.relay_power is None else repr(watts_to_dbm(cfg.relay_power))),
        f"slot_factor = {str(cfg.slot_factor).lower()}",
    ]
    return "\n".join(lines) + "\n"
