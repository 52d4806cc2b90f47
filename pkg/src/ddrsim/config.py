"""Flat key=value run configs and sweep specs.

Config files are plain text: one ``key = value`` per line, ``#`` starts a
comment, unknown keys are rejected. Sweep specs use the same syntax plus a
``cells`` list of field_side:n_nodes:ring_count triples and the protocol
and seed lists to cross them with.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .baselines import LeachParams
from .engine import PROTOCOLS, SimConfig
from .errors import ConfigError
from .radio import RadioParams

_TRUE = {"true", "1", "yes", "on"}
_FALSE = {"false", "0", "no", "off"}


def _parse_bool(raw: str, key: str) -> bool:
    low = raw.lower()
    if low in _TRUE:
        return True
    if low in _FALSE:
        return False
    raise ConfigError(f"{key} expects a boolean, got {raw!r}")


def _parse_int(raw: str, key: str) -> int:
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"{key} expects an integer, got {raw!r}") from exc


def _parse_float(raw: str, key: str) -> float:
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"{key} expects a number, got {raw!r}") from exc


def parse_kv_text(text: str) -> dict[str, str]:
    """Key=value lines to a dict; comments stripped, duplicates rejected."""
    out: dict[str, str] = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw_line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise ConfigError(f"line {lineno}: empty key or value in {raw_line!r}")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


_CONFIG_KEYS = {
    "protocol",
    "field_side",
    "n_nodes",
    "initial_energy",
    "ring_spacing",
    "max_rounds",
    "seed",
    "shared_placement",
    "packet_bits",
    "leach_p",
    "e_elec",
    "e_fs",
    "e_mp",
    "e_da",
}


def config_from_mapping(kv: dict[str, str]) -> SimConfig:
    """Build a SimConfig from parsed key=value pairs; unset keys keep defaults."""
    unknown = set(kv) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    radio_defaults = RadioParams()
    radio = RadioParams(
        e_elec=_parse_float(kv["e_elec"], "e_elec") if "e_elec" in kv else radio_defaults.e_elec,
        e_fs=_parse_float(kv["e_fs"], "e_fs") if "e_fs" in kv else radio_defaults.e_fs,
        e_mp=_parse_float(kv["e_mp"], "e_mp") if "e_mp" in kv else radio_defaults.e_mp,
        e_da=_parse_float(kv["e_da"], "e_da") if "e_da" in kv else radio_defaults.e_da,
        packet_bits=_parse_int(kv["packet_bits"], "packet_bits")
        if "packet_bits" in kv
        else radio_defaults.packet_bits,
    )
    leach = LeachParams(p=_parse_float(kv["leach_p"], "leach_p")) if "leach_p" in kv else LeachParams()
    defaults = SimConfig()
    config = SimConfig(
        field_side=_parse_float(kv["field_side"], "field_side")
        if "field_side" in kv
        else defaults.field_side,
        n_nodes=_parse_int(kv["n_nodes"], "n_nodes") if "n_nodes" in kv else defaults.n_nodes,
        initial_energy=_parse_float(kv["initial_energy"], "initial_energy")
        if "initial_energy" in kv
        else defaults.initial_energy,
        ring_spacing=_parse_float(kv["ring_spacing"], "ring_spacing")
        if "ring_spacing" in kv
        else defaults.ring_spacing,
        protocol=kv.get("protocol", defaults.protocol),
        radio=radio,
        leach=leach,
        max_rounds=_parse_int(kv["max_rounds"], "max_rounds")
        if "max_rounds" in kv
        else defaults.max_rounds,
        seed=_parse_int(kv["seed"], "seed") if "seed" in kv else defaults.seed,
        shared_placement=_parse_bool(kv["shared_placement"], "shared_placement")
        if "shared_placement" in kv
        else defaults.shared_placement,
    )
    config.validate()
    return config


def load_config(path: str) -> SimConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return config_from_mapping(parse_kv_text(fh.read()))


@dataclass
class SweepSpec:
    """A grid of (field_side, n_nodes, ring_count) cells x protocols x seeds."""

    cells: list[tuple[float, int, int]]
    protocols: list[str]
    seeds: list[int]
    base: SimConfig

    def expand(self) -> list[tuple[tuple, SimConfig]]:
        """All runs in deterministic key order.

        The key is (protocol, field_side, n_nodes, seed) and doubles as the
        sweep output ordering.
        """
        runs = []
        for field_side, n_nodes, rings in self.cells:
            spacing = field_side / 2.0 / rings
            for protocol in self.protocols:
                for seed in self.seeds:
                    config = replace(
                        self.base,
                        field_side=field_side,
                        n_nodes=n_nodes,
                        ring_spacing=spacing,
                        protocol=protocol,
                        seed=seed,
                    )
                    config.validate()
                    key = (protocol, field_side, n_nodes, seed)
                    runs.append((key, config))
        runs.sort(key=lambda item: item[0])
        return runs


_SWEEP_ONLY_KEYS = {"cells", "protocols", "seeds"}
_SWEEP_FORBIDDEN = {"field_side", "n_nodes", "ring_spacing", "protocol", "seed"}


def sweep_from_mapping(kv: dict[str, str]) -> SweepSpec:
    for key in _SWEEP_ONLY_KEYS:
        if key not in kv:
            raise ConfigError(f"sweep spec is missing the {key!r} list")
    forbidden = set(kv) & _SWEEP_FORBIDDEN
    if forbidden:
        raise ConfigError(
            f"sweep cells control {', '.join(sorted(forbidden))}; remove them from the sweep file"
        )

    cells = []
    for chunk in kv["cells"].split(","):
        parts = chunk.strip().split(":")
        if len(parts) != 3:
            raise ConfigError(f"cell {chunk.strip()!r} should be field_side:n_nodes:ring_count")
        field_side = _parse_float(parts[0], "cells.field_side")
        n_nodes = _parse_int(parts[1], "cells.n_nodes")
        rings = _parse_int(parts[2], "cells.ring_count")
        if rings < 2:
            raise ConfigError(f"cell {chunk.strip()!r} needs at least two rings")
        cells.append((field_side, n_nodes, rings))

    protocols = [p.strip() for p in kv["protocols"].split(",") if p.strip()]
    for protocol in protocols:
        if protocol not in PROTOCOLS:
            raise ConfigError(f"unknown protocol {protocol!r} in sweep spec")
    seeds = [_parse_int(s.strip(), "seeds") for s in kv["seeds"].split(",") if s.strip()]
    if not cells or not protocols or not seeds:
        raise ConfigError("sweep spec needs at least one cell, protocol, and seed")

    base_kv = {k: v for k, v in kv.items() if k not in _SWEEP_ONLY_KEYS}
    base = config_from_mapping(base_kv)
    return SweepSpec(cells=cells, protocols=protocols, seeds=seeds, base=base)


def load_sweep(path: str) -> SweepSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return sweep_from_mapping(parse_kv_text(fh.read()))
