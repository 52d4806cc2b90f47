"""First-order radio energy model.

Transmit cost is electronics plus an amplifier term that switches from
free-space (distance squared) to multipath (distance to the fourth) at the
crossover distance d0 = sqrt(e_fs / e_mp). Receive cost is electronics only.
Aggregation cost is charged per signal fused.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError


@dataclass(frozen=True)
class RadioParams:
    """Energy constants, all joules per bit (or per bit per m^2 / m^4).

    Defaults are the usual first-order model constants:
    50 nJ/bit electronics, 10 pJ/bit/m^2 free-space amp,
    0.0013 pJ/bit/m^4 multipath amp, 5 nJ/bit/signal aggregation.
    """

    e_elec: float = 50e-9
    e_fs: float = 10e-12
    e_mp: float = 0.0013e-12
    e_da: float = 5e-9
    packet_bits: int = 4000

    def __post_init__(self) -> None:
        for name in ("e_elec", "e_fs", "e_mp", "e_da", "packet_bits"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"radio parameter {name} must be positive")

    @property
    def d0(self) -> float:
        """Amplifier crossover distance in meters; never stored, always derived."""
        return math.sqrt(self.e_fs / self.e_mp)


def crossover_distance(params: RadioParams) -> float:
    return params.d0


def tx_energy(params: RadioParams, bits: int, dist: float) -> float:
    """Energy to transmit ``bits`` over ``dist`` meters.

    Uses the free-space amplifier below d0 and the multipath amplifier at or
    beyond it; the two branches agree at d0 itself.
    """
    if dist < params.d0:
        return params.e_elec * bits + params.e_fs * bits * dist * dist
    return params.e_elec * bits + params.e_mp * bits * dist ** 4


def rx_energy(params: RadioParams, bits: int) -> float:
    """Energy to receive ``bits``; distance independent."""
    return params.e_elec * bits


def agg_energy(params: RadioParams, bits: int, signals: int) -> float:
    """Energy to fuse ``signals`` packets of ``bits`` each into one packet."""
    return params.e_da * bits * signals
