"""Node placement strategies.

Density-controlled placement assigns every segment a node quota proportional
to its area (largest-remainder rounding, ties to the smaller segment id)
and scatters nodes uniformly inside their segment. Uniform placement
scatters nodes over the whole field. Both are deterministic for a given
seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .geometry import Point, SegmentLayout, segment_of

ROLE_MEMBER = "member"
ROLE_CLUSTER_HEAD = "cluster-head"
ROLE_DIRECT = "direct-to-bs"


@dataclass
class NodeState:
    id: int
    pos: Point
    energy: float
    alive: bool = True
    segment: int | None = None
    role: str = ROLE_MEMBER


def segment_quotas(layout: SegmentLayout, n_nodes: int) -> dict[int, int]:
    """Per-segment node counts proportional to segment area.

    Exact shares are floored and the leftover nodes go to the segments with
    the largest fractional remainders, smaller segment id first on ties.
    The quotas always sum to n_nodes.
    """
    if n_nodes < len(layout.segments):
        raise ConfigError(
            f"need at least one node per segment: {n_nodes} nodes for "
            f"{len(layout.segments)} segments"
        )
    total_area = layout.field_side ** 2
    shares = [(seg.id, n_nodes * seg.area / total_area) for seg in layout.segments]
    quotas = {sid: math.floor(share) for sid, share in shares}
    leftover = n_nodes - sum(quotas.values())
    remainders = sorted(
        ((share - quotas[sid], sid) for sid, share in shares),
        key=lambda t: (-t[0], t[1]),
    )
    for _, sid in remainders[:leftover]:
        quotas[sid] += 1
    return quotas


def place_density_controlled(
    layout: SegmentLayout,
    n_nodes: int,
    rng_seed,
    initial_energy: float = 0.5,
) -> list[NodeState]:
    """Place n_nodes according to the per-segment quotas.

    Node ids run 0..n_nodes-1 in segment id order. Every node starts alive
    with the configured initial energy and knows its segment.
    """
    if initial_energy <= 0:
        raise ConfigError("initial_energy must be positive")
    quotas = segment_quotas(layout, n_nodes)
    rng = np.random.default_rng(rng_seed)
    nodes: list[NodeState] = []
    node_id = 0
    for seg in layout.segments:
        q = quotas[seg.id]
        xs = rng.uniform(seg.rect.lo.x, seg.rect.hi.x, q)
        ys = rng.uniform(seg.rect.lo.y, seg.rect.hi.y, q)
        for x, y in zip(xs, ys):
            nodes.append(
                NodeState(
                    id=node_id,
                    pos=Point(float(x), float(y)),
                    energy=initial_energy,
                    segment=seg.id,
                )
            )
            node_id += 1
    return nodes


def place_uniform_random(
    field_side: float,
    n_nodes: int,
    rng_seed,
    initial_energy: float = 0.5,
    layout: SegmentLayout | None = None,
) -> list[NodeState]:
    """Place n_nodes uniformly over the field square.

    When a layout is supplied each node is tagged with its containing
    segment; otherwise segment stays None.
    """
    if n_nodes < 1:
        raise ConfigError("n_nodes must be at least 1")
    if initial_energy <= 0:
        raise ConfigError("initial_energy must be positive")
    rng = np.random.default_rng(rng_seed)
    coords = rng.uniform(0.0, field_side, size=(n_nodes, 2))
    nodes = []
    for node_id, (x, y) in enumerate(coords):
        pos = Point(float(x), float(y))
        seg = segment_of(layout, pos) if layout is not None else None
        nodes.append(NodeState(id=node_id, pos=pos, energy=initial_energy, segment=seg))
    return nodes
