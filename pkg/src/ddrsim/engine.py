"""Round loop: executes plans, charges the radio model, tracks deaths.

Each round runs in a fixed order: member transmissions (heads pay receive
per packet), head aggregation, head transmissions outer rings first so
relayed packets are forwarded the same round, then direct senders. Energy
is debited per event; a node finishes its current event before dying and
its residual clamps at zero, so the books always balance. A dead node never
acts or gets charged again.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .baselines import LeachCPlanner, LeachParams, LeachPlanner
from .ddr import DdrPlanner
from .deployment import (
    ROLE_CLUSTER_HEAD,
    ROLE_DIRECT,
    ROLE_MEMBER,
    NodeState,
    place_density_controlled,
    place_uniform_random,
)
from .errors import ConfigError, EmptyTraceError, PlanStateMismatchError
from .geometry import Point, SegmentLayout, build_layout
from .plan import BS, RoundPlan
from .radio import RadioParams, agg_energy, rx_energy, tx_energy

PROTOCOLS = ("ddr", "leach", "leach-c")

# Sub-streams of the run seed, so placement and election draws stay
# independent but reproducible.
_PLACEMENT_STREAM = 0
_ELECTION_STREAM = 1

EventSink = Callable[[str, int, float], None]


@dataclass
class SimConfig:
    field_side: float = 120.0
    n_nodes: int = 144
    initial_energy: float = 0.5
    ring_spacing: float | None = 20.0
    protocol: str = "ddr"
    radio: RadioParams = field(default_factory=RadioParams)
    leach: LeachParams = field(default_factory=LeachParams)
    max_rounds: int = 4000
    seed: int = 1
    shared_placement: bool = True

    def validate(self) -> None:
        if self.protocol not in PROTOCOLS:
            raise ConfigError(f"unknown protocol {self.protocol!r}, expected one of {PROTOCOLS}")
        if self.field_side <= 0:
            raise ConfigError("field_side must be positive")
        if self.n_nodes < 1:
            raise ConfigError("n_nodes must be at least 1")
        if self.initial_energy <= 0:
            raise ConfigError("initial_energy must be positive")
        if self.max_rounds < 1:
            raise ConfigError("max_rounds must be at least 1")
        if self.protocol == "ddr" and self.ring_spacing is None:
            raise ConfigError("ddr requires ring_spacing")
        if self.shared_placement and self.ring_spacing is None:
            raise ConfigError("shared_placement requires ring_spacing for the segment layout")


@dataclass
class RoundRecord:
    round: int
    alive: int
    packets_to_bs: int
    ch_count: int
    total_residual_j: float
    charged_j: float = 0.0


@dataclass
class SimSummary:
    fnd: int | None
    lnd: int | None
    total_packets: int
    rounds_simulated: int


@dataclass
class SimState:
    nodes: list[NodeState]
    bs: Point
    packets_to_bs: int = 0

    def __post_init__(self) -> None:
        self.node_by_id = {n.id: n for n in self.nodes}


def _transmission_order(next_hop: dict[int, int | str]) -> list[int]:
    """Topological order of head transmissions: relays send after feeders.

    Heads whose packets nobody relays go first (ascending id), which puts
    outer rings before inner ones. A cycle means a malformed plan.
    """
    indeg = {ch: 0 for ch in next_hop}
    for target in next_hop.values():
        if target in indeg:
            indeg[target] += 1
    ready = sorted(ch for ch, deg in indeg.items() if deg == 0)
    order: list[int] = []
    while ready:
        ch = ready.pop(0)
        order.append(ch)
        target = next_hop[ch]
        if target in indeg:
            indeg[target] -= 1
            if indeg[target] == 0:
                # Insert keeping ascending order among the currently ready.
                lo = 0
                while lo < len(ready) and ready[lo] < target:
                    lo += 1
                ready.insert(lo, target)
    if len(order) != len(next_hop):
        raise PlanStateMismatchError("relay plan contains a cycle")
    return order


def run_round(
    state: SimState,
    plan: RoundPlan,
    radio: RadioParams,
    event_sink: EventSink | None = None,
) -> RoundRecord:
    """Execute one plan against the current node state.

    Returns the round record; mutates node energies, alive flags, roles and
    the cumulative packet counter.
    """
    nodes = state.node_by_id
    for nid in plan.node_ids():
        node = nodes.get(nid)
        if node is None or not node.alive:
            raise PlanStateMismatchError(f"plan references dead or unknown node {nid}")

    bits = radio.packet_bits
    charges: list[float] = []

    def charge(node: NodeState, kind: str, cost: float) -> None:
        # Complete-then-die: the event happens in full, the residual clamps.
        debit = cost if cost < node.energy else node.energy
        node.energy -= debit
        if node.energy <= 0.0:
            node.energy = 0.0
            node.alive = False
        charges.append(debit)
        if event_sink is not None:
            event_sink(kind, node.id, debit)

    for ch_id in plan.next_hop:
        nodes[ch_id].role = ROLE_CLUSTER_HEAD
    for member_ids in plan.members.values():
        for mid in member_ids:
            nodes[mid].role = ROLE_MEMBER
    for nid in plan.direct_nodes:
        nodes[nid].role = ROLE_DIRECT

    # Phase 1: members report to their heads.
    received: dict[int, int] = {}
    for ch_id in sorted(plan.members):
        ch = nodes[ch_id]
        got = 0
        for mid in sorted(plan.members[ch_id]):
            member = nodes[mid]
            if not member.alive:
                continue
            charge(member, "member_tx", tx_energy(radio, bits, member.pos.distance_to(ch.pos)))
            if ch.alive:
                charge(ch, "ch_rx", rx_energy(radio, bits))
                got += 1
        received[ch_id] = got

    # Phase 2: heads fuse member packets plus their own reading.
    outbox: dict[int, int] = {}
    for ch_id in sorted(plan.next_hop):
        ch = nodes[ch_id]
        if ch.alive:
            charge(ch, "ch_agg", agg_energy(radio, bits, received.get(ch_id, 0) + 1))
            outbox[ch_id] = 1
        else:
            outbox[ch_id] = 0

    # Phase 3: head transmissions, feeders before relays. Relayed packets are
    # forwarded individually, no re-aggregation; a relay pays receive each.
    delivered = 0
    for ch_id in _transmission_order(plan.next_hop):
        ch = nodes[ch_id]
        target = plan.next_hop[ch_id]
        if target == BS:
            target_node = None
            dist = ch.pos.distance_to(state.bs)
        else:
            target_node = nodes[target]
            dist = ch.pos.distance_to(target_node.pos)
        for _ in range(outbox[ch_id]):
            if not ch.alive:
                break
            charge(ch, "ch_tx", tx_energy(radio, bits, dist))
            if target_node is None:
                delivered += 1
            elif target_node.alive:
                charge(target_node, "relay_rx", rx_energy(radio, bits))
                outbox[target] += 1
            # else: the packet is lost at a dead relay

    # Phase 4: direct senders.
    for nid in sorted(plan.direct_nodes):
        node = nodes[nid]
        if not node.alive:
            continue
        charge(node, "direct_tx", tx_energy(radio, bits, node.pos.distance_to(state.bs)))
        delivered += 1

    state.packets_to_bs += delivered
    return RoundRecord(
        round=plan.round + 1,
        alive=sum(1 for n in state.nodes if n.alive),
        packets_to_bs=state.packets_to_bs,
        ch_count=len(plan.next_hop),
        total_residual_j=math.fsum(n.energy for n in state.nodes),
        charged_j=math.fsum(charges),
    )


def compute_summary(trace: list[RoundRecord], n_nodes: int | None = None) -> SimSummary:
    """First-death and last-death rounds plus totals for a finished trace.

    n_nodes defaults to the first record's alive count, which misses a death
    in round one; pass the deployed count when it is known.
    """
    if not trace:
        raise EmptyTraceError("cannot summarize an empty trace")
    if n_nodes is None:
        n_nodes = trace[0].alive
    fnd = next((r.round for r in trace if r.alive < n_nodes), None)
    lnd = next((r.round for r in trace if r.alive == 0), None)
    return SimSummary(
        fnd=fnd,
        lnd=lnd,
        total_packets=trace[-1].packets_to_bs,
        rounds_simulated=len(trace),
    )


def build_simulation(config: SimConfig):
    """Layout (when applicable), placed nodes, planner, and BS position."""
    config.validate()
    side = config.field_side
    bs = Point(side / 2.0, side / 2.0)
    layout: SegmentLayout | None = None
    if config.protocol == "ddr" or config.shared_placement:
        layout = build_layout(side, config.ring_spacing)
        nodes = place_density_controlled(
            layout, config.n_nodes, [config.seed, _PLACEMENT_STREAM], config.initial_energy
        )
    else:
        nodes = place_uniform_random(
            side, config.n_nodes, [config.seed, _PLACEMENT_STREAM], config.initial_energy
        )
    if config.protocol == "ddr":
        planner = DdrPlanner(layout)
    elif config.protocol == "leach":
        planner = LeachPlanner(
            config.leach, np.random.default_rng([config.seed, _ELECTION_STREAM])
        )
    else:
        planner = LeachCPlanner(config.leach, bs)
    return layout, nodes, planner, bs


def run_sim(
    config: SimConfig,
    plan_sink: Callable[[RoundPlan], None] | None = None,
) -> list[RoundRecord]:
    """Run a full simulation: rounds until everyone is dead or the cap hits."""
    _, nodes, planner, bs = build_simulation(config)
    state = SimState(nodes=nodes, bs=bs)
    trace: list[RoundRecord] = []
    for round_idx in range(config.max_rounds):
        plan = planner.plan_round(nodes, round_idx)
        if plan_sink is not None:
            plan_sink(plan)
        record = run_round(state, plan, config.radio)
        trace.append(record)
        if record.alive == 0:
            break
    return trace
