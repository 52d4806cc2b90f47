"""Segment-based protocol: rank-rotation election and inward relay routing.

Every ring segment (ring >= 2) elects one cluster head per round: its alive
nodes are ranked by distance to the segment centroid (node id breaks ties)
and the rank equal to round mod alive-count serves. Inner-square nodes skip
clustering and report straight to the base station. Heads in ring 2 send to
the base station; heads further out relay inward through the head of the
same pinwheel position one ring in, falling back to the nearest inner-ring
head (by segment centroid distance) and finally to the base station.
"""

from __future__ import annotations

import logging

from .deployment import NodeState
from .geometry import SegmentLayout
from .plan import BS, NextHop, RoundPlan

log = logging.getLogger(__name__)


def _first_id_of_ring(ring: int) -> int:
    # id 1 is the inner square; ring k >= 2 holds ids 2+4(k-2) .. 5+4(k-2)
    return 2 + 4 * (ring - 2)


def _pinwheel_position(seg_id: int) -> int:
    # 0=top, 1=right, 2=bottom, 3=left within a ring
    return (seg_id - 2) % 4


def elect_chs(layout: SegmentLayout, nodes: list[NodeState], round_idx: int) -> dict[int, int]:
    """Cluster head of every ring segment that still has alive nodes.

    Returns a map segment id -> node id. Inner-square nodes never appear.
    """
    by_segment: dict[int, list[NodeState]] = {}
    for node in nodes:
        if node.alive and node.segment is not None and node.segment != 1:
            by_segment.setdefault(node.segment, []).append(node)
    ch_of_segment: dict[int, int] = {}
    for seg_id, alive in by_segment.items():
        centroid = layout.segment(seg_id).centroid
        alive.sort(key=lambda n: (n.pos.distance_to(centroid), n.id))
        ch_of_segment[seg_id] = alive[round_idx % len(alive)].id
    return ch_of_segment


def assign_members(
    layout: SegmentLayout,
    nodes: list[NodeState],
    ch_of_segment: dict[int, int],
) -> tuple[dict[int, list[int]], list[int]]:
    """Split alive nodes into per-head member lists and direct senders.

    Membership is static: a node always belongs to its own segment's head.
    Inner-square nodes go on the direct list.
    """
    members: dict[int, list[int]] = {ch: [] for ch in ch_of_segment.values()}
    direct: list[int] = []
    for node in nodes:
        if not node.alive or node.segment is None:
            continue
        if node.segment == 1:
            direct.append(node.id)
            continue
        ch = ch_of_segment.get(node.segment)
        if ch is None:
            # Cannot happen when election ran on the same alive set; keep a
            # breadcrumb rather than dropping the node silently.
            log.warning("segment %d has alive nodes but no cluster head", node.segment)
            continue
        if node.id != ch:
            members[ch].append(node.id)
    return members, direct


def route_next_hop(layout: SegmentLayout, ch_of_segment: dict[int, int]) -> dict[int, NextHop]:
    """Next hop for every cluster head.

    Ring-2 heads transmit to the base station. A ring-k head (k >= 3) uses
    the ring-(k-1) head at its own pinwheel position, else the inner-ring
    head whose segment centroid is nearest (ties to the smaller segment id),
    else the base station when ring k-1 has no heads at all.
    """
    hops: dict[int, NextHop] = {}
    for seg_id, ch_id in ch_of_segment.items():
        ring = layout.segment(seg_id).ring
        if ring == 2:
            hops[ch_id] = BS
            continue
        inner_first = _first_id_of_ring(ring - 1)
        preferred = inner_first + _pinwheel_position(seg_id)
        if preferred in ch_of_segment:
            hops[ch_id] = ch_of_segment[preferred]
            continue
        centroid = layout.segment(seg_id).centroid
        candidates = [
            (layout.segment(sid).centroid.distance_to(centroid), sid)
            for sid in range(inner_first, inner_first + 4)
            if sid in ch_of_segment
        ]
        if candidates:
            hops[ch_id] = ch_of_segment[min(candidates)[1]]
        else:
            hops[ch_id] = BS
    return hops


class DdrPlanner:
    """Produces a RoundPlan per round from the current alive set."""

    def __init__(self, layout: SegmentLayout):
        self.layout = layout

    def plan_round(self, nodes: list[NodeState], round_idx: int) -> RoundPlan:
        ch_of_segment = elect_chs(self.layout, nodes, round_idx)
        members, direct = assign_members(self.layout, nodes, ch_of_segment)
        next_hop = route_next_hop(self.layout, ch_of_segment)
        return RoundPlan(
            round=round_idx,
            ch_of_segment=ch_of_segment,
            members=members,
            next_hop=next_hop,
            direct_nodes=direct,
        )
