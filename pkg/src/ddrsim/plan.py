"""Per-round control plan, shared by every protocol.

A plan names the cluster heads, their member lists, each head's next hop
(another head's node id or the base station marker), and the nodes that
talk to the base station directly. The engine executes plans; planners
produce them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Union

BS = "BS"

NextHop = Union[int, str]


@dataclass
class RoundPlan:
    round: int
    ch_of_segment: dict[int, int] = field(default_factory=dict)
    members: dict[int, list[int]] = field(default_factory=dict)
    next_hop: dict[int, NextHop] = field(default_factory=dict)
    direct_nodes: list[int] = field(default_factory=list)

    def node_ids(self) -> Iterator[int]:
        """Every node id the plan refers to (heads, members, direct senders)."""
        for ch_id, member_ids in self.members.items():
            yield ch_id
            yield from member_ids
        for ch_id, hop in self.next_hop.items():
            yield ch_id
            if hop != BS:
                yield hop
        yield from self.direct_nodes

    def to_jsonable(self) -> dict:
        return {
            "round": self.round,
            "ch_of_segment": {str(k): v for k, v in sorted(self.ch_of_segment.items())},
            "members": {str(k): sorted(v) for k, v in sorted(self.members.items())},
            "next_hop": {str(k): v for k, v in sorted(self.next_hop.items())},
            "direct_nodes": sorted(self.direct_nodes),
        }
