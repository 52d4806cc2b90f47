"""Segment protocol planning: election rotation, membership, routing."""

import numpy as np
import pytest

from ddrsim.ddr import DdrPlanner, assign_members, elect_chs, route_next_hop
from ddrsim.deployment import NodeState, place_density_controlled
from ddrsim.geometry import Point, build_layout
from ddrsim.plan import BS


def node(nid, x, y, segment, energy=0.5, alive=True):
    return NodeState(id=nid, pos=Point(float(x), float(y)), energy=energy, alive=alive, segment=segment)


def seg2_nodes():
    # segment 2 of the 120/20 layout has centroid (50, 90); distances to it
    # are 3 m (id 1), 7 m (id 2), 5 m (id 3)
    return [
        node(1, 50.0, 93.0, 2),
        node(2, 50.0, 97.0, 2),
        node(3, 50.0, 85.0, 2),
    ]


def test_election_picks_closest_first(layout_120_20):
    assert elect_chs(layout_120_20, seg2_nodes(), 0) == {2: 1}


def test_election_rotates_by_rank(layout_120_20):
    # round 4 with 3 alive: rank 4 mod 3 = 1, the second-closest (5 m, id 3)
    assert elect_chs(layout_120_20, seg2_nodes(), 4) == {2: 3}


def test_election_single_node(layout_120_20):
    lone = [node(9, 90.0, 70.0, 3)]
    for round_idx in (0, 1, 17, 100):
        assert elect_chs(layout_120_20, lone, round_idx) == {3: 9}


def test_election_skips_inner_square_and_dead(layout_120_20):
    nodes = [
        node(0, 60.0, 60.0, 1),
        node(1, 50.0, 93.0, 2),
        node(2, 50.0, 97.0, 2, alive=False),
    ]
    assert elect_chs(layout_120_20, nodes, 1) == {2: 1}  # dead node 2 not in rotation


def test_election_tie_breaks_by_id(layout_120_20):
    nodes = [node(8, 50.0, 93.0, 2), node(4, 50.0, 87.0, 2)]  # both 3 m away
    assert elect_chs(layout_120_20, nodes, 0) == {2: 4}
    assert elect_chs(layout_120_20, nodes, 1) == {2: 8}


@pytest.mark.parametrize("m", range(1, 21))
def test_rotation_fairness(layout_120_20, m):
    rng = np.random.default_rng(100 + m)
    seg = layout_120_20.segment(3)
    nodes = [
        node(i, rng.uniform(seg.rect.lo.x, seg.rect.hi.x), rng.uniform(seg.rect.lo.y, seg.rect.hi.y), 3)
        for i in range(m)
    ]
    elected = [elect_chs(layout_120_20, nodes, r)[3] for r in range(m)]
    assert sorted(elected) == list(range(m))  # each node exactly once


def test_assign_members(layout_120_20):
    nodes = place_density_controlled(layout_120_20, 144, [1, 0], 0.5)
    chs = elect_chs(layout_120_20, nodes, 0)
    members, direct = assign_members(layout_120_20, nodes, chs)
    assert len(direct) == 16  # the whole inner square reports directly
    assert set(members) == set(chs.values())
    seg2_ch = chs[2]
    assert len(members[seg2_ch]) == 11  # 12 nodes minus the head
    for sid in (6, 7, 8, 9):
        assert len(members[chs[sid]]) == 19
    # membership is static: every member shares its head's segment
    by_id = {n.id: n for n in nodes}
    for ch, mids in members.items():
        for mid in mids:
            assert by_id[mid].segment == by_id[ch].segment


def test_membership_is_static_even_when_another_head_is_nearer(layout_120_20):
    # the segment-2 node at (79, 81) is 1.6 m from segment 3's head but must
    # still join its own segment's head 30 m away
    nodes = [
        node(1, 50.0, 90.0, 2),
        node(2, 79.0, 81.0, 2),
        node(3, 80.5, 80.5, 3),
    ]
    chs = elect_chs(layout_120_20, nodes, 0)
    assert chs == {2: 1, 3: 3}
    members, _ = assign_members(layout_120_20, nodes, chs)
    assert members[1] == [2]
    assert members[3] == []


def test_routing_full_layout(layout_120_20):
    nodes = place_density_controlled(layout_120_20, 144, [1, 0], 0.5)
    chs = elect_chs(layout_120_20, nodes, 0)
    hops = route_next_hop(layout_120_20, chs)
    assert len(hops) == 8
    for sid in (2, 3, 4, 5):
        assert hops[chs[sid]] == BS
    # outer heads relay through the middle head of the same pinwheel position
    for outer_sid, middle_sid in ((6, 2), (7, 3), (8, 4), (9, 5)):
        assert hops[chs[outer_sid]] == chs[middle_sid]


def test_routing_fallback_nearest_inner_head(layout_120_20):
    # no head in segment 2 (top middle): the outer top head goes to the
    # nearest middle head by segment centroid, which is segment 3
    # (|(50,110)-(90,70)| = 56.6 beats 63.2 for S5 and 82.5 for S4)
    chs = {3: 30, 4: 40, 5: 50, 6: 60}
    hops = route_next_hop(layout_120_20, chs)
    assert hops[60] == 30
    assert hops[30] == BS and hops[40] == BS and hops[50] == BS


def test_routing_fallback_to_bs(layout_120_20):
    # ring 2 fully dead: outer heads have no relay and hit the BS directly
    chs = {6: 60, 7: 70, 8: 80, 9: 90}
    hops = route_next_hop(layout_120_20, chs)
    assert all(hops[ch] == BS for ch in (60, 70, 80, 90))


def test_routing_is_inward_and_acyclic():
    layout = build_layout(240.0, 20.0)  # six rings, 21 segments
    rng = np.random.default_rng(77)
    ring_of_segment = {s.id: s.ring for s in layout.segments}
    for trial in range(25):
        # a random subset of ring>=2 segments still has heads
        chs = {}
        for seg in layout.segments:
            if seg.ring >= 2 and rng.random() < 0.6:
                chs[seg.id] = 1000 + seg.id  # synthetic head ids
        hops = route_next_hop(layout, chs)
        assert set(hops) == set(chs.values())
        seg_of_ch = {ch: sid for sid, ch in chs.items()}
        for ch, target in hops.items():
            if target == BS:
                continue
            src_ring = ring_of_segment[seg_of_ch[ch]]
            dst_ring = ring_of_segment[seg_of_ch[target]]
            assert dst_ring == src_ring - 1  # every hop moves one ring inward


def test_fixed_head_count_while_all_segments_alive(layout_120_20):
    nodes = place_density_controlled(layout_120_20, 144, [5, 0], 0.5)
    for round_idx in range(40):
        chs = elect_chs(layout_120_20, nodes, round_idx)
        assert len(chs) == 8  # 4(n-1) for n = 3
    big = build_layout(240.0, 20.0)
    big_nodes = place_density_controlled(big, 300, [5, 0], 0.5)
    assert len(elect_chs(big, big_nodes, 0)) == 20  # 4(n-1) for n = 6


def test_planner_round_plan(layout_120_20):
    planner = DdrPlanner(layout_120_20)
    nodes = place_density_controlled(layout_120_20, 144, [2, 0], 0.5)
    plan = planner.plan_round(nodes, 6)
    assert plan.round == 6
    assert set(plan.members) == set(plan.next_hop) == set(plan.ch_of_segment.values())
    assert len(plan.direct_nodes) == 16
    counted = len(plan.direct_nodes) + len(plan.members) + sum(len(v) for v in plan.members.values())
    assert counted == 144
