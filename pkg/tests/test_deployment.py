"""Placement: area-proportional quotas and uniform scatter."""

import numpy as np
import pytest

from ddrsim.deployment import (
    ROLE_MEMBER,
    place_density_controlled,
    place_uniform_random,
    segment_quotas,
)
from ddrsim.errors import ConfigError
from ddrsim.geometry import build_layout, segment_of


def test_quotas_144_exact(layout_120_20):
    quotas = segment_quotas(layout_120_20, 144)
    assert quotas[1] == 16
    assert all(quotas[sid] == 12 for sid in (2, 3, 4, 5))
    assert all(quotas[sid] == 20 for sid in (6, 7, 8, 9))


def test_quotas_nine_nodes(layout_120_20):
    # Hand largest-remainder run: shares 1.0 / 0.75 x4 / 1.25 x4; floors
    # 1/0/1; the four leftovers go to the 0.75 remainders (middle ring).
    quotas = segment_quotas(layout_120_20, 9)
    assert quotas == {sid: 1 for sid in range(1, 10)}


def test_quota_exactness_sweep(layout_120_20):
    for n in range(9, 501):
        quotas = segment_quotas(layout_120_20, n)
        assert sum(quotas.values()) == n
        assert all(q >= 0 for q in quotas.values())


def test_quota_exactness_four_rings():
    layout = build_layout(134.0, 16.75)
    for n in range(13, 200, 7):
        assert sum(segment_quotas(layout, n).values()) == n


def test_quota_remainder_tie_prefers_smaller_id(layout_120_20):
    # 1000 nodes: shares 111.11 / 83.33 x4 / 138.89 x4 -> floors sum 995,
    # five leftovers. The four outer remainders (0.89) win first; the last
    # leftover faces a four-way middle tie (0.33) and lands on S2.
    quotas = segment_quotas(layout_120_20, 1000)
    assert quotas == {1: 111, 2: 84, 3: 83, 4: 83, 5: 83, 6: 139, 7: 139, 8: 139, 9: 139}


def test_quotas_require_one_node_per_segment(layout_120_20):
    with pytest.raises(ConfigError):
        segment_quotas(layout_120_20, 8)


def test_density_controlled_placement(layout_120_20):
    nodes = place_density_controlled(layout_120_20, 144, [7, 0], 0.5)
    assert len(nodes) == 144
    assert [n.id for n in nodes] == list(range(144))
    for node in nodes:
        seg = layout_120_20.segment(node.segment)
        assert seg.rect.contains(node.pos)
        assert segment_of(layout_120_20, node.pos) == node.segment
        assert node.alive and node.energy == 0.5 and node.role == ROLE_MEMBER
    # ids are assigned in segment order, so quota blocks are contiguous
    assert [n.segment for n in nodes[:16]] == [1] * 16
    assert [n.segment for n in nodes[16:28]] == [2] * 12


def test_density_controlled_deterministic(layout_120_20):
    a = place_density_controlled(layout_120_20, 144, [3, 0], 0.5)
    b = place_density_controlled(layout_120_20, 144, [3, 0], 0.5)
    assert a == b
    c = place_density_controlled(layout_120_20, 144, [4, 0], 0.5)
    assert a != c


def test_density_stays_uniform_at_1000(layout_120_20):
    nodes = place_density_controlled(layout_120_20, 1000, [11, 0], 0.5)
    overall = 1000 / 14400.0
    counts: dict[int, int] = {}
    for n in nodes:
        counts[n.segment] = counts.get(n.segment, 0) + 1
    for seg in layout_120_20.segments:
        density = counts[seg.id] / seg.area
        assert abs(density - overall) / overall < 0.05


def test_density_controlled_rejects_bad_energy(layout_120_20):
    with pytest.raises(ConfigError):
        place_density_controlled(layout_120_20, 144, [1, 0], 0.0)


def test_uniform_random_containment_and_determinism():
    nodes = place_uniform_random(100.0, 1, [5, 0])
    assert len(nodes) == 1
    assert 0.0 <= nodes[0].pos.x <= 100.0 and 0.0 <= nodes[0].pos.y <= 100.0
    a = place_uniform_random(100.0, 100, [5, 0])
    b = place_uniform_random(100.0, 100, [5, 0])
    assert a == b


def test_uniform_random_quadrant_balance():
    nodes = place_uniform_random(100.0, 10_000, [9, 0])
    quads = np.zeros(4, dtype=int)
    for n in nodes:
        quads[(n.pos.x >= 50.0) * 2 + (n.pos.y >= 50.0)] += 1
    # binomial 3-sigma bound: 2500 +- 3*sqrt(10000*0.25*0.75) ~ 2500 +- 130
    assert all(abs(int(q) - 2500) <= 150 for q in quads)


def test_uniform_random_segment_tagging(layout_120_20):
    tagged = place_uniform_random(120.0, 50, [2, 0], layout=layout_120_20)
    for n in tagged:
        assert n.segment == segment_of(layout_120_20, n.pos)
    untagged = place_uniform_random(120.0, 50, [2, 0])
    assert all(n.segment is None for n in untagged)


def test_uniform_random_rejects_bad_args():
    with pytest.raises(ConfigError):
        place_uniform_random(100.0, 0, [1, 0])
    with pytest.raises(ConfigError):
        place_uniform_random(100.0, 5, [1, 0], initial_energy=-1.0)
