"""Baseline cluster-head election schemes.

LEACH: every eligible node self-elects each round with the rotating
threshold probability; a node that served sits out the rest of the epoch
(round(1/p) rounds). Members join the nearest head, heads report straight
to the base station, and a headless round degrades to all-direct.

LEACH-C: a centralized scheme. Nodes at or above the mean residual energy
are candidates; k = max(1, round(p * alive)) heads are picked by a
deterministic greedy k-medoids (farthest-point seeding, then one
assign-and-recenter pass). No randomness is involved.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .deployment import NodeState
from .errors import ConfigError
from .geometry import Point
from .plan import BS, RoundPlan


@dataclass(frozen=True)
class LeachParams:
    """Election parameters; p is the target cluster-head fraction."""

    p: float = 0.05

    def __post_init__(self) -> None:
        if not 0.0 < self.p < 1.0:
            raise ConfigError(f"cluster-head fraction p must be in (0, 1), got {self.p}")

    @property
    def epoch(self) -> int:
        return int(round(1.0 / self.p))


def leach_threshold(p: float, round_idx: int, eligible: bool) -> float:
    """Self-election threshold for one node this round.

    Zero for nodes that already served this epoch; otherwise
    p / (1 - p * (round mod round(1/p))), clamped to 1 so the last round of
    an epoch elects every leftover eligible node.
    """
    if not eligible:
        return 0.0
    epoch = int(round(1.0 / p))
    t = p / (1.0 - p * (round_idx % epoch))
    return min(t, 1.0)


def _cluster_plan(nodes: list[NodeState], ch_ids: list[int], round_idx: int) -> RoundPlan:
    """Assemble a plan where members join the nearest head and heads hit the BS.

    Distance ties resolve to the smaller head id.
    """
    ch_ids = sorted(ch_ids)
    ch_set = set(ch_ids)
    by_id = {n.id: n for n in nodes}
    member_nodes = [n for n in nodes if n.alive and n.id not in ch_set]
    members: dict[int, list[int]] = {ch: [] for ch in ch_ids}
    if member_nodes:
        mpos = np.array([(n.pos.x, n.pos.y) for n in member_nodes])
        cpos = np.array([(by_id[ch].pos.x, by_id[ch].pos.y) for ch in ch_ids])
        # argmin keeps the first (= smallest id) column on exact ties
        d2 = ((mpos[:, None, :] - cpos[None, :, :]) ** 2).sum(axis=2)
        nearest = d2.argmin(axis=1)
        for node, idx in zip(member_nodes, nearest):
            members[ch_ids[int(idx)]].append(node.id)
    return RoundPlan(
        round=round_idx,
        members=members,
        next_hop={ch: BS for ch in ch_ids},
    )


class LeachPlanner:
    """Distributed probabilistic election with epoch bookkeeping."""

    def __init__(self, params: LeachParams, rng: np.random.Generator):
        self.params = params
        self.rng = rng
        self._served: set[int] = set()

    def plan_round(self, nodes: list[NodeState], round_idx: int) -> RoundPlan:
        if round_idx % self.params.epoch == 0:
            self._served.clear()
        alive = [n for n in nodes if n.alive]
        threshold = leach_threshold(self.params.p, round_idx, True)
        eligible = [n for n in alive if n.id not in self._served]
        draws = self.rng.random(len(eligible))
        ch_ids = [n.id for n, u in zip(eligible, draws) if u < threshold]
        self._served.update(ch_ids)
        if not ch_ids:
            return RoundPlan(round=round_idx, direct_nodes=[n.id for n in alive])
        return _cluster_plan(nodes, ch_ids, round_idx)


def leach_round_plan(
    nodes: list[NodeState],
    params: LeachParams,
    rng: np.random.Generator,
    round_idx: int = 0,
    served: set[int] | None = None,
) -> RoundPlan:
    """One LEACH round in isolation; ``served`` is the epoch's used-up set."""
    planner = LeachPlanner(params, rng)
    if served is not None:
        planner._served = served
    return planner.plan_round(nodes, round_idx)


class LeachCPlanner:
    """Centralized energy-aware election; deterministic, no RNG."""

    def __init__(self, params: LeachParams, bs_pos: Point):
        self.params = params
        self.bs = bs_pos
        self._dist: np.ndarray | None = None
        self._bs_dist: np.ndarray | None = None

    def _ensure_cache(self, nodes: list[NodeState]) -> None:
        if self._dist is not None:
            return
        if [n.id for n in nodes] != list(range(len(nodes))):
            raise ConfigError("node ids must be contiguous from 0 for LEACH-C planning")
        pos = np.array([(n.pos.x, n.pos.y) for n in nodes])
        delta = pos[:, None, :] - pos[None, :, :]
        self._dist = np.sqrt((delta ** 2).sum(axis=2))
        self._bs_dist = np.sqrt(((pos - (self.bs.x, self.bs.y)) ** 2).sum(axis=1))

    def _select_heads(self, nodes: list[NodeState]) -> list[int]:
        self._ensure_cache(nodes)
        dist = self._dist
        alive_ids = np.array([n.id for n in nodes if n.alive])
        energies = np.array([n.energy for n in nodes if n.alive])
        mean_energy = energies.mean()
        candidates = alive_ids[energies >= mean_energy]
        k = max(1, int(round(self.params.p * len(alive_ids))))
        k = min(k, len(candidates))

        # Farthest-point seeding: start from the candidate farthest from the
        # BS, then repeatedly take the candidate farthest from the chosen set.
        # argmax keeps the first (= smallest id) index on ties.
        chosen = [int(candidates[int(np.argmax(self._bs_dist[candidates]))])]
        while len(chosen) < k:
            min_d = dist[np.ix_(candidates, chosen)].min(axis=1)
            chosen.append(int(candidates[int(np.argmax(min_d))]))

        # One refinement pass: assign everyone to the nearest seed, then move
        # each seed to the candidate of its cluster minimizing total member
        # distance.
        seeds = sorted(chosen)
        assign = dist[np.ix_(alive_ids, seeds)].argmin(axis=1)
        cand_set = set(int(c) for c in candidates)
        refined = []
        for j, seed in enumerate(seeds):
            cluster = alive_ids[assign == j]
            options = np.array([c for c in cluster if int(c) in cand_set])
            if len(options) == 0:
                # Co-located seeds can leave a cluster without candidates.
                refined.append(seed)
                continue
            costs = dist[np.ix_(options, cluster)].sum(axis=1)
            refined.append(int(options[int(np.argmin(costs))]))
        return sorted(set(refined))

    def plan_round(self, nodes: list[NodeState], round_idx: int) -> RoundPlan:
        if not any(n.alive for n in nodes):
            return RoundPlan(round=round_idx)
        ch_ids = self._select_heads(nodes)
        return _cluster_plan(nodes, ch_ids, round_idx)


def leachc_round_plan(
    nodes: list[NodeState],
    params: LeachParams,
    bs_pos: Point,
    round_idx: int = 0,
) -> RoundPlan:
    """One LEACH-C round in isolation."""
    return LeachCPlanner(params, bs_pos).plan_round(nodes, round_idx)
