"""Symmetrical bidirectional anytime planner with an adaptively computed
lazy heuristic, plus the shared machinery its unidirectional baseline reuses.

Two role indices exist: role A is rooted at the start, role B at the goal
set. Each role owns a valid tree (collision-checked edges, true costs) and
a lazy tree (no collision checking, LPA*-style rhs/g heuristic values).
The "forward" designation alternates between roles via swap_roles(); data
never moves. The forward search of one role is guided by the opposing
role's lazy g-values, which reach across via recorded meet edges.

Lazy g-value slots are shared: lazy_g[r] of a vertex inside lazy tree r is
its native LPA* value; lazy_g[r] of a vertex in the other lazy tree is a
propagated value sourced through a meet edge and tagged with it, so that a
later collision on that meet can undo exactly the values it fed.
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np

from .nngraph import NeighborIndex
from .queues import INF, AddressablePQ, edge_key, lazy_vertex_key
from .sampling import SamplerConfig, SpaceSaturatedError, make_rng, sample_batch
from .space import ProblemDef, StateVec, heuristic_bounds, motion_valid, path_cost

A, B = 0, 1

_dist = math.dist


@dataclass(frozen=True)
class Termination:
    time_budget_ms: Optional[float] = None
    target_cost: Optional[float] = None
    max_iterations: Optional[int] = None

    def __post_init__(self):
        if self.time_budget_ms is None and self.target_cost is None and self.max_iterations is None:
            raise ValueError("at least one termination criterion must be set")


@dataclass(frozen=True)
class PlannerConfig:
    sampler: SamplerConfig = field(default_factory=SamplerConfig)
    eta: float = 1.001
    resolution: Optional[float] = None  # None: use the problem's
    termination: Termination = field(default_factory=lambda: Termination(time_budget_ms=1000.0))


@dataclass
class Solution:
    path: list[StateVec]
    cost: float
    found_at_ms: float
    iteration: int


class Vertex:
    __slots__ = (
        "id", "state", "coords", "ghat",
        "cost", "parent", "children",
        "lazy_rhs", "lazy_g", "lazy_parent", "lazy_children",
        "prop_src", "prop_down", "prop_chain", "prop_snapshot",
    )

    def __init__(self, vid: int, state: np.ndarray, ghat: tuple[float, float]):
        self.id = vid
        self.state = state
        self.coords = tuple(float(c) for c in state)
        self.ghat = ghat  # (straight-line to start, min straight-line to goals)
        self.cost = [INF, INF]
        self.parent: list[Optional[int]] = [None, None]
        self.children: list[set[int]] = [set(), set()]
        self.lazy_rhs = [INF, INF]
        self.lazy_g = [INF, INF]
        self.lazy_parent: list[Optional[int]] = [None, None]
        self.lazy_children: list[set[int]] = [set(), set()]
        # per-slot bookkeeping for propagated (meet-sourced) lazy_g values
        self.prop_src: list[Optional[tuple]] = [None, None]
        self.prop_down: list[Optional[int]] = [None, None]
        self.prop_chain: list[tuple] = [(), ()]
        self.prop_snapshot = [INF, INF]

    def reset_lazy(self):
        self.lazy_rhs = [INF, INF]
        self.lazy_g = [INF, INF]
        self.lazy_parent = [None, None]
        self.lazy_children = [set(), set()]
        self.prop_src = [None, None]
        self.prop_down = [None, None]
        self.prop_chain = [(), ()]
        self.prop_snapshot = [INF, INF]


class Planner:
    """Bidirectional planner (main loop = the symmetric anytime algorithm).

    The AIT*-style baseline subclasses this and pins the forward role,
    restricts updateState, and drives a batch-at-a-time loop instead.
    """

    name = "biait"
    bidirectional = True

    def __init__(self, problem: ProblemDef, cfg: PlannerConfig):
        self.problem = problem
        self.cfg = cfg
        if cfg.resolution is not None:
            self.problem = ProblemDef(
                dim=problem.dim, bounds=problem.bounds, start=problem.start,
                goals=problem.goals, obstacles=problem.obstacles, resolution=cfg.resolution,
            )
        self.rng = make_rng(cfg.sampler.seed)
        self.index = NeighborIndex(self.problem.dim, cfg.eta)
        self.vertices: dict[int, Vertex] = {}
        self._next_id = 0

        self.q_lazy = [AddressablePQ(), AddressablePQ()]
        self.q_edge = [AddressablePQ(), AddressablePQ()]
        # per-queue secondary indexes for exact re-keying
        self._edges_by_child = [dict(), dict()]
        self._edges_by_parent = [dict(), dict()]

        # lazy meet edges: unordered pair -> (vertex on A side, vertex on B side)
        self.lazy_meets: dict[tuple[int, int], tuple[int, int]] = {}
        self._meets_by_vertex: dict[int, set[tuple[int, int]]] = {}
        # propagated-value registry: (pair, slot) -> dependent vertex ids
        self._prop_deps: dict[tuple, set[int]] = {}
        # hop -> (vid, slot) whose recorded chain uses that hop; lets a
        # collision repair values whose chain predates tree restructuring
        self._chain_hops: dict[tuple[int, int], set[tuple[int, int]]] = {}

        # valid meet edges (candidate solutions), unordered pairs
        self.valid_meets: set[tuple[int, int]] = set()
        self._meet_members: set[int] = set()

        self.whitelist: set[tuple[int, int]] = set()
        self.blacklist: set[tuple[int, int]] = set()

        self.c_cur = INF
        self.active = A
        self.batch_idx = 0
        self.iterations = 0
        self.solutions: list[Solution] = []
        self.events: list[tuple] = []
        self.counters = {
            "n_collision_checks": 0,
            "n_lazy_pops_a": 0,
            "n_lazy_pops_b": 0,
            "n_edge_pops": 0,
            "n_samples": 0,
            "n_repair_events": 0,
            "repair_footprint_total": 0,
            "n_pruned": 0,
        }
        self.lazy_pops_at_first_finite_edge: Optional[int] = None
        self._t0 = None
        self._stop_reason: Optional[str] = None

        self.root_a = self._new_vertex(self.problem.start)
        self.vertices[self.root_a].cost[A] = 0.0
        self.roots_b: list[int] = []
        for g in self.problem.goals:
            vid = self._new_vertex(g)
            self.vertices[vid].cost[B] = 0.0
            self.roots_b.append(vid)
        self.index.insert_batch([(vid, self.vertices[vid].state) for vid in self.vertices])

    # ------------------------------------------------------------------
    # basic structure helpers

    def _new_vertex(self, state: StateVec) -> int:
        vid = self._next_id
        self._next_id += 1
        self.vertices[vid] = Vertex(vid, np.asarray(state, dtype=np.float64),
                                    heuristic_bounds(self.problem, state))
        return vid

    def roots(self, role: int) -> tuple[int, ...]:
        return (self.root_a,) if role == A else tuple(self.roots_b)

    def in_valid(self, vid: int, role: int) -> bool:
        v = self.vertices[vid]
        return v.parent[role] is not None or vid in self.roots(role)

    def in_lazy(self, vid: int, role: int) -> bool:
        v = self.vertices[vid]
        return v.lazy_parent[role] is not None or vid in self.roots(role)

    def consistent(self, vid: int, role: int) -> bool:
        v = self.vertices[vid]
        return v.lazy_rhs[role] == v.lazy_g[role]

    def settled(self, vid: int) -> bool:
        """Consistent in every lazy search that owns the vertex."""
        for role in (A, B):
            if self.in_lazy(vid, role) and not self.consistent(vid, role):
                return False
        return True

    @staticmethod
    def _pair(a: int, b: int) -> tuple[int, int]:
        return (a, b) if a < b else (b, a)

    def dist(self, a: int, b: int) -> float:
        return _dist(self.vertices[a].coords, self.vertices[b].coords)

    def nbrs(self, vid: int) -> list[int]:
        """Symmetrized kNN adjacency plus valid-tree links, minus removed edges."""
        v = self.vertices[vid]
        cand = set(self.index.neighbors(vid))
        cand.update(self.index.reverse_neighbors(vid))
        for role in (A, B):
            if v.parent[role] is not None:
                cand.add(v.parent[role])
            cand.update(v.children[role])
        cand.discard(vid)
        return sorted(u for u in cand if self._pair(vid, u) not in self.blacklist)

    # ------------------------------------------------------------------
    # keys

    def vertex_key(self, role: int, vid: int):
        v = self.vertices[vid]
        m = min(v.lazy_g[role], v.lazy_rhs[role])
        return lazy_vertex_key(m, v.ghat[1 - role])

    def edge_key_of(self, role: int, parent: int, child: int):
        p, c = self.vertices[parent], self.vertices[child]
        return edge_key(p.cost[role], self.dist(parent, child), c.lazy_g[1 - role])

    # ------------------------------------------------------------------
    # edge queue upkeep

    def _push_edge(self, role: int, parent: int, child: int) -> None:
        pair = (parent, child)
        key = self.edge_key_of(role, parent, child)
        if math.isfinite(self.c_cur) and key[0] >= self.c_cur:
            return
        fresh = pair not in self.q_edge[role]
        self.q_edge[role].push_or_update(pair, key)
        if fresh:
            self._edges_by_child[role].setdefault(child, set()).add(pair)
            self._edges_by_parent[role].setdefault(parent, set()).add(pair)

    def _drop_edge_entry(self, role: int, pair: tuple[int, int]) -> None:
        self._edges_by_child[role].get(pair[1], set()).discard(pair)
        self._edges_by_parent[role].get(pair[0], set()).discard(pair)

    def _remove_edge(self, role: int, pair: tuple[int, int]) -> None:
        if self.q_edge[role].remove(pair):
            self._drop_edge_entry(role, pair)

    def _rekey_edges_with_child(self, role: int, vid: int) -> None:
        for pair in sorted(self._edges_by_child[role].get(vid, ())):
            self.q_edge[role].push_or_update(pair, self.edge_key_of(role, *pair))

    def _rekey_edges_with_parent(self, role: int, vid: int) -> None:
        for pair in sorted(self._edges_by_parent[role].get(vid, ())):
            self.q_edge[role].push_or_update(pair, self.edge_key_of(role, *pair))

    def _clear_queues(self) -> None:
        for role in (A, B):
            self.q_lazy[role].clear()
            self.q_edge[role].clear()
            self._edges_by_child[role].clear()
            self._edges_by_parent[role].clear()

    # ------------------------------------------------------------------
    # lazy g writes (native and propagated) with exact re-keying

    def _set_lazy_g(self, slot: int, vid: int, value: float) -> None:
        v = self.vertices[vid]
        if v.lazy_g[slot] == value:
            return
        v.lazy_g[slot] = value
        # role (1 - slot) edge keys read lazy_g[slot] of their child
        self._rekey_edges_with_child(1 - slot, vid)

    def _chain_pairs(self, vid: int, slot: int):
        v = self.vertices[vid]
        chain = v.prop_chain[slot]
        pairs = [self._pair(a, b) for a, b in zip(chain, chain[1:])]
        if chain and v.prop_src[slot] is not None:
            other = v.prop_src[slot][0] if v.prop_src[slot][1] == chain[-1] else v.prop_src[slot][1]
            pairs.append(self._pair(chain[-1], other))
        return pairs

    def _clear_prop(self, slot: int, vid: int) -> None:
        v = self.vertices[vid]
        if v.prop_src[slot] is not None:
            self._prop_deps.get((v.prop_src[slot], slot), set()).discard(vid)
            for hop in self._chain_pairs(vid, slot):
                self._chain_hops.get(hop, set()).discard((vid, slot))
        v.prop_src[slot] = None
        v.prop_down[slot] = None
        v.prop_chain[slot] = ()
        v.prop_snapshot[slot] = INF

    def _set_propagated(self, slot: int, vid: int, value: float, src: tuple,
                        down: Optional[int], chain: tuple, snapshot: float) -> None:
        v = self.vertices[vid]
        self._clear_prop(slot, vid)
        if math.isinf(value):
            self._set_lazy_g(slot, vid, INF)
            return
        v.prop_src[slot] = src
        v.prop_down[slot] = down
        v.prop_chain[slot] = chain
        v.prop_snapshot[slot] = snapshot
        self._prop_deps.setdefault((src, slot), set()).add(vid)
        for hop in self._chain_pairs(vid, slot):
            self._chain_hops.setdefault(hop, set()).add((vid, slot))
        self._set_lazy_g(slot, vid, value)

    # ------------------------------------------------------------------
    # batch handling

    def add_samples(self, states: list[StateVec]) -> list[int]:
        ids = [self._new_vertex(s) for s in states]
        self.index.insert_batch([(vid, self.vertices[vid].state) for vid in ids])
        self.counters["n_samples"] += len(ids)
        return ids

    def init_batch(self) -> None:
        """Rebuild both lazy trees from scratch, copying the valid trees in,
        and reseed the edge queues from the roots."""
        self._clear_queues()
        self.lazy_meets.clear()
        self._meets_by_vertex.clear()
        self._prop_deps.clear()
        self._chain_hops.clear()
        for vid in self.vertices:
            self.vertices[vid].reset_lazy()

        forward = self.active
        order = (forward, 1 - forward) if self.bidirectional else (B,)
        for vid in sorted(self.vertices):
            v = self.vertices[vid]
            for role in order:
                if self.in_valid(vid, role):
                    v.lazy_rhs[role] = v.cost[role]
                    if v.parent[role] is not None:
                        v.lazy_parent[role] = v.parent[role]
                        self.vertices[v.parent[role]].lazy_children[role].add(vid)
                    self.q_lazy[role].push_or_update(vid, self.vertex_key(role, vid))
                    break

        for role in (A, B) if self.bidirectional else (A,):
            for root in self.roots(role):
                self.expand(role, root)
        self._log("batch", self.batch_idx, len(self.vertices))

    # ------------------------------------------------------------------
    # lazy search (LPA*-style)

    def lazy_search_terminate(self, role: Optional[int] = None) -> bool:
        role = self.active if role is None else role
        if not len(self.q_lazy[role]):
            return True
        edge_queues = (A, B) if self.bidirectional else (A,)
        best_edges = []
        for r in edge_queues:
            top = self.q_edge[r].peek()
            if top is None:
                return True
            best_edges.append(top)
        kv = self.q_lazy[role].peek_key()[0]
        ke = min(key[0] for _, key in best_edges)
        if kv > ke:
            return all(self.settled(u) and self.settled(v) for (u, v), _ in best_edges)
        return False

    def lazy_search_step(self, role: Optional[int] = None) -> None:
        role = self.active if role is None else role
        vid, _ = self.q_lazy[role].pop_best()
        self.counters["n_lazy_pops_a" if role == A else "n_lazy_pops_b"] += 1
        self._log("lazy_pop", role, vid)
        v = self.vertices[vid]
        if v.lazy_rhs[role] < v.lazy_g[role]:
            self._set_lazy_g(role, vid, v.lazy_rhs[role])
        else:
            self._set_lazy_g(role, vid, INF)
            self.update_state(role, vid)
        for u in self.nbrs(vid):
            self.update_state(role, u)

    def _relaxable(self, role: int, vid: int) -> bool:
        if vid in self.roots(role):
            return False
        opp = 1 - role
        if self.bidirectional:
            return not (self.in_lazy(vid, opp) or self.in_valid(vid, opp))
        return True

    def update_state(self, role: int, vid: int) -> None:
        """Recompute rhs/lazy parent of vid in the given lazy search, or, for
        vertices owned by the opposing side, record meet edges instead."""
        v = self.vertices[vid]
        opp = 1 - role
        if self._relaxable(role, vid):
            best_val, best_parent = INF, None
            for u in self.nbrs(vid):
                g = self.vertices[u].lazy_g[role]
                if math.isinf(g):
                    continue
                cand = g + self.dist(vid, u)
                if cand < best_val:
                    best_val, best_parent = cand, u
            old = v.lazy_parent[role]
            if old is not None and old != best_parent:
                self.vertices[old].lazy_children[role].discard(vid)
            v.lazy_rhs[role] = best_val
            v.lazy_parent[role] = best_parent
            if best_parent is not None and old != best_parent:
                self.vertices[best_parent].lazy_children[role].add(vid)
            if v.lazy_rhs[role] != v.lazy_g[role]:
                self.q_lazy[role].push_or_update(vid, self.vertex_key(role, vid))
            else:
                self.q_lazy[role].remove(vid)
        elif self.bidirectional and (self.in_lazy(vid, opp) or self.in_valid(vid, opp)):
            if not self.consistent(vid, opp):
                return
            for u in self.nbrs(vid):
                if not (self.in_lazy(u, role) or self.in_valid(u, role)):
                    continue
                if not self.consistent(u, role):
                    continue
                self._record_lazy_meet(u, vid, role)

    def _record_lazy_meet(self, own: int, other: int, role: int) -> None:
        """own is on the active (role) side, other on the opposing side."""
        pair = self._pair(own, other)
        sides = (own, other) if role == A else (other, own)
        if pair not in self.lazy_meets:
            self._log("meet", "lazy", pair[0], pair[1])
        self.lazy_meets[pair] = sides
        self._meets_by_vertex.setdefault(own, set()).add(pair)
        self._meets_by_vertex.setdefault(other, set()).add(pair)
        self.lazy_trees_meet(own, other, role)

    def lazy_trees_meet(self, own: int, other: int, role: int) -> None:
        """Share heuristic across a meet: the opposing g-value flows from each
        endpoint up the other endpoint's lazy parent chain while it improves."""
        pair = self._pair(own, other)
        c = self.dist(own, other)
        opp = 1 - role
        # own (in tree `role`) receives the opposing root's heuristic
        self._propagate(role, own, self.vertices[other].lazy_g[opp] + c,
                        pair, other, (own,), self.vertices[other].lazy_g[opp])
        # other (in tree `opp`) receives this side's root heuristic
        self._propagate(opp, other, self.vertices[own].lazy_g[role] + c,
                        pair, own, (other,), self.vertices[own].lazy_g[role])

    def _propagate(self, tree_role: int, vid: int, value: float, src: tuple,
                   down: int, chain: tuple, snapshot: float) -> None:
        slot = 1 - tree_role
        while True:
            if math.isinf(value) or not self.in_lazy(vid, tree_role):
                return
            v = self.vertices[vid]
            if value >= v.lazy_g[slot]:
                return
            self._set_propagated(slot, vid, value, src, down, chain, snapshot)
            parent = v.lazy_parent[tree_role]
            if parent is None:
                return
            value += self.dist(parent, vid)
            down = vid
            chain = (parent,) + chain
            vid = parent

    # ------------------------------------------------------------------
    # forward (valid-tree) search

    def forward_search_may_improve(self, role: Optional[int] = None) -> bool:
        role = self.active if role is None else role
        key = self.q_edge[role].peek_key()
        return key is not None and key[0] < self.c_cur

    def _motion_ok(self, a: int, b: int) -> bool:
        pair = self._pair(a, b)
        if pair in self.whitelist:
            return True
        if pair in self.blacklist:
            return False
        ok = motion_valid(self.problem, self.vertices[a].state, self.vertices[b].state)
        self.counters["n_collision_checks"] += 1
        self._log("check", pair[0], pair[1], ok)
        if ok:
            self.whitelist.add(pair)
        else:
            self.blacklist.add(pair)
            for role in (A, B):
                self._remove_edge(role, (a, b))
                self._remove_edge(role, (b, a))
        return ok

    def forward_search_step(self, role: Optional[int] = None) -> None:
        role = self.active if role is None else role
        (p, c), _ = self.q_edge[role].pop_best()
        self._drop_edge_entry(role, (p, c))
        self.counters["n_edge_pops"] += 1
        self._log("edge_pop", role, p, c)
        vp, vc = self.vertices[p], self.vertices[c]
        opp = 1 - role
        if vc.parent[role] == p:
            self.expand(role, c)
            return
        if not vp.cost[role] + self.dist(p, c) < vc.cost[role]:
            return
        if self._motion_ok(p, c):
            d = self.dist(p, c)
            if vp.cost[role] + d + vc.lazy_g[opp] < self.c_cur:
                if self.in_valid(c, opp):
                    pair = self._pair(p, c)
                    if pair not in self.valid_meets:
                        self.valid_meets.add(pair)
                        self._meet_members.update(pair)
                        self._log("meet", "valid", pair[0], pair[1])
                    self.update_solution()
                if vp.cost[role] + d < vc.cost[role]:
                    self._attach(role, p, c)
                    self.expand(role, c)
        else:
            self.update_lazy_search(p, c)

    def _attach(self, role: int, parent: int, child: int) -> None:
        """Insert or rewire child under parent and refresh subtree costs."""
        vc = self.vertices[child]
        old = vc.parent[role]
        if old is not None:
            self.vertices[old].children[role].discard(child)
        vc.parent[role] = parent
        self.vertices[parent].children[role].add(child)
        touched_meet = False
        stack = [child]
        while stack:
            vid = stack.pop()
            v = self.vertices[vid]
            v.cost[role] = self.vertices[v.parent[role]].cost[role] + self.dist(v.parent[role], vid)
            self._rekey_edges_with_parent(role, vid)
            if vid in self._meet_members:
                touched_meet = True
            stack.extend(sorted(v.children[role]))
        if touched_meet and self.valid_meets:
            self.update_solution()

    def expand(self, role: int, vid: int) -> None:
        """Queue candidate edges from vid: graph neighbors plus this role's
        lazy and valid children, excluding the valid parent and removed edges."""
        v = self.vertices[vid]
        cand = set(self.index.neighbors(vid))
        cand.update(self.index.reverse_neighbors(vid))
        cand.update(v.lazy_children[role])
        cand.update(v.children[role])
        cand.discard(vid)
        if v.parent[role] is not None:
            cand.discard(v.parent[role])
        for u in sorted(cand):
            if self._pair(vid, u) in self.blacklist:
                continue
            self._push_edge(role, vid, u)

    # ------------------------------------------------------------------
    # collision repair

    def update_lazy_search(self, a: int, b: int) -> None:
        """A checked edge (a, b) collided: tear out every lazy structure that
        relied on it and requeue the frontier of the damage."""
        va, vb = self.vertices[a], self.vertices[b]
        repaired = False
        for role in (A, B):
            if vb.lazy_parent[role] == a:
                repaired = True
                self._invalidate_subtree(role, b)
            elif va.lazy_parent[role] == b:
                repaired = True
                self._invalidate_subtree(role, a)
        pair = self._pair(a, b)
        if pair in self.lazy_meets:
            repaired = True
            self._remove_meet(pair)
        stale = self._chain_hops.get(pair)
        if stale:
            # recorded chains that still route through the collided pair
            # (possible after tree restructuring): recompute them too
            repaired = True
            by_slot: dict[int, list[int]] = {}
            for vid, slot in sorted(stale):
                by_slot.setdefault(slot, []).append(vid)
            for slot, vids in sorted(by_slot.items()):
                self._recompute_propagated(slot, vids)
        if repaired:
            self.counters["n_repair_events"] += 1

    def _invalidate_subtree(self, role: int, top: int) -> None:
        """Reset the lazy subtree rooted at top (values, links, meets), then
        requeue every reset vertex children-first. The opposing lazy tree's
        structure is never modified here; update_predecessor only rewrites
        its propagated values."""
        order = []
        stack = [top]
        while stack:
            vid = stack.pop()
            order.append(vid)
            stack.extend(sorted(self.vertices[vid].lazy_children[role], reverse=True))
        for vid in order:
            v = self.vertices[vid]
            v.lazy_rhs[role] = INF
            self._set_lazy_g(role, vid, INF)
            if v.lazy_parent[role] is not None:
                self.vertices[v.lazy_parent[role]].lazy_children[role].discard(vid)
                v.lazy_parent[role] = None
            self.q_lazy[role].remove(vid)
            for pair in sorted(self._meets_by_vertex.get(vid, set())):
                self._remove_meet(pair)
        self.counters["repair_footprint_total"] += len(order)
        for vid in reversed(order):
            self.update_state(role, vid)

    def _remove_meet(self, pair: tuple[int, int]) -> None:
        self.lazy_meets.pop(pair, None)
        for vid in pair:
            self._meets_by_vertex.get(vid, set()).discard(pair)
        self.update_predecessor(pair)

    def update_predecessor(self, pair: tuple[int, int]) -> None:
        """Recompute every propagated value that was sourced through the
        removed meet edge, from surviving meets and unaffected children."""
        for slot in (A, B):
            deps = self._prop_deps.pop((pair, slot), None)
            if deps:
                self._recompute_propagated(slot, sorted(deps))

    def _recompute_propagated(self, slot: int, deps: list[int]) -> None:
        tree_role = 1 - slot
        dep_set = set(deps)
        best: dict[int, tuple] = {}

        def base_candidates(vid: int):
            v = self.vertices[vid]
            val, src, down, chain, snap = INF, None, None, (), INF
            for pk in sorted(self._meets_by_vertex.get(vid, set())):
                sides = self.lazy_meets.get(pk)
                if sides is None or sides[tree_role] != vid:
                    continue
                partner = sides[slot]
                cand = self.vertices[partner].lazy_g[slot] + self.dist(vid, partner)
                if cand < val:
                    val, src, down = cand, pk, partner
                    chain, snap = (vid,), self.vertices[partner].lazy_g[slot]
            for ch in sorted(v.lazy_children[tree_role]):
                if ch in dep_set:
                    continue
                u = self.vertices[ch]
                if math.isinf(u.lazy_g[slot]) or u.prop_src[slot] is None:
                    continue
                cand = u.lazy_g[slot] + self.dist(vid, ch)
                if cand < val:
                    val, src, down = cand, u.prop_src[slot], ch
                    chain, snap = (vid,) + u.prop_chain[slot], u.prop_snapshot[slot]
            return val, src, down, chain, snap

        heap = []
        for vid in deps:
            best[vid] = base_candidates(vid)
            heapq.heappush(heap, (best[vid][0], vid))
        settled: set[int] = set()
        while heap:
            val, vid = heapq.heappop(heap)
            if vid in settled or val > best[vid][0]:
                continue
            settled.add(vid)
            _, src, down, chain, snap = best[vid]
            self._set_propagated(slot, vid, val, src, down, chain, snap)
            parent = self.vertices[vid].lazy_parent[tree_role]
            if parent in dep_set and parent not in settled and not math.isinf(val):
                cand = val + self.dist(parent, vid)
                if cand < best[parent][0]:
                    best[parent] = (cand, src, vid, (parent,) + chain, snap)
                    heapq.heappush(heap, (cand, parent))

    # ------------------------------------------------------------------
    # solutions

    def update_solution(self) -> None:
        """Re-derive the best valid meet by linear scan (member costs change
        without queue notifications) and emit on strict improvement."""
        best_cost, best_join = INF, None
        for pair in sorted(self.valid_meets):
            u, v = pair
            c = self.dist(u, v)
            cu, cv = self.vertices[u], self.vertices[v]
            for sa, sb in ((u, v), (v, u)):
                cand = self.vertices[sa].cost[A] + c + self.vertices[sb].cost[B]
                if cand < best_cost:
                    best_cost, best_join = cand, (sa, sb)
        if best_join is None or best_cost >= self.c_cur:
            return
        self.c_cur = best_cost
        sa, sb = best_join
        path = [self.vertices[x].state for x in reversed(self._trace(sa, A))]
        path.extend(self.vertices[x].state for x in self._trace(sb, B))
        elapsed = 0.0 if self._t0 is None else (time.perf_counter() - self._t0) * 1000.0
        sol = Solution(path=path, cost=best_cost, found_at_ms=elapsed, iteration=self.iterations)
        self.solutions.append(sol)
        self._log("solution", best_cost, self.iterations)

    def _trace(self, vid: int, role: int) -> list[int]:
        out = [vid]
        seen = {vid}
        while self.vertices[vid].parent[role] is not None:
            vid = self.vertices[vid].parent[role]
            if vid in seen:
                raise RuntimeError("cycle in valid tree")
            seen.add(vid)
            out.append(vid)
        return out

    @property
    def best_path(self) -> Optional[list[StateVec]]:
        return self.solutions[-1].path if self.solutions else None

    # ------------------------------------------------------------------
    # pruning and batching

    def prune(self) -> None:
        """Drop samples that cannot improve the current solution; valid-tree
        descendants of dropped vertices that survive the bound are demoted
        to plain samples."""
        if math.isinf(self.c_cur):
            return
        doomed = {vid for vid, v in self.vertices.items()
                  if v.ghat[0] + v.ghat[1] > self.c_cur}
        doomed -= set(self.roots(A)) | set(self.roots(B))
        if not doomed:
            return
        for role in (A, B):
            stack = [c for vid in sorted(doomed)
                     for c in sorted(self.vertices[vid].children[role])]
            while stack:
                vid = stack.pop()
                v = self.vertices[vid]
                stack.extend(sorted(v.children[role]))
                v.cost[role] = INF
                v.parent[role] = None
                v.children[role] = set()
            for vid in sorted(doomed):
                v = self.vertices[vid]
                if v.parent[role] is not None:
                    self.vertices[v.parent[role]].children[role].discard(vid)
                    v.parent[role] = None
                v.children[role] = set()
                v.cost[role] = INF
        for vid in doomed:
            del self.vertices[vid]
        self.valid_meets = {pk for pk in self.valid_meets
                            if pk[0] in self.vertices and pk[1] in self.vertices}
        self._meet_members = {v for pk in self.valid_meets for v in pk}
        self.index.remove(sorted(doomed))
        self.counters["n_pruned"] += len(doomed)
        self._log("prune", len(doomed))

    def take_batch(self) -> None:
        """prune + sample + init_batch: the refill arm of the main loop."""
        self.prune()
        stats: dict = {}
        states = sample_batch(self.problem, self.cfg.sampler, self.batch_idx,
                              self.c_cur, self.best_path, self.rng, stats)
        self.add_samples(states)
        self.batch_idx += 1
        self.init_batch()

    def swap_roles(self) -> None:
        self.active = 1 - self.active

    # ------------------------------------------------------------------
    # driving loop

    def _terminate(self) -> bool:
        t = self.cfg.termination
        if t.max_iterations is not None and self.iterations >= t.max_iterations:
            self._stop_reason = "iterations"
            return True
        if t.target_cost is not None and self.solutions and self.c_cur <= t.target_cost:
            self._stop_reason = "target"
            return True
        if t.time_budget_ms is not None:
            elapsed = (time.perf_counter() - self._t0) * 1000.0
            if elapsed >= t.time_budget_ms:
                self._stop_reason = "time"
                return True
        return False

    def plan(self) -> Iterator[Solution]:
        """Run the main loop, yielding each strictly-improved solution."""
        self._t0 = time.perf_counter()
        emitted = 0
        while not self._terminate():
            self.iterations += 1
            if not self.lazy_search_terminate():
                self.lazy_search_step()
            elif self.forward_search_may_improve():
                self.forward_search_step()
            else:
                try:
                    self.take_batch()
                except SpaceSaturatedError:
                    self._stop_reason = "saturated"
                    break
            self.swap_roles()
            self._note_edge_progress()
            while emitted < len(self.solutions):
                yield self.solutions[emitted]
                emitted += 1

    def solve(self) -> dict:
        for _ in self.plan():
            pass
        return self.report()

    def report(self) -> dict:
        status = "solved" if self.solutions else (
            "timeout" if self._stop_reason == "time" else "failed")
        out = {
            "planner": self.name,
            "status": status,
            "cost": self.c_cur,
            "solutions": self.solutions,
            "iterations": self.iterations,
            "counters": dict(self.counters),
            "lazy_pops_at_first_finite_edge": self.lazy_pops_at_first_finite_edge,
            "stop_reason": self._stop_reason,
        }
        return out

    def _note_edge_progress(self) -> None:
        if self.lazy_pops_at_first_finite_edge is not None:
            return
        queues = (A, B) if self.bidirectional else (A,)
        for r in queues:
            key = self.q_edge[r].peek_key()
            if key is not None and math.isfinite(key[0]):
                self.lazy_pops_at_first_finite_edge = (
                    self.counters["n_lazy_pops_a"] + self.counters["n_lazy_pops_b"])
                return

    def _log(self, *event) -> None:
        self.events.append(event)

    # ------------------------------------------------------------------
    # test/debug support

    def lazy_run_to_quiescence(self, role: int, cap: int = 1_000_000) -> None:
        """Drain one lazy queue completely (test harness; the planner itself
        stops earlier via lazy_search_terminate)."""
        n = 0
        while len(self.q_lazy[role]):
            self.lazy_search_step(role)
            n += 1
            if n > cap:
                raise RuntimeError("lazy search failed to quiesce")

    def check_invariants(self, dense_oracle: bool = False) -> None:
        from . import checks

        checks.check_planner_invariants(self, dense_oracle=dense_oracle)
