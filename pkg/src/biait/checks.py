"""Structural invariant assertions and search oracles.

Used by the test suite and by Planner.check_invariants(); every check here
re-derives its expectation independently of the code path it validates
(brute-force scans, chain recomputation, Dijkstra over the explicit graph).
"""

from __future__ import annotations

import heapq
import math

from .planner import A, B, Planner
from .space import motion_param_grid, path_cost

TOL = 1e-9


def graph_adjacency(pl: Planner) -> dict[int, tuple[int, ...]]:
    """Symmetrized neighbor graph plus valid-tree links, minus removed edges."""
    adj: dict[int, set[int]] = {vid: set() for vid in pl.vertices}
    for vid in pl.vertices:
        for u in pl.nbrs(vid):
            adj[vid].add(u)
            adj[u].add(vid)
    return {vid: tuple(sorted(us)) for vid, us in adj.items()}


def dijkstra(pl: Planner, sources: tuple[int, ...],
             adj: dict[int, tuple[int, ...]] | None = None) -> dict[int, float]:
    adj = graph_adjacency(pl) if adj is None else adj
    dist = {vid: math.inf for vid in pl.vertices}
    heap = []
    for s in sources:
        dist[s] = 0.0
        heapq.heappush(heap, (0.0, s))
    while heap:
        d, vid = heapq.heappop(heap)
        if d > dist[vid]:
            continue
        for u in adj[vid]:
            nd = d + pl.dist(vid, u)
            if nd < dist[u]:
                dist[u] = nd
                heapq.heappush(heap, (nd, u))
    return dist


def check_tree_structure(pl: Planner) -> None:
    """Valid trees: checked edges only, coherent costs, consistent links."""
    for vid, v in pl.vertices.items():
        for role in (A, B):
            p = v.parent[role]
            if p is not None:
                assert pl._pair(vid, p) in pl.whitelist, (
                    f"tree edge ({p},{vid}) was never motion-checked")
                assert vid in pl.vertices[p].children[role]
                want = pl.vertices[p].cost[role] + pl.dist(p, vid)
                assert abs(v.cost[role] - want) < TOL, "incoherent tree cost"
            elif vid in pl.roots(role):
                assert v.cost[role] == 0.0
            else:
                assert math.isinf(v.cost[role])
            for c in v.children[role]:
                assert pl.vertices[c].parent[role] == vid
            lp = v.lazy_parent[role]
            if lp is not None:
                assert vid in pl.vertices[lp].lazy_children[role]
            for c in v.lazy_children[role]:
                assert pl.vertices[c].lazy_parent[role] == vid


def check_admissibility(pl: Planner) -> None:
    """Every finite lazy g-value dominates the straight-line bound."""
    for vid, v in pl.vertices.items():
        for role in (A, B):
            if math.isfinite(v.lazy_g[role]):
                assert v.lazy_g[role] >= v.ghat[role] - TOL, (
                    f"lazy_g[{role}]({vid}) below the Euclidean lower bound")


def check_queue_membership(pl: Planner) -> None:
    """At lazy-quiescent points a vertex sits in its lazy queue iff
    inconsistent in that role."""
    for vid, v in pl.vertices.items():
        for role in (A, B):
            inconsistent = v.lazy_rhs[role] != v.lazy_g[role]
            queued = vid in pl.q_lazy[role]
            assert queued == inconsistent, (
                f"queue membership mismatch for {vid} role {role}: "
                f"queued={queued} rhs={v.lazy_rhs[role]} g={v.lazy_g[role]}")


def native_chain_cost(pl: Planner, vid: int, role: int) -> float:
    """Length of the lazy parent chain from vid to a role root."""
    total = 0.0
    seen = {vid}
    while vid not in pl.roots(role):
        p = pl.vertices[vid].lazy_parent[role]
        assert p is not None, f"chain from {vid} does not reach a role-{role} root"
        assert p not in seen, "cycle in lazy parent chain"
        seen.add(p)
        total += pl.dist(p, vid)
        vid = p
    return total


def propagated_chain_cost(pl: Planner, vid: int, slot: int) -> float:
    """Recompute a propagated value from its recorded chain and snapshot."""
    v = pl.vertices[vid]
    chain = v.prop_chain[slot]
    assert chain and chain[0] == vid
    total = sum(pl.dist(a, b) for a, b in zip(chain, chain[1:]))
    src = v.prop_src[slot]
    other = src[0] if src[1] == chain[-1] else src[1]
    return total + pl.dist(chain[-1], other) + v.prop_snapshot[slot]


def check_realizability(pl: Planner, dijkstra_bound: bool = True) -> None:
    """Every finite lazy g-value is realized by its recorded chain and is no
    smaller than the graph distance from the corresponding root."""
    dists = None
    if dijkstra_bound:
        adj = graph_adjacency(pl)
        dists = {A: dijkstra(pl, pl.roots(A), adj), B: dijkstra(pl, pl.roots(B), adj)}
    for vid, v in pl.vertices.items():
        for role in (A, B):
            if not math.isfinite(v.lazy_g[role]):
                continue
            if pl.in_lazy(vid, role):
                if v.lazy_rhs[role] == v.lazy_g[role]:
                    got = native_chain_cost(pl, vid, role)
                    assert abs(got - v.lazy_g[role]) < TOL, (
                        f"native chain for {vid} role {role}: {got} != {v.lazy_g[role]}")
            else:
                got = propagated_chain_cost(pl, vid, role)
                assert abs(got - v.lazy_g[role]) < TOL, (
                    f"propagated chain for {vid} slot {role}: {got} != {v.lazy_g[role]}")
            if dists is not None:
                assert v.lazy_g[role] >= dists[role][vid] - TOL, (
                    f"lazy_g[{role}]({vid})={v.lazy_g[role]} below graph distance "
                    f"{dists[role][vid]}")


def check_solution(pl: Planner, dense_step: float = 1e-4) -> None:
    """Emitted solutions: endpoints, per-edge validity via a dense oracle,
    cost bookkeeping, and strict anytime improvement."""
    costs = [s.cost for s in pl.solutions]
    assert all(b < a for a, b in zip(costs, costs[1:])), "emitted costs not decreasing"
    if not pl.solutions:
        return
    sol = pl.solutions[-1]
    p = pl.problem
    assert abs(path_cost(sol.path) - sol.cost) < 1e-6
    assert abs(sol.cost - pl.c_cur) < TOL
    import numpy as np

    assert np.allclose(sol.path[0], p.start)
    assert any(np.allclose(sol.path[-1], g) for g in p.goals)
    ts = motion_param_grid(dense_step)
    for a, b in zip(sol.path, sol.path[1:]):
        pts = a[None, :] + ts[:, None] * (b - a)[None, :]
        assert bool(np.all(p.states_valid(pts))), "solution edge fails the dense oracle"


def check_planner_invariants(pl: Planner, dense_oracle: bool = False) -> None:
    check_tree_structure(pl)
    check_admissibility(pl)
    check_solution(pl, dense_step=1e-4 if dense_oracle else 1e-3)
