"""Built-in benchmark worlds, all deterministic given their parameters."""

from __future__ import annotations

import math

import numpy as np

from .bench import Scenario
from .space import Bounds, Obstacle, ProblemDef

WORLD_NAMES = ("wallgap2d", "bugtrap2d", "maze2d", "narrow2d", "empty-d", "blocks-r7")


def wallgap_optimal() -> float:
    """Shortest wallgap2d path wraps the wall's top corners."""
    return 2.0 * math.hypot(4.8 - 1.0, 8.0 - 5.0) + 0.4


def optimal_cost(name: str, **params) -> float | None:
    """Known optimal cost for worlds where it is derivable, else None."""
    if name == "wallgap2d":
        return wallgap_optimal()
    if name == "empty-d":
        d = int(params.get("d", 2))
        return math.sqrt(d) * 8.0  # (1,...,1) to (9,...,9)
    return None


def builtin_world(name: str, **params) -> Scenario:
    if name == "wallgap2d":
        problem = ProblemDef(
            dim=2,
            bounds=Bounds([0.0, 0.0], [10.0, 10.0]),
            start=[1.0, 5.0],
            goals=[[9.0, 5.0]],
            obstacles=[Obstacle.box([4.8, 0.0], [5.2, 8.0])],
        )
        return Scenario("wallgap2d", problem)

    if name == "bugtrap2d":
        # C-shaped trap around the start, opening to the right
        walls = [
            Obstacle.box([1.6, 2.8], [2.0, 7.2]),   # back
            Obstacle.box([1.6, 6.8], [4.4, 7.2]),   # top
            Obstacle.box([1.6, 2.8], [4.4, 3.2]),   # bottom
            Obstacle.box([4.0, 5.8], [4.4, 7.2]),   # upper lip
            Obstacle.box([4.0, 2.8], [4.4, 4.2]),   # lower lip
        ]
        problem = ProblemDef(
            dim=2,
            bounds=Bounds([0.0, 0.0], [10.0, 10.0]),
            start=[3.0, 5.0],
            goals=[[8.0, 5.0]],
            obstacles=walls,
        )
        return Scenario("bugtrap2d", problem)

    if name == "maze2d":
        return _maze2d(int(params.get("maze_seed", 0)))

    if name == "narrow2d":
        gap = float(params.get("gap", 0.4))
        lo, hi = 5.0 - gap / 2.0, 5.0 + gap / 2.0
        problem = ProblemDef(
            dim=2,
            bounds=Bounds([0.0, 0.0], [10.0, 10.0]),
            start=[2.0, 5.0],
            goals=[[8.0, 5.0]],
            obstacles=[
                Obstacle.box([4.8, 0.0], [5.2, lo]),
                Obstacle.box([4.8, hi], [5.2, 10.0]),
            ],
        )
        return Scenario("narrow2d", problem)

    if name == "empty-d":
        d = int(params.get("d", 2))
        if d < 1:
            raise ValueError("empty-d needs d >= 1")
        problem = ProblemDef(
            dim=d,
            bounds=Bounds([0.0] * d, [10.0] * d),
            start=[1.0] * d,
            goals=[[9.0] * d],
            obstacles=[],
        )
        return Scenario(f"empty-{d}d", problem)

    if name == "blocks-r7":
        problem = ProblemDef(
            dim=7,
            bounds=Bounds([0.0] * 7, [10.0] * 7),
            start=[1.0] * 7,
            goals=[[9.0] * 7],
            obstacles=[Obstacle.box([3.5] * 7, [6.5] * 7)],
        )
        return Scenario("blocks-r7", problem)

    raise ValueError(f"unknown world {name!r}; known: {', '.join(WORLD_NAMES)}")


def _maze2d(maze_seed: int) -> Scenario:
    """Random axis-aligned clutter with a guaranteed carved corridor.

    A staircase corridor from start to goal is chosen first; candidate
    obstacles intersecting its buffered sweep are rejected, so the world is
    solvable by construction.
    """
    rng = np.random.Generator(np.random.PCG64(0xA5E ^ (maze_seed * 2654435761 % 2**32)))
    start = np.array([0.8, 0.8])
    goal = np.array([9.2, 9.2])
    margin = 0.45

    waypoints = [start.copy()]
    cur = start.copy()
    xs = sorted(rng.uniform(1.5, 8.5, size=3))
    for x in xs:
        cur = np.array([x, cur[1]])
        waypoints.append(cur.copy())
        cur = np.array([x, rng.uniform(1.0, 9.0)])
        waypoints.append(cur.copy())
    waypoints.append(np.array([goal[0], cur[1]]))
    waypoints.append(goal.copy())

    def corridor_clear(lo, hi):
        for a, b in zip(waypoints, waypoints[1:]):
            lo_seg = np.minimum(a, b) - margin
            hi_seg = np.maximum(a, b) + margin
            if np.all(lo < hi_seg) and np.all(hi > lo_seg):
                return False
        return True

    obstacles = []
    attempts = 0
    while len(obstacles) < 14 and attempts < 400:
        attempts += 1
        c = rng.uniform(0.5, 9.5, size=2)
        half = rng.uniform(0.3, 1.1, size=2)
        lo = np.maximum(c - half, 0.0)
        hi = np.minimum(c + half, 10.0)
        if np.any(hi - lo < 0.2):
            continue
        if not corridor_clear(lo, hi):
            continue
        obstacles.append(Obstacle.box(lo, hi))

    problem = ProblemDef(
        dim=2,
        bounds=Bounds([0.0, 0.0], [10.0, 10.0]),
        start=start.tolist(),
        goals=[goal.tolist()],
        obstacles=obstacles,
    )
    return Scenario(f"maze2d-{maze_seed}", problem)
