import numpy as np
import pytest

from biait.space import Bounds, Obstacle, ProblemDef


@pytest.fixture
def wallgap():
    """2D world, bounds [0,10]^2, one wall aabb (4.8,0)-(5.2,8), start (1,5),
    goal (9,5). The reference fixture for most hand-traced expectations."""
    return ProblemDef(
        dim=2,
        bounds=Bounds([0.0, 0.0], [10.0, 10.0]),
        start=[1.0, 5.0],
        goals=[[9.0, 5.0]],
        obstacles=[Obstacle.box([4.8, 0.0], [5.2, 8.0])],
    )


@pytest.fixture
def empty2d():
    return ProblemDef(
        dim=2,
        bounds=Bounds([0.0, 0.0], [10.0, 10.0]),
        start=[1.0, 5.0],
        goals=[[9.0, 5.0]],
        obstacles=[],
    )


def dense_motion_oracle(p: ProblemDef, a, b, step=1e-4) -> bool:
    """Independent straight-line validator sampling at a fixed fine step."""
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    ts = np.append(np.arange(0.0, 1.0, step), 1.0)
    pts = a[None, :] + ts[:, None] * (b - a)[None, :]
    return bool(np.all(p.states_valid(pts)))


def segment_clearance(p: ProblemDef, a, b, step=1e-4) -> float:
    """Min |signed distance to any obstacle boundary| along the segment."""
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    ts = np.append(np.arange(0.0, 1.0, step), 1.0)
    pts = a[None, :] + ts[:, None] * (b - a)[None, :]
    best = np.full(len(pts), np.inf)
    for ob in p.obstacles:
        if ob.kind == "aabb":
            below = ob.aabb_min[None] - pts
            above = pts - ob.aabb_max[None]
            outside = np.maximum(np.maximum(below, above), 0.0)
            d_out = np.linalg.norm(outside, axis=1)
            inside_depth = np.min(
                np.minimum(pts - ob.aabb_min[None], ob.aabb_max[None] - pts), axis=1)
            d = np.where(d_out > 0, d_out, -inside_depth)
        else:
            d = np.linalg.norm(pts - ob.center[None], axis=1) - ob.radius
        best = np.minimum(best, np.abs(d))
    return float(best.min()) if len(p.obstacles) else float("inf")
